//! Pairwise satisfiability over serial frames for the poor man's fragment.
//!
//! Over serial frames, a conjunction in this fragment is satisfiable exactly
//! when every pair of its conjuncts (including each conjunct with itself) is
//! jointly satisfiable, and joint satisfiability of a pair reduces to that of
//! pairs of subformulas. Tabulating all subformula pairs decides the input in
//! polynomial time — no witness is produced, only the verdict and, on UNSAT,
//! the failing pair.

use super::{ensure_poor_mans, SatVerdict, SolveError, TraceStep};
use crate::formula::Formula;
use std::collections::BTreeMap;

/// A table of joint satisfiability over serial frames for every pair of
/// subformulas of one poor man's formula.
pub struct PairTable {
    subformulas: Vec<Formula>,
    ids: BTreeMap<Formula, usize>,
    sat: BTreeMap<(usize, usize), bool>,
}

impl PairTable {
    /// Build the full table for `f`. Errors unless `f` lies in the poor
    /// man's fragment.
    pub fn build(f: &Formula) -> Result<PairTable, SolveError> {
        ensure_poor_mans(f)?;
        let mut table = PairTable {
            subformulas: Vec::new(),
            ids: BTreeMap::new(),
            sat: BTreeMap::new(),
        };
        table.collect(f);
        for i in 0..table.subformulas.len() {
            for j in i..table.subformulas.len() {
                table.fill(i, j);
            }
        }
        Ok(table)
    }

    fn collect(&mut self, f: &Formula) {
        if self.ids.contains_key(f) {
            return;
        }
        let id = self.subformulas.len();
        self.subformulas.push(f.clone());
        self.ids.insert(f.clone(), id);
        match f {
            Formula::Var(_) | Formula::NegVar(_) => {}
            Formula::And(cs) => {
                for c in cs {
                    self.collect(c);
                }
            }
            Formula::Box(b) | Formula::Dia(b) => self.collect(b),
            _ => unreachable!("fragment membership was checked"),
        }
    }

    fn id_of(&self, f: &Formula) -> usize {
        self.ids[f]
    }

    fn fill(&mut self, a: usize, b: usize) -> bool {
        let key = (a.min(b), a.max(b));
        if let Some(&v) = self.sat.get(&key) {
            return v;
        }
        let alpha = self.subformulas[key.0].clone();
        let beta = self.subformulas[key.1].clone();
        let value = self.compute(&alpha, &beta);
        self.sat.insert(key, value);
        value
    }

    /// The decomposition rules. Conjunctions expand one level: the pair is
    /// satisfiable when every pair drawn from the merged conjunct lists
    /// (self-pairs included) is. All other rules descend into strict
    /// subformulas. Termination: the larger size in a pair never grows, and
    /// whenever it stays equal the number of top-level conjunctions drops,
    /// so every recursion path bottoms out.
    fn compute(&mut self, alpha: &Formula, beta: &Formula) -> bool {
        use Formula::{And, Box as Bx, Dia, NegVar, Var};
        if matches!(alpha, And(_)) || matches!(beta, And(_)) {
            let mut parts: Vec<usize> = Vec::new();
            for f in [alpha, beta] {
                for c in f.conjuncts() {
                    parts.push(self.id_of(c));
                }
            }
            parts.sort_unstable();
            parts.dedup();
            for (i, &u) in parts.iter().enumerate() {
                for &v in &parts[i..] {
                    if !self.fill(u, v) {
                        return false;
                    }
                }
            }
            return true;
        }
        match (alpha, beta) {
            (Var(x), NegVar(y)) | (NegVar(x), Var(y)) => x != y,
            (Var(_) | NegVar(_), Var(_) | NegVar(_)) => true,
            (Var(_) | NegVar(_), Bx(psi)) | (Bx(psi), Var(_) | NegVar(_)) => {
                let i = self.id_of(psi);
                self.fill(i, i)
            }
            (Var(_) | NegVar(_), Dia(xi)) | (Dia(xi), Var(_) | NegVar(_)) => {
                let i = self.id_of(xi);
                self.fill(i, i)
            }
            (Bx(psi), Bx(psi2)) => {
                let i = self.id_of(psi);
                let j = self.id_of(psi2);
                self.fill(i, j)
            }
            (Bx(psi), Dia(xi)) | (Dia(xi), Bx(psi)) => {
                let i = self.id_of(psi);
                let j = self.id_of(xi);
                self.fill(i, j)
            }
            (Dia(xi), Dia(xi2)) => {
                let i = self.id_of(xi);
                let j = self.id_of(xi2);
                self.fill(i, i) && self.fill(j, j)
            }
            _ => unreachable!("fragment membership was checked"),
        }
    }

    /// Joint satisfiability of two subformulas of the original input.
    /// `None` when either formula is not a subformula of the input.
    pub fn pair_is_sat(&self, alpha: &Formula, beta: &Formula) -> Option<bool> {
        let a = *self.ids.get(alpha)?;
        let b = *self.ids.get(beta)?;
        Some(self.sat[&(a.min(b), a.max(b))])
    }

    /// Whether the whole input formula is satisfiable over serial frames.
    /// Number of subformula pairs the table holds; a work measure for
    /// scaling experiments.
    pub fn len(&self) -> usize {
        self.sat.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sat.is_empty()
    }

    pub fn is_sat(&self) -> bool {
        self.sat[&(0, 0)]
    }

    /// The first top-level conjunct pair that is jointly unsatisfiable, if
    /// any. Useful for explaining an UNSAT verdict; self-pairs may appear.
    fn failing_pair(&self, f: &Formula) -> Option<(Formula, Formula)> {
        let cs = f.conjuncts();
        for (i, a) in cs.iter().enumerate() {
            for b in &cs[i..] {
                if self.pair_is_sat(a, b) == Some(false) {
                    return Some((a.clone(), b.clone()));
                }
            }
        }
        None
    }
}

/// Decide a poor man's formula over serial frames via the pair table.
/// Polynomial time; the verdict carries no witness model. On UNSAT the trace
/// records the failing conjunct pair.
pub fn poorman_sat_kd_pairs(f: &Formula) -> Result<SatVerdict, SolveError> {
    let table = PairTable::build(f)?;
    if table.is_sat() {
        Ok(SatVerdict::sat_decision_only())
    } else {
        // Unsatisfiability of the whole input always shows up in some
        // top-level pair (a lone conjunct pairs with itself).
        let (a, b) = table
            .failing_pair(f)
            .expect("an unsatisfiable input has a failing conjunct pair");
        let trace = vec![TraceStep {
            rule: "unsatisfiable-pair".to_string(),
            formulas: vec![a.to_string(), b.to_string()],
        }];
        Ok(SatVerdict::unsat_with_trace(trace))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::solve::{sat_kd_tableau, Decision};

    fn p(text: &str) -> Formula {
        parse(text).unwrap()
    }

    #[test]
    fn verdicts_on_small_conjunctions() {
        assert!(poorman_sat_kd_pairs(&p("p & ~q & <>p")).unwrap().is_sat());
        assert!(!poorman_sat_kd_pairs(&p("p & ~p")).unwrap().is_sat());
        assert!(!poorman_sat_kd_pairs(&p("[]p & []~p")).unwrap().is_sat());
        assert!(!poorman_sat_kd_pairs(&p("[]p & <>~p")).unwrap().is_sat());
        assert!(poorman_sat_kd_pairs(&p("[]p & <>p & ~p")).unwrap().is_sat());
    }

    #[test]
    fn unsat_traces_name_the_failing_pair() {
        let v = poorman_sat_kd_pairs(&p("q & []p & []~p & <>q")).unwrap();
        assert_eq!(v.decision, Decision::Unsat);
        let trace = v.trace.unwrap();
        assert_eq!(trace.len(), 1);
        assert_eq!(trace[0].rule, "unsatisfiable-pair");
        assert_eq!(trace[0].formulas, ["[]p", "[]~p"]);
    }

    #[test]
    fn self_pair_failures_are_reported() {
        let v = poorman_sat_kd_pairs(&p("<>([]p & []~p)")).unwrap();
        assert_eq!(v.decision, Decision::Unsat);
        let trace = v.trace.unwrap();
        assert_eq!(trace[0].formulas, ["<>([]p & []~p)", "<>([]p & []~p)"]);
    }

    #[test]
    fn rejects_inputs_outside_the_fragment() {
        assert!(poorman_sat_kd_pairs(&p("p | q")).is_err());
        assert!(poorman_sat_kd_pairs(&p("!(p & q)")).is_err());
    }

    #[test]
    fn pair_lookups_cover_nested_subformulas() {
        let f = p("[](p & q) & <>~p");
        let table = PairTable::build(&f).unwrap();
        assert_eq!(table.pair_is_sat(&p("p & q"), &p("~p")), Some(false));
        assert_eq!(table.pair_is_sat(&p("p"), &p("q")), Some(true));
        assert_eq!(table.pair_is_sat(&p("r"), &p("q")), None);
        assert!(!table.is_sat());
    }

    #[test]
    fn agrees_with_the_general_serial_procedure() {
        let corpus = [
            "p",
            "p & ~p",
            "[]p & <>q & <>~q",
            "[][]p & <><>~p",
            "[](p & q) & <>~q",
            "<>p & <>~p & []q",
            "[]p & [](p & q) & <>(q & ~r)",
            "[]<>p & <>[]~p",
            "[]([]p & <>p) & <>~p",
            "<>(p & []q) & [](~q & <>p)",
        ];
        for text in corpus {
            let f = p(text);
            let fast = poorman_sat_kd_pairs(&f).unwrap();
            let slow = sat_kd_tableau(&f);
            assert_eq!(fast.is_sat(), slow.is_sat(), "disagreement on {text}");
        }
    }
}

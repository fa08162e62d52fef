//! Quantified 3CNF: strict-alternation instances, a truth-preserving
//! normalizer for loose inputs, brute-force truth evaluation, and the
//! encoding into the poor man's fragment over frames with at most two
//! successors. The encoding makes models simulate the quantifier game: each
//! level of a binary assignment tree chooses one variable's value, and
//! clause labels mark the assignments falsifying the matrix.

use super::{ReduceError, AUX_PREFIX};
use crate::formula::Formula;
use serde::{Deserialize, Serialize};

/// The labeling variable every clause label carries; reserved, since
/// instance variables are always spelled `p1..pn`.
fn label_var() -> String {
    format!("{AUX_PREFIX}f")
}

/// A quantified 3CNF instance in strict form: quantifiers alternate
/// starting existential and ending universal (`prefix` is a string over
/// 'E'/'A' of length `n`, so `n` is even), and every clause holds exactly
/// three literals over three distinct variables. Literals are signed
/// 1-based variable indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QbfInstance {
    pub n: u32,
    pub prefix: String,
    pub clauses: Vec<[i32; 3]>,
}

impl QbfInstance {
    pub fn validate(&self) -> Result<(), ReduceError> {
        let bad = |msg: String| Err(ReduceError::InvalidQbf(msg));
        if self.n == 0 || self.n % 2 != 0 {
            return bad(format!("variable count {} is not even and positive", self.n));
        }
        if self.prefix.len() != self.n as usize {
            return bad(format!(
                "prefix length {} does not match n={}",
                self.prefix.len(),
                self.n
            ));
        }
        for (i, q) in self.prefix.chars().enumerate() {
            let expect = if i % 2 == 0 { 'E' } else { 'A' };
            if q != expect {
                return bad(format!(
                    "prefix must alternate starting existential; position {} holds {q}",
                    i + 1
                ));
            }
        }
        for (ci, clause) in self.clauses.iter().enumerate() {
            check_clause_vars(clause, self.n, ci)?;
            let mut vars: Vec<u32> = clause.iter().map(|l| l.unsigned_abs()).collect();
            vars.sort_unstable();
            vars.dedup();
            if vars.len() != 3 {
                return bad(format!("clause {} repeats a variable", ci + 1));
            }
        }
        Ok(())
    }
}

fn check_clause_vars(clause: &[i32; 3], n: u32, ci: usize) -> Result<(), ReduceError> {
    for &lit in clause {
        if lit == 0 || lit.unsigned_abs() > n {
            return Err(ReduceError::InvalidQbf(format!(
                "clause {} holds literal {lit} outside ±1..=±{n}",
                ci + 1
            )));
        }
    }
    Ok(())
}

/// Brute-force truth of a prenex 3CNF under the given quantifier prefix
/// ('E'/'A' per variable, in variable order). Exponential in `n`; the
/// ground truth for reduction tests.
pub fn qbf_truth(prefix: &str, clauses: &[[i32; 3]]) -> bool {
    let quants: Vec<char> = prefix.chars().collect();
    let mut assign = vec![false; quants.len()];
    fn recurse(quants: &[char], clauses: &[[i32; 3]], assign: &mut Vec<bool>, i: usize) -> bool {
        if i == quants.len() {
            return clauses.iter().all(|c| {
                c.iter().any(|&l| {
                    let value = assign[l.unsigned_abs() as usize - 1];
                    if l > 0 {
                        value
                    } else {
                        !value
                    }
                })
            });
        }
        let outcomes = [false, true].map(|v| {
            assign[i] = v;
            recurse(quants, clauses, assign, i + 1)
        });
        match quants[i] {
            'E' => outcomes[0] || outcomes[1],
            'A' => outcomes[0] && outcomes[1],
            other => panic!("quantifier must be E or A, found {other}"),
        }
    }
    recurse(&quants, clauses, &mut assign, 0)
}

/// Rewrite an arbitrary prenex 3CNF into strict form, preserving truth:
/// tautological clauses are dropped, a clause using a variable twice is
/// split in two over a fresh innermost universal, and dummy quantifiers
/// restore strict ∃∀ alternation. Variables are renamed to their positions
/// in the final prefix.
pub fn normalize_qbf(prefix: &str, clauses: &[[i32; 3]]) -> Result<QbfInstance, ReduceError> {
    let n = prefix.len() as u32;
    if n == 0 {
        return Err(ReduceError::InvalidQbf("empty prefix".to_string()));
    }
    let mut quants: Vec<char> = Vec::with_capacity(prefix.len());
    for q in prefix.chars() {
        if q != 'E' && q != 'A' {
            return Err(ReduceError::InvalidQbf(format!(
                "quantifier must be E or A, found {q}"
            )));
        }
        quants.push(q);
    }
    for (ci, clause) in clauses.iter().enumerate() {
        check_clause_vars(clause, n, ci)?;
    }

    let conforming = QbfInstance {
        n,
        prefix: prefix.to_string(),
        clauses: clauses.to_vec(),
    };
    if conforming.validate().is_ok() {
        return Ok(conforming);
    }

    // Drop tautologies: a clause with complementary literals always holds.
    let mut work: Vec<[i32; 3]> = clauses
        .iter()
        .filter(|c| !c.iter().any(|&l| c.contains(&-l)))
        .copied()
        .collect();

    // Split clauses that mention a variable twice (necessarily with equal
    // polarity now): l ∨ l ∨ m holds exactly when both l ∨ u ∨ m and
    // l ∨ ~u ∨ m do, for a fresh universally quantified u.
    loop {
        let Some(pos) = work.iter().position(|c| {
            let mut vs: Vec<u32> = c.iter().map(|l| l.unsigned_abs()).collect();
            vs.sort_unstable();
            vs.windows(2).any(|w| w[0] == w[1])
        }) else {
            break;
        };
        let clause = work.remove(pos);
        let (dup, rest) = if clause[0].unsigned_abs() == clause[1].unsigned_abs() {
            (clause[0], clause[2])
        } else if clause[0].unsigned_abs() == clause[2].unsigned_abs() {
            (clause[0], clause[1])
        } else {
            (clause[1], clause[0])
        };
        quants.push('A');
        let u = quants.len() as i32;
        work.push([dup, u, rest]);
        work.push([dup, -u, rest]);
    }

    // Interleave dummy quantifiers until the sequence strictly alternates
    // E, A, E, A, …; `place[old]` is the final position of original
    // variable `old` (1-based).
    let mut final_quants: Vec<char> = Vec::new();
    let mut place: Vec<u32> = vec![0; quants.len() + 1];
    for (old, &q) in quants.iter().enumerate() {
        let expected = |len: usize| if len % 2 == 0 { 'E' } else { 'A' };
        while expected(final_quants.len()) != q {
            final_quants.push(expected(final_quants.len()));
        }
        final_quants.push(q);
        place[old + 1] = final_quants.len() as u32;
    }
    if final_quants.len() % 2 != 0 {
        final_quants.push('A');
    }

    let clauses: Vec<[i32; 3]> = work
        .iter()
        .map(|c| {
            c.map(|l| {
                let new = place[l.unsigned_abs() as usize] as i32;
                if l > 0 {
                    new
                } else {
                    -new
                }
            })
        })
        .collect();
    let out = QbfInstance {
        n: final_quants.len() as u32,
        prefix: final_quants.into_iter().collect(),
        clauses,
    };
    debug_assert!(out.validate().is_ok());
    Ok(out)
}

/// The assignment-tree skeleton: a conjunction that forces, beneath any
/// world satisfying it, a depth-`n` binary tree whose level `i` branches
/// decide variable `p_i` — one successor locks `p_i` true for the whole
/// subtree below, the other locks it false.
pub fn phi_exp(n: u32) -> Formula {
    assert!(n >= 1, "at least one level is required");
    let mut parts = Vec::new();
    for i in 1..=n {
        let depth = (n - i) as usize;
        let name = format!("p{i}");
        let pair = Formula::and(vec![
            Formula::dia(Formula::boxed_n(depth, Formula::var(name.clone()))),
            Formula::dia(Formula::boxed_n(depth, Formula::neg_var(name))),
        ]);
        parts.push(Formula::boxed_n(i as usize - 1, pair));
    }
    Formula::and(parts)
}

/// The clause label: a formula true at a root exactly when the assignment
/// branch selecting `ℓ1, ℓ2, ℓ3` (variables sorted by index) reaches a
/// depth-`n` world carrying the labeling variable. Conjoined with the
/// skeleton, it marks the assignments extending those three literals.
pub fn label_false(lits: [i32; 3], n: u32) -> Result<Formula, ReduceError> {
    let mut sorted = lits;
    sorted.sort_by_key(|l| l.unsigned_abs());
    check_clause_vars(&sorted, n, 0)?;
    let [a, b, c] = sorted.map(|l| l.unsigned_abs());
    if a == b || b == c {
        return Err(ReduceError::InvalidQbf(
            "label literals must use three distinct variables".to_string(),
        ));
    }
    let mut body: Vec<Formula> = sorted
        .iter()
        .map(|&l| {
            let name = format!("p{}", l.unsigned_abs());
            if l > 0 {
                Formula::var(name)
            } else {
                Formula::neg_var(name)
            }
        })
        .collect();
    body.push(Formula::var(label_var()));
    let mut out = Formula::boxed_n((n - c) as usize, Formula::and(body));
    out = Formula::boxed_n((c - b - 1) as usize, Formula::dia(out));
    out = Formula::boxed_n((b - a - 1) as usize, Formula::dia(out));
    out = Formula::boxed_n((a - 1) as usize, Formula::dia(out));
    Ok(out)
}

/// Encode truth of a strict quantified 3CNF as satisfiability over frames
/// with at most two successors. The two-successor cap makes the assignment
/// tree of [`phi_exp`] exact — each level has exactly the true-branch and
/// the false-branch. Each clause contributes a [`label_false`] over its
/// *negated* literals, planting the labeling variable on every branch that
/// falsifies the clause; the final conjunct walks existential levels by
/// diamond and universal levels by box, demanding an unlabeled leaf — a
/// winning strategy for the existential player.
///
/// The instance is true iff the output is satisfiable over such frames.
pub fn reduce_qbf(q: &QbfInstance) -> Formula {
    q.validate().expect("normalize loose instances first");
    let mut parts = vec![phi_exp(q.n)];
    for clause in &q.clauses {
        let negated = clause.map(|l| -l);
        parts.push(label_false(negated, q.n).expect("clauses were validated"));
    }
    let mut tail = Formula::neg_var(label_var());
    for _ in 0..q.n / 2 {
        tail = Formula::dia(Formula::boxed(tail));
    }
    parts.push(tail);
    Formula::and(parts)
}

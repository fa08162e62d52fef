//! The general satisfiability procedure: a recursive decomposition of
//! conjunct sets with branching on disjunctions, instantiated per frame
//! class. Always produces a witness model on SAT.

use super::{witness_to_model, SatVerdict, WitnessNode};
use crate::formula::Formula;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// No frame constraint: worlds may have any number of successors.
    Arbitrary,
    /// Every world needs at least one successor; leaves get self-loops.
    Serial,
    /// At most one successor: all diamond obligations share it.
    AtMostOne,
    /// At most two successors: diamond obligations split into two groups.
    AtMostTwo,
}

struct Engine {
    mode: Mode,
    memo: HashMap<Vec<Formula>, Option<Rc<WitnessNode>>>,
}

/// The non-conjunctive parts of a conjunct set, ready for rule application.
#[derive(Default)]
struct Split {
    /// var -> required truth value; None signals a contradiction was found.
    lits: BTreeMap<String, bool>,
    contradiction: bool,
    boxes: Vec<Formula>,
    dias: Vec<Formula>,
    /// Index (into the canonical item list) of the first disjunction.
    first_or: Option<usize>,
}

impl Engine {
    fn new(mode: Mode) -> Engine {
        Engine {
            mode,
            memo: HashMap::new(),
        }
    }

    /// Flatten nested conjunctions, then sort and deduplicate. The result is
    /// the memoization key and the working item list.
    fn canonicalize(items: Vec<Formula>) -> Vec<Formula> {
        let mut out = Vec::new();
        let mut stack = items;
        while let Some(f) = stack.pop() {
            match f {
                Formula::And(cs) => stack.extend(cs),
                Formula::ConstTrue => {}
                other => out.push(other),
            }
        }
        out.sort();
        out.dedup();
        out
    }

    fn split(items: &[Formula]) -> Split {
        let mut s = Split::default();
        for (i, f) in items.iter().enumerate() {
            match f {
                Formula::Var(v) => {
                    if s.lits.insert(v.clone(), true) == Some(false) {
                        s.contradiction = true;
                    }
                }
                Formula::NegVar(v) => {
                    if s.lits.insert(v.clone(), false) == Some(true) {
                        s.contradiction = true;
                    }
                }
                Formula::ConstFalse => s.contradiction = true,
                Formula::ConstTrue => {}
                Formula::Box(b) => s.boxes.push((**b).clone()),
                Formula::Dia(b) => s.dias.push((**b).clone()),
                Formula::Or(_) => {
                    if s.first_or.is_none() {
                        s.first_or = Some(i);
                    }
                }
                Formula::And(_) => unreachable!("conjunctions are flattened"),
                Formula::Not(_) => {
                    unreachable!("the solver expects negation normal form")
                }
            }
        }
        s
    }

    fn sat_conjuncts(&mut self, items: Vec<Formula>) -> Option<Rc<WitnessNode>> {
        let items = Self::canonicalize(items);
        if let Some(hit) = self.memo.get(&items) {
            return hit.clone();
        }
        let result = self.solve_canonical(&items);
        self.memo.insert(items, result.clone());
        result
    }

    fn solve_canonical(&mut self, items: &[Formula]) -> Option<Rc<WitnessNode>> {
        let s = Engine::split(items);
        if s.contradiction {
            return None;
        }
        if let Some(i) = s.first_or {
            let Formula::Or(disjuncts) = &items[i] else {
                unreachable!()
            };
            for d in disjuncts.clone() {
                let mut rest: Vec<Formula> = items.to_vec();
                rest[i] = d;
                if let Some(node) = self.sat_conjuncts(rest) {
                    return Some(node);
                }
            }
            return None;
        }
        let shape: Option<(Vec<Rc<WitnessNode>>, bool)> = match self.mode {
            Mode::Arbitrary => self
                .one_child_per_diamond(&s.boxes, &s.dias)
                .map(|children| (children, false)),
            Mode::Serial => {
                if s.dias.is_empty() && s.boxes.is_empty() {
                    Some((vec![], true))
                } else if s.dias.is_empty() {
                    self.sat_conjuncts(s.boxes.clone())
                        .map(|child| (vec![child], false))
                } else {
                    self.one_child_per_diamond(&s.boxes, &s.dias)
                        .map(|children| (children, false))
                }
            }
            Mode::AtMostOne => {
                if s.dias.is_empty() {
                    Some((vec![], false))
                } else {
                    let mut obligation = s.boxes.clone();
                    obligation.extend(s.dias.iter().cloned());
                    self.sat_conjuncts(obligation)
                        .map(|child| (vec![child], false))
                }
            }
            Mode::AtMostTwo => {
                if s.dias.is_empty() {
                    Some((vec![], false))
                } else {
                    two_partitions(s.dias.len())
                        .into_iter()
                        .find_map(|(g1, g2)| self.try_groups(&s.boxes, &s.dias, &g1, &g2))
                        .map(|children| (children, false))
                }
            }
        };
        shape.map(|(children, self_loop)| {
            let true_vars = s
                .lits
                .iter()
                .filter(|(_, &v)| v)
                .map(|(k, _)| k.clone())
                .collect();
            Rc::new(WitnessNode {
                true_vars,
                children,
                self_loop,
            })
        })
    }

    fn one_child_per_diamond(
        &mut self,
        boxes: &[Formula],
        dias: &[Formula],
    ) -> Option<Vec<Rc<WitnessNode>>> {
        let mut children = Vec::with_capacity(dias.len());
        for xi in dias {
            let mut obligation = boxes.to_vec();
            obligation.push(xi.clone());
            children.push(self.sat_conjuncts(obligation)?);
        }
        Some(children)
    }

    fn try_groups(
        &mut self,
        boxes: &[Formula],
        dias: &[Formula],
        g1: &[usize],
        g2: &[usize],
    ) -> Option<Vec<Rc<WitnessNode>>> {
        let mut children = Vec::with_capacity(2);
        for group in [g1, g2] {
            if group.is_empty() {
                continue;
            }
            let mut obligation = boxes.to_vec();
            obligation.extend(group.iter().map(|&i| dias[i].clone()));
            children.push(self.sat_conjuncts(obligation)?);
        }
        Some(children)
    }
}

/// All ways to split diamond indices `0..m` into one or two nonempty groups,
/// with index 0 pinned to the first group. Ordered by size of the first
/// group, so the single-group split (everything together) comes last.
fn two_partitions(m: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    assert!(m >= 1);
    if m == 1 {
        return vec![(vec![0], vec![])];
    }
    assert!(m <= 24, "too many diamond conjuncts at one level: {m}");
    let mut splits: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for mask in 0u32..(1 << (m - 1)) {
        let mut g1 = vec![0];
        let mut g2 = Vec::new();
        for i in 1..m {
            if mask & (1 << (i - 1)) != 0 {
                g1.push(i);
            } else {
                g2.push(i);
            }
        }
        splits.push((g1, g2));
    }
    splits.sort_by_key(|(g1, _)| g1.len());
    splits
}

fn run(f: &Formula, mode: Mode) -> SatVerdict {
    let g = f.to_nnf();
    match Engine::new(mode).sat_conjuncts(vec![g]) {
        Some(node) => SatVerdict::sat_with(witness_to_model(&node)),
        None => SatVerdict::unsat(),
    }
}

/// Satisfiability with no frame constraint. Worst-case exponential time
/// (disjunction branching and per-diamond successor obligations), but exact
/// on all inputs and witness-producing.
pub fn sat_k_tableau(f: &Formula) -> SatVerdict {
    run(f, Mode::Arbitrary)
}

/// Satisfiability over serial frames (every world has a successor).
/// Witnesses are finite trees whose leaves carry self-loops.
pub fn sat_kd_tableau(f: &Formula) -> SatVerdict {
    run(f, Mode::Serial)
}

/// Satisfiability over frames where every world has at most one successor.
/// All diamond obligations at a world are merged into its single successor.
pub fn sat_le1(f: &Formula) -> SatVerdict {
    run(f, Mode::AtMostOne)
}

/// Satisfiability over frames where every world has at most two successors.
/// Diamond obligations at a world are distributed over the two successors;
/// all two-group splits are tried.
pub fn sat_le2(f: &Formula) -> SatVerdict {
    run(f, Mode::AtMostTwo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::model::FrameClass;
    use crate::solve::Decision;

    fn p(text: &str) -> Formula {
        parse(text).unwrap()
    }

    fn check_witness(v: &SatVerdict, f: &Formula, fc: &FrameClass) {
        let m = v.witness.as_ref().expect("SAT verdicts carry witnesses");
        m.validate().unwrap();
        assert!(m.conforms_to(fc), "witness must lie in {fc:?}");
        assert!(m.evaluate_at_root(f), "witness must satisfy the formula");
    }

    #[test]
    fn arbitrary_frames_basic_verdicts() {
        assert!(!sat_k_tableau(&p("[]p & []~p & <>q")).is_sat());
        assert!(!sat_k_tableau(&p("<>(p & ~p)")).is_sat());
        assert!(!sat_k_tableau(&p("[]p & <>~p")).is_sat());

        let f = p("[]p & []~p");
        let v = sat_k_tableau(&f);
        assert!(v.is_sat(), "vacuously true at a dead end");
        check_witness(&v, &f, &FrameClass::K);
        assert_eq!(v.witness.unwrap().worlds.len(), 1);
    }

    #[test]
    fn serial_frames_forbid_dead_ends() {
        assert!(!sat_kd_tableau(&p("[]p & []~p")).is_sat());
        assert!(!sat_kd_tableau(&p("[]false")).is_sat());

        let f = p("[]p & <>p & ~p");
        let v = sat_kd_tableau(&f);
        assert!(v.is_sat());
        check_witness(&v, &f, &FrameClass::Serial);
        let m = v.witness.unwrap();
        assert_eq!(m.worlds.len(), 2, "root plus one looped successor");
        assert!(m.relation.contains(&(1, 1)), "leaf carries a self-loop");
    }

    #[test]
    fn single_successor_frames_merge_diamonds() {
        assert!(!sat_le1(&p("<>p & <>~p")).is_sat());

        let f = p("<>p & <>q & []r");
        let v = sat_le1(&f);
        assert!(v.is_sat(), "compatible diamonds share the one successor");
        check_witness(&v, &f, &FrameClass::AtMostOne);
        assert_eq!(v.witness.unwrap().worlds.len(), 2);
    }

    #[test]
    fn two_successor_frames_split_diamonds() {
        let f = p("<>p & <>~p");
        let v = sat_le2(&f);
        assert!(v.is_sat());
        check_witness(&v, &f, &FrameClass::AtMostTwo);

        assert!(!sat_le2(&p("<>(p & q) & <>(p & ~q) & <>(~p & q)")).is_sat());

        let f = p("<>(p & q) & <>(p & ~q) & <>p");
        let v = sat_le2(&f);
        assert!(v.is_sat(), "the third diamond can share a successor");
        check_witness(&v, &f, &FrameClass::AtMostTwo);
    }

    #[test]
    fn disjunctions_branch() {
        let f = p("(p | q) & []~p & <>true");
        for v in [sat_k_tableau(&f), sat_kd_tableau(&f), sat_le1(&f), sat_le2(&f)] {
            assert!(v.is_sat());
        }
        check_witness(&sat_k_tableau(&f), &f, &FrameClass::K);

        let g = p("(p | q) & ~p & ~q");
        assert_eq!(sat_k_tableau(&g).decision, Decision::Unsat);
    }

    #[test]
    fn general_negation_is_normalized_away() {
        let f = p("!([]p | <>q) & <>~p");
        let v = sat_k_tableau(&f);
        assert!(v.is_sat());
        check_witness(&v, &f, &FrameClass::K);

        assert!(!sat_k_tableau(&p("!(p | ~p)")).is_sat());
    }

    #[test]
    fn nested_obligations_propagate_boxes() {
        // Lifting the incompatible pair one level keeps it unsatisfiable.
        assert!(!sat_k_tableau(&p("[]([]p & <>~p) & <>q")).is_sat());
        // With no diamond above, the conflict below is never exercised.
        assert!(sat_k_tableau(&p("[]([]p & <>~p)")).is_sat());
        // On serial frames the box body must hold somewhere.
        assert!(!sat_kd_tableau(&p("[]([]p & <>~p)")).is_sat());
    }

    #[test]
    fn partition_order_prefers_small_first_groups() {
        let splits = two_partitions(3);
        assert_eq!(splits.len(), 4);
        assert_eq!(splits[0], (vec![0], vec![1, 2]));
        assert_eq!(splits.last().unwrap(), &(vec![0, 1, 2], vec![]));
    }

    #[test]
    fn deterministic_witnesses() {
        let f = p("<>p & <>~p & <>(p & q)");
        let a = sat_k_tableau(&f).witness.unwrap();
        let b = sat_k_tableau(&f).witness.unwrap();
        assert_eq!(a, b);
    }
}

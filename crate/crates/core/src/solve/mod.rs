//! Decision procedures for satisfiability over each frame class: a general
//! recursive solver with disjunction branching, plus the fast procedures
//! available inside the poor man's fragment (atomic negation, conjunction,
//! box, diamond).

mod pairs;
mod poorman;
mod tableau;

pub use pairs::{poorman_sat_kd_pairs, PairTable};
pub use poorman::{poorman_sat_k, poorman_sat_le1};
pub use tableau::{sat_k_tableau, sat_kd_tableau, sat_le1, sat_le2};

use crate::formula::{Formula, OperatorSet};
use crate::model::{FrameClass, KripkeModel, World};
use crate::oracle::fixed_frame_sat;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::rc::Rc;

/// The two possible answers of a decision procedure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Sat,
    Unsat,
}

/// One recorded step of a procedure's reasoning, serializable for
/// machine-readable traces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub rule: String,
    pub formulas: Vec<String>,
}

/// Outcome of a decision procedure: the verdict, an optional witness model
/// (present only on SAT, and only for procedures that build models), and an
/// optional trace.
#[derive(Debug, Clone)]
pub struct SatVerdict {
    pub decision: Decision,
    pub witness: Option<KripkeModel>,
    pub trace: Option<Vec<TraceStep>>,
}

impl SatVerdict {
    pub fn is_sat(&self) -> bool {
        self.decision == Decision::Sat
    }

    pub(crate) fn sat_with(witness: KripkeModel) -> SatVerdict {
        SatVerdict {
            decision: Decision::Sat,
            witness: Some(witness),
            trace: None,
        }
    }

    pub(crate) fn sat_decision_only() -> SatVerdict {
        SatVerdict {
            decision: Decision::Sat,
            witness: None,
            trace: None,
        }
    }

    pub(crate) fn unsat() -> SatVerdict {
        SatVerdict {
            decision: Decision::Unsat,
            witness: None,
            trace: None,
        }
    }

    pub(crate) fn unsat_with_trace(trace: Vec<TraceStep>) -> SatVerdict {
        SatVerdict {
            decision: Decision::Unsat,
            witness: None,
            trace: Some(trace),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("formula lies outside the poor man's fragment (operators: {0})")]
    NotPoorMans(OperatorSet),
}

pub(crate) fn ensure_poor_mans(f: &Formula) -> Result<(), SolveError> {
    if f.is_poor_mans() {
        Ok(())
    } else {
        Err(SolveError::NotPoorMans(f.operator_set()))
    }
}

/// A witness model under construction: a tree of worlds, possibly sharing
/// subtrees, with self-loops marking serial leaves. Unfolded into a
/// [`KripkeModel`] on demand (shared subtrees become distinct worlds).
#[derive(Debug)]
pub(crate) struct WitnessNode {
    pub true_vars: BTreeSet<String>,
    pub children: Vec<Rc<WitnessNode>>,
    pub self_loop: bool,
}

pub(crate) fn witness_to_model(root: &Rc<WitnessNode>) -> KripkeModel {
    let mut relation: BTreeSet<(World, World)> = BTreeSet::new();
    let mut valuation: BTreeMap<String, BTreeSet<World>> = BTreeMap::new();
    let mut queue: VecDeque<(Rc<WitnessNode>, World)> = VecDeque::new();
    queue.push_back((Rc::clone(root), 0));
    let mut next: World = 1;
    let mut count: World = 0;
    while let Some((node, id)) = queue.pop_front() {
        count += 1;
        for v in &node.true_vars {
            valuation.entry(v.clone()).or_default().insert(id);
        }
        if node.self_loop {
            relation.insert((id, id));
        }
        for c in &node.children {
            relation.insert((id, next));
            queue.push_back((Rc::clone(c), next));
            next += 1;
        }
    }
    KripkeModel {
        worlds: (0..count).collect(),
        relation,
        valuation,
        root: 0,
    }
}

/// Decide satisfiability of `f` over the frame class, routing to the
/// fastest applicable procedure: poor man's inputs get the specialized
/// solvers (pair table for serial frames, the single-chain recursion for
/// at-most-one frames, the branching recursion for K); everything else goes
/// through the general tableau. Fixed frames delegate to the exhaustive
/// fixed-frame search.
pub fn sat(f: &Formula, fc: &FrameClass) -> SatVerdict {
    if let FrameClass::Fixed(frame) = fc {
        return match fixed_frame_sat(f, frame) {
            Some(m) => SatVerdict::sat_with(m),
            None => SatVerdict::unsat(),
        };
    }
    if f.is_poor_mans() {
        match fc {
            FrameClass::K => poorman_sat_k(f).expect("fragment checked"),
            FrameClass::Serial => poorman_sat_kd_pairs(f).expect("fragment checked"),
            FrameClass::AtMostOne => poorman_sat_le1(f).expect("fragment checked"),
            FrameClass::AtMostTwo => sat_le2(f),
            FrameClass::Fixed(_) => unreachable!(),
        }
    } else {
        match fc {
            FrameClass::K => sat_k_tableau(f),
            FrameClass::Serial => sat_kd_tableau(f),
            FrameClass::AtMostOne => sat_le1(f),
            FrameClass::AtMostTwo => sat_le2(f),
            FrameClass::Fixed(_) => unreachable!(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::model::frame3;

    #[test]
    fn dispatcher_examples() {
        let k = FrameClass::K;
        let v = sat(&parse("[]p & <>~p").unwrap(), &k);
        assert!(!v.is_sat(), "every successor must satisfy p and one must not");

        let v = sat(&parse("<>p & <>~p").unwrap(), &FrameClass::AtMostOne);
        assert_eq!(v.decision, Decision::Unsat);

        let v = sat(&parse("p & ~p").unwrap(), &FrameClass::Serial);
        assert_eq!(v.decision, Decision::Unsat);

        let v = sat(&parse("<>p & <>~p").unwrap(), &FrameClass::Fixed(frame3()));
        assert!(v.is_sat());
        assert!(v.witness.is_some());
    }

    #[test]
    fn dispatcher_agrees_with_oracle_on_a_small_mixed_corpus() {
        use crate::oracle::{brute_force_sat, completeness_bound};
        let texts = [
            "p",
            "p & ~p",
            "[]p & <>q",
            "<>p & <>~p",
            "(p | q) & []~p",
            "!(p & q) & <>p",
            "[]false",
            "<>true & []p",
        ];
        for fc in [
            FrameClass::K,
            FrameClass::Serial,
            FrameClass::AtMostOne,
            FrameClass::AtMostTwo,
        ] {
            for text in texts {
                let f = parse(text).unwrap();
                let bound = completeness_bound(&f, &fc);
                let oracle = brute_force_sat(&f, &fc, bound);
                let verdict = sat(&f, &fc);
                assert_eq!(
                    verdict.is_sat(),
                    oracle.is_sat(),
                    "disagreement on {text} over {fc:?}"
                );
            }
        }
    }

    #[test]
    fn witnesses_unfold_shared_subtrees() {
        let leaf = Rc::new(WitnessNode {
            true_vars: BTreeSet::from(["p".to_string()]),
            children: vec![],
            self_loop: false,
        });
        let root = Rc::new(WitnessNode {
            true_vars: BTreeSet::new(),
            children: vec![Rc::clone(&leaf), leaf],
            self_loop: false,
        });
        let m = witness_to_model(&root);
        assert_eq!(m.worlds.len(), 3, "shared leaf becomes two worlds");
        assert!(m.evaluate_at_root(&parse("[]p & <>p").unwrap()));
    }
}

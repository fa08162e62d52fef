//! Kripke structures: pointed models, bare frames, frame classes, and
//! formula evaluation.

use crate::formula::Formula;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// World identifier within a model or frame.
pub type World = u32;

/// A pointed Kripke model. Variables absent from the valuation are false at
/// every world.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KripkeModel {
    pub worlds: BTreeSet<World>,
    pub relation: BTreeSet<(World, World)>,
    pub valuation: BTreeMap<String, BTreeSet<World>>,
    pub root: World,
}

/// A pointed frame: a model without a valuation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frame {
    pub worlds: BTreeSet<World>,
    pub relation: BTreeSet<(World, World)>,
    pub root: World,
}

/// The classes of frames the solvers and oracles quantify over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrameClass {
    /// All frames.
    K,
    /// Frames where every world has at least one successor.
    Serial,
    /// Frames where every world has at most one successor.
    AtMostOne,
    /// Frames where every world has at most two successors.
    AtMostTwo,
    /// A single fixed frame; satisfiability asks for a valuation only.
    Fixed(Frame),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("model has no worlds")]
    Empty,
    #[error("root world {0} is not in the world set")]
    RootMissing(World),
    #[error("relation edge ({0}, {1}) mentions a world outside the world set")]
    DanglingEdge(World, World),
    #[error("valuation of {0:?} mentions world {1} outside the world set")]
    DanglingValuation(String, World),
}

impl Frame {
    pub fn validate(&self) -> Result<(), ModelError> {
        validate_shape(&self.worlds, &self.relation, self.root)
    }

    /// Successors of `w`, in ascending order.
    pub fn successors(&self, w: World) -> impl Iterator<Item = World> + '_ {
        self.relation
            .range((w, World::MIN)..=(w, World::MAX))
            .map(|&(_, v)| v)
    }
}

impl KripkeModel {
    pub fn validate(&self) -> Result<(), ModelError> {
        validate_shape(&self.worlds, &self.relation, self.root)?;
        for (var, worlds) in &self.valuation {
            for &w in worlds {
                if !self.worlds.contains(&w) {
                    return Err(ModelError::DanglingValuation(var.clone(), w));
                }
            }
        }
        Ok(())
    }

    /// Successors of `w`, in ascending order.
    pub fn successors(&self, w: World) -> impl Iterator<Item = World> + '_ {
        self.relation
            .range((w, World::MIN)..=(w, World::MAX))
            .map(|&(_, v)| v)
    }

    /// Truth of a variable at a world; absent variables are false.
    pub fn var_holds(&self, var: &str, w: World) -> bool {
        self.valuation.get(var).is_some_and(|ws| ws.contains(&w))
    }

    /// Truth of `f` at world `w` under the standard relational semantics.
    pub fn evaluate(&self, w: World, f: &Formula) -> bool {
        debug_assert!(self.worlds.contains(&w), "evaluation at unknown world {w}");
        match f {
            Formula::Var(n) => self.var_holds(n, w),
            Formula::NegVar(n) => !self.var_holds(n, w),
            Formula::ConstTrue => true,
            Formula::ConstFalse => false,
            Formula::Not(c) => !self.evaluate(w, c),
            Formula::And(cs) => cs.iter().all(|c| self.evaluate(w, c)),
            Formula::Or(cs) => cs.iter().any(|c| self.evaluate(w, c)),
            Formula::Box(c) => self.successors(w).all(|v| self.evaluate(v, c)),
            Formula::Dia(c) => self.successors(w).any(|v| self.evaluate(v, c)),
        }
    }

    /// Truth of `f` at the distinguished root.
    pub fn evaluate_at_root(&self, f: &Formula) -> bool {
        self.evaluate(self.root, f)
    }

    /// Whether the model's frame belongs to the given class.
    pub fn conforms_to(&self, fc: &FrameClass) -> bool {
        let out_degree = |w: World| self.successors(w).count();
        match fc {
            FrameClass::K => true,
            FrameClass::Serial => self.worlds.iter().all(|&w| out_degree(w) >= 1),
            FrameClass::AtMostOne => self.worlds.iter().all(|&w| out_degree(w) <= 1),
            FrameClass::AtMostTwo => self.worlds.iter().all(|&w| out_degree(w) <= 2),
            // The model must live on the given frame; its root may be any
            // world, since fixed-frame satisfaction quantifies over
            // evaluation points.
            FrameClass::Fixed(frame) => {
                self.worlds == frame.worlds && self.relation == frame.relation
            }
        }
    }
}

fn validate_shape(
    worlds: &BTreeSet<World>,
    relation: &BTreeSet<(World, World)>,
    root: World,
) -> Result<(), ModelError> {
    if worlds.is_empty() {
        return Err(ModelError::Empty);
    }
    if !worlds.contains(&root) {
        return Err(ModelError::RootMissing(root));
    }
    for &(u, v) in relation {
        if !worlds.contains(&u) || !worlds.contains(&v) {
            return Err(ModelError::DanglingEdge(u, v));
        }
    }
    Ok(())
}

/// The four-world frame with root 0 pointing at three leaves 1, 2, 3.
pub fn frame3() -> Frame {
    Frame {
        worlds: (0..=3).collect(),
        relation: (1..=3).map(|leaf| (0, leaf)).collect(),
        root: 0,
    }
}

/// Look up a built-in frame by its command-line name.
pub fn builtin_frame(name: &str) -> Option<Frame> {
    match name {
        "frame3" => Some(frame3()),
        _ => None,
    }
}

//! Brute-force satisfiability oracles: exhaustive search over canonical
//! model spaces, complete up to a computable world-count bound per frame
//! class. Deliberately simple — this module is the ground truth the
//! decision procedures are tested against, not the fast path.

use crate::formula::Formula;
use crate::model::{Frame, FrameClass, KripkeModel, World};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::ops::ControlFlow;
use std::rc::Rc;

/// Result of a bounded exhaustive search.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleOutcome {
    /// A witness model within the requested world budget.
    Sat(KripkeModel),
    /// Exhaustion proved unsatisfiability: the completeness bound fit
    /// within the budget and no model exists.
    Unsat,
    /// The budget was exhausted below the completeness bound without
    /// finding a model; no verdict.
    BoundExceeded,
}

impl OracleOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, OracleOutcome::Sat(_))
    }

    pub fn witness(&self) -> Option<&KripkeModel> {
        match self {
            OracleOutcome::Sat(m) => Some(m),
            _ => None,
        }
    }
}

/// Number of distinct diamond subformulas of `f` (in negation normal form)
/// at each modal depth `0..md`.
fn per_level_diamond_counts(f: &Formula) -> Vec<usize> {
    fn walk<'a>(f: &'a Formula, d: usize, sets: &mut [BTreeSet<&'a Formula>]) {
        match f {
            Formula::Var(_) | Formula::NegVar(_) | Formula::ConstTrue | Formula::ConstFalse => {}
            Formula::Not(c) => walk(c, d, sets),
            Formula::And(cs) | Formula::Or(cs) => {
                for c in cs {
                    walk(c, d, sets);
                }
            }
            Formula::Box(c) => walk(c, d + 1, sets),
            Formula::Dia(c) => {
                sets[d].insert(f);
                walk(c, d + 1, sets);
            }
        }
    }
    let g = f.to_nnf();
    let mut sets = vec![BTreeSet::new(); g.modal_depth()];
    walk(&g, 0, &mut sets);
    sets.iter().map(BTreeSet::len).collect()
}

/// Parameters of the canonical model space searched for one frame class.
struct SearchSpace {
    /// Maximum number of children of a node at each depth `0..md`.
    branching: Vec<usize>,
    /// Whether leaves may occur only at depth exactly `md` (serial frames:
    /// every shallower node keeps a successor).
    leaves_only_at_md: bool,
    /// Whether leaves carry a self-loop (restores seriality; inert because
    /// obligations at depth `md` are modality-free).
    leaf_self_loops: bool,
}

fn search_space(f: &Formula, fc: &FrameClass) -> SearchSpace {
    let counts = per_level_diamond_counts(f);
    match fc {
        FrameClass::K => SearchSpace {
            branching: counts,
            leaves_only_at_md: false,
            leaf_self_loops: false,
        },
        FrameClass::Serial => SearchSpace {
            branching: counts.iter().map(|&c| c.max(1)).collect(),
            leaves_only_at_md: true,
            leaf_self_loops: true,
        },
        FrameClass::AtMostOne => SearchSpace {
            branching: counts.iter().map(|&c| c.min(1)).collect(),
            leaves_only_at_md: false,
            leaf_self_loops: false,
        },
        FrameClass::AtMostTwo => SearchSpace {
            branching: counts.iter().map(|&c| c.min(2)).collect(),
            leaves_only_at_md: false,
            leaf_self_loops: false,
        },
        FrameClass::Fixed(_) => unreachable!("fixed frames have no generated search space"),
    }
}

/// Largest world count the oracle must examine before exhaustion proves
/// unsatisfiability over the frame class.
///
/// Satisfiable formulas have tree models (unravel a witness, then prune each
/// world's successors down to one per distinct diamond obligation; for
/// serial frames keep at least one successor and close depth-`md` leaves
/// with an inert self-loop). Obligations at depth `d` are subformulas at
/// modal depth `d`, so per-level diamond counts bound the branching.
pub fn completeness_bound(f: &Formula, fc: &FrameClass) -> usize {
    if let FrameClass::Fixed(frame) = fc {
        return frame.worlds.len();
    }
    let space = search_space(f, fc);
    let md = space.branching.len();
    let mut total: usize = 0;
    let mut width: usize = 1;
    for d in 0..=md {
        total = total.saturating_add(width);
        if d < md {
            width = width.saturating_mul(space.branching[d]);
        }
    }
    total
}

/// A canonical tree shape: children ordered so that each multiset of
/// subtrees is generated exactly once.
struct Shape {
    size: usize,
    children: Vec<Rc<Shape>>,
}

type ShapeMemo = BTreeMap<(usize, usize), Rc<Vec<Rc<Shape>>>>;

fn shapes_at(depth: usize, size: usize, space: &SearchSpace, memo: &mut ShapeMemo) -> Rc<Vec<Rc<Shape>>> {
    if let Some(v) = memo.get(&(depth, size)) {
        return Rc::clone(v);
    }
    let md = space.branching.len();
    let mut out: Vec<Rc<Shape>> = Vec::new();
    if size == 1 {
        if depth == md || !space.leaves_only_at_md {
            out.push(Rc::new(Shape {
                size: 1,
                children: Vec::new(),
            }));
        }
    } else if depth < md && space.branching[depth] > 0 {
        let mut acc = Vec::new();
        gen_children(depth, size - 1, space.branching[depth], None, &mut acc, &mut out, space, memo);
    }
    let rc = Rc::new(out);
    memo.insert((depth, size), Rc::clone(&rc));
    rc
}

/// Extend `acc` with further children totalling `remaining` nodes. Children
/// are kept non-increasing by the key (subtree size, index in the canonical
/// shape list), which makes each multiset of subtrees appear exactly once.
#[allow(clippy::too_many_arguments)]
fn gen_children(
    depth: usize,
    remaining: usize,
    max_children: usize,
    prev: Option<(usize, usize)>,
    acc: &mut Vec<Rc<Shape>>,
    out: &mut Vec<Rc<Shape>>,
    space: &SearchSpace,
    memo: &mut ShapeMemo,
) {
    if remaining == 0 {
        out.push(Rc::new(Shape {
            size: 1 + acc.iter().map(|c| c.size).sum::<usize>(),
            children: acc.clone(),
        }));
        return;
    }
    if acc.len() == max_children {
        return;
    }
    let max_size = prev.map_or(remaining, |(ps, _)| ps.min(remaining));
    for s in (1..=max_size).rev() {
        let candidates = shapes_at(depth + 1, s, space, memo);
        for (idx, c) in candidates.iter().enumerate() {
            if let Some((ps, pi)) = prev {
                if s == ps && idx > pi {
                    continue;
                }
            }
            acc.push(Rc::clone(c));
            gen_children(depth, remaining - s, max_children, Some((s, idx)), acc, out, space, memo);
            acc.pop();
        }
    }
}

/// Successor lists of a shape under breadth-first world numbering, with
/// self-loops added at leaves when the space calls for them.
fn skeleton_of(shape: &Shape, leaf_self_loops: bool) -> Vec<Vec<usize>> {
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); shape.size];
    let mut queue: VecDeque<(&Shape, usize)> = VecDeque::new();
    queue.push_back((shape, 0));
    let mut next_id = 1;
    while let Some((node, id)) = queue.pop_front() {
        if node.children.is_empty() {
            if leaf_self_loops {
                succ[id].push(id);
            }
        } else {
            for c in &node.children {
                succ[id].push(next_id);
                queue.push_back((c, next_id));
                next_id += 1;
            }
        }
    }
    succ
}

/// Where a valuation search looks for the formula to hold.
enum EvalPoint {
    Root(usize),
    AnyWorld,
}

/// Backtracking search over valuations of a fixed successor structure,
/// assigning one (variable, world) bit at a time with three-valued
/// evaluation for early pruning. Bits are ordered variable-major; `false`
/// is tried before `true`, making the first solution deterministic.
struct ValuationSearch<'a> {
    f: &'a Formula,
    vars: Vec<&'a str>,
    succ: &'a [Vec<usize>],
    n: usize,
    assign: Vec<Option<bool>>,
    /// When set, solutions are reported only once every bit is assigned
    /// (exhaustive listing); otherwise a partially-assigned sure hit is
    /// reported immediately with unassigned bits defaulting to false.
    total_only: bool,
}

impl<'a> ValuationSearch<'a> {
    fn new(f: &'a Formula, vars: Vec<&'a str>, succ: &'a [Vec<usize>], total_only: bool) -> Self {
        let n = succ.len();
        let assign = vec![None; n * vars.len()];
        ValuationSearch {
            f,
            vars,
            succ,
            n,
            assign,
            total_only,
        }
    }

    fn bit(&self, var_idx: usize, w: usize) -> Option<bool> {
        self.assign[var_idx * self.n + w]
    }

    fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.binary_search(&name).ok()
    }

    fn eval3(&self, w: usize, f: &Formula) -> Option<bool> {
        match f {
            Formula::Var(p) => self.var_index(p).map_or(Some(false), |vi| self.bit(vi, w)),
            Formula::NegVar(p) => self
                .var_index(p)
                .map_or(Some(true), |vi| self.bit(vi, w).map(|b| !b)),
            Formula::ConstTrue => Some(true),
            Formula::ConstFalse => Some(false),
            Formula::Not(c) => self.eval3(w, c).map(|b| !b),
            Formula::And(cs) => self.eval3_all(w, cs, false),
            Formula::Or(cs) => self.eval3_all(w, cs, true),
            Formula::Box(c) => self.eval3_over(self.succ[w].iter(), c, false),
            Formula::Dia(c) => self.eval3_over(self.succ[w].iter(), c, true),
        }
    }

    fn eval3_all(&self, w: usize, cs: &[Formula], existential: bool) -> Option<bool> {
        let mut unknown = false;
        for c in cs {
            match self.eval3(w, c) {
                Some(b) if b == existential => return Some(existential),
                Some(_) => {}
                None => unknown = true,
            }
        }
        if unknown {
            None
        } else {
            Some(!existential)
        }
    }

    fn eval3_over<'s>(
        &self,
        worlds: impl Iterator<Item = &'s usize>,
        c: &Formula,
        existential: bool,
    ) -> Option<bool> {
        let mut unknown = false;
        for &v in worlds {
            match self.eval3(v, c) {
                Some(b) if b == existential => return Some(existential),
                Some(_) => {}
                None => unknown = true,
            }
        }
        if unknown {
            None
        } else {
            Some(!existential)
        }
    }

    /// Run the search; `on_hit` receives the assignment and the satisfying
    /// world and may stop the search by returning `Break`.
    fn run(
        &mut self,
        point: &EvalPoint,
        on_hit: &mut dyn FnMut(&[Option<bool>], usize) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        self.step(0, point, on_hit)
    }

    fn step(
        &mut self,
        from_bit: usize,
        point: &EvalPoint,
        on_hit: &mut dyn FnMut(&[Option<bool>], usize) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let hit_world = match point {
            EvalPoint::Root(r) => match self.eval3(*r, self.f) {
                Some(false) => return ControlFlow::Continue(()),
                Some(true) => Some(*r),
                None => None,
            },
            EvalPoint::AnyWorld => {
                let mut hit = None;
                let mut undecided = false;
                for w in 0..self.n {
                    match self.eval3(w, self.f) {
                        Some(true) => {
                            hit = Some(w);
                            break;
                        }
                        Some(false) => {}
                        None => undecided = true,
                    }
                }
                if hit.is_none() && !undecided {
                    return ControlFlow::Continue(());
                }
                hit
            }
        };
        let next_unassigned = (from_bit..self.assign.len()).find(|&b| self.assign[b].is_none());
        if let Some(w) = hit_world {
            if !self.total_only || next_unassigned.is_none() {
                return on_hit(&self.assign, w);
            }
        }
        let Some(b) = next_unassigned else {
            // Fully assigned and not a hit: a dead end.
            return ControlFlow::Continue(());
        };
        for val in [false, true] {
            self.assign[b] = Some(val);
            self.step(b + 1, point, on_hit)?;
        }
        self.assign[b] = None;
        ControlFlow::Continue(())
    }
}

/// Assemble a witness model from a successor skeleton and a (possibly
/// partial) bit assignment; unassigned bits default to false.
fn build_model(
    succ: &[Vec<usize>],
    vars: &[&str],
    assign: &[Option<bool>],
    root: usize,
) -> KripkeModel {
    let n = succ.len();
    let mut relation = BTreeSet::new();
    for (w, vs) in succ.iter().enumerate() {
        for &v in vs {
            relation.insert((w as World, v as World));
        }
    }
    let mut valuation: BTreeMap<String, BTreeSet<World>> = BTreeMap::new();
    for (vi, var) in vars.iter().enumerate() {
        let worlds: BTreeSet<World> = (0..n)
            .filter(|&w| assign[vi * n + w] == Some(true))
            .map(|w| w as World)
            .collect();
        if !worlds.is_empty() {
            valuation.insert((*var).to_string(), worlds);
        }
    }
    KripkeModel {
        worlds: (0..n as World).collect(),
        relation,
        valuation,
        root: root as World,
    }
}

/// Exhaustive satisfiability search over the frame class, up to
/// `max_worlds` worlds.
///
/// Models are enumerated by world count, then canonical tree shape, then
/// valuation; the first witness (satisfying `f` at its root) is returned,
/// so results are deterministic. `Unsat` is only reported when the
/// completeness bound fits within `max_worlds`; otherwise exhaustion yields
/// `BoundExceeded`. Fixed frames delegate to [`fixed_frame_sat`], where the
/// budget is irrelevant.
pub fn brute_force_sat(f: &Formula, fc: &FrameClass, max_worlds: usize) -> OracleOutcome {
    assert!(max_worlds >= 1, "max_worlds must be at least 1");
    if let FrameClass::Fixed(frame) = fc {
        return match fixed_frame_sat(f, frame) {
            Some(m) => OracleOutcome::Sat(m),
            None => OracleOutcome::Unsat,
        };
    }
    let mut found = None;
    search_models(f, fc, max_worlds, false, &mut |m| {
        found = Some(m);
        ControlFlow::Break(())
    });
    match found {
        Some(m) => OracleOutcome::Sat(m),
        None if completeness_bound(f, fc) <= max_worlds => OracleOutcome::Unsat,
        None => OracleOutcome::BoundExceeded,
    }
}

/// Every satisfying model of `f` in the oracle's canonical search space
/// with at most `max_worlds` worlds, in enumeration order. Unlike
/// [`brute_force_sat`], all valuation bits are enumerated exhaustively, so
/// distinct total valuations yield distinct witnesses.
pub fn all_bounded_witnesses(f: &Formula, fc: &FrameClass, max_worlds: usize) -> Vec<KripkeModel> {
    assert!(
        !matches!(fc, FrameClass::Fixed(_)),
        "fixed frames have a dedicated solver"
    );
    let mut out = Vec::new();
    search_models(f, fc, max_worlds, true, &mut |m| {
        out.push(m);
        ControlFlow::Continue(())
    });
    out
}

fn search_models(
    f: &Formula,
    fc: &FrameClass,
    max_worlds: usize,
    total_only: bool,
    on_model: &mut dyn FnMut(KripkeModel) -> ControlFlow<()>,
) {
    let space = search_space(f, fc);
    let vars: Vec<&str> = f.vars().into_iter().collect();
    let mut memo = ShapeMemo::new();
    for n in 1..=max_worlds {
        for shape in shapes_at(0, n, &space, &mut memo).iter() {
            let succ = skeleton_of(shape, space.leaf_self_loops);
            let mut search = ValuationSearch::new(f, vars.clone(), &succ, total_only);
            let flow = search.run(&EvalPoint::Root(0), &mut |assign, root| {
                on_model(build_model(&succ, &vars, assign, root))
            });
            if flow.is_break() {
                return;
            }
        }
    }
}

/// Satisfiability on one fixed frame: searches for a valuation making `f`
/// true at some world (all worlds are tried as evaluation points, in
/// ascending order). The witness's root is the satisfying world.
pub fn fixed_frame_sat(f: &Formula, frame: &Frame) -> Option<KripkeModel> {
    frame.validate().expect("fixed frame must be well-formed");
    let worlds: Vec<World> = frame.worlds.iter().copied().collect();
    let index: BTreeMap<World, usize> = worlds.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); worlds.len()];
    for &(u, v) in &frame.relation {
        succ[index[&u]].push(index[&v]);
    }
    let vars: Vec<&str> = f.vars().into_iter().collect();
    let mut found = None;
    let mut search = ValuationSearch::new(f, vars.clone(), &succ, false);
    let _ = search.run(&EvalPoint::AnyWorld, &mut |assign, w| {
        let mut valuation: BTreeMap<String, BTreeSet<World>> = BTreeMap::new();
        for (vi, var) in vars.iter().enumerate() {
            let true_at: BTreeSet<World> = (0..worlds.len())
                .filter(|&i| assign[vi * worlds.len() + i] == Some(true))
                .map(|i| worlds[i])
                .collect();
            if !true_at.is_empty() {
                valuation.insert((*var).to_string(), true_at);
            }
        }
        found = Some(KripkeModel {
            worlds: frame.worlds.clone(),
            relation: frame.relation.clone(),
            valuation,
            root: worlds[w],
        });
        ControlFlow::Break(())
    });
    found
}

/// The valuation patterns over `vars` realized at the endpoints of directed
/// paths of length exactly `vars.len()` starting at `start`.
pub fn assignment_coverage(
    m: &KripkeModel,
    start: World,
    vars: &[String],
) -> BTreeSet<Vec<bool>> {
    let mut frontier: BTreeSet<World> = BTreeSet::from([start]);
    for _ in 0..vars.len() {
        frontier = frontier
            .iter()
            .flat_map(|&w| m.successors(w))
            .collect();
    }
    frontier
        .into_iter()
        .map(|w| vars.iter().map(|v| m.var_holds(v, w)).collect())
        .collect()
}

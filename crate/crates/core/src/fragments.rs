//! Complexity classification of operator-restricted fragments, and direct
//! solvers for the fragments where satisfiability with no frame constraint
//! is polynomial or reduces to propositional search.
//!
//! Satisfiability is classified by the set of operators a formula may use.
//! The classifier assigns every operator set one of four classes; the case
//! number records which clause of the classification matched, so verdicts
//! can be traced back to a specific argument.

use crate::formula::{Formula, OperatorSet};
use crate::solve::{sat_k_tableau, witness_to_model, SatVerdict, WitnessNode};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::rc::Rc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Complexity {
    P,
    Np,
    CoNp,
    Pspace,
}

impl fmt::Display for Complexity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Complexity::P => "P",
            Complexity::Np => "NP-complete",
            Complexity::CoNp => "coNP-complete",
            Complexity::Pspace => "PSPACE-complete",
        };
        f.write_str(s)
    }
}

/// A classification verdict: the class plus the clause that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexityClass {
    pub class: Complexity,
    pub theorem: &'static str,
    pub case: u8,
}

impl fmt::Display for ComplexityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (Theorem {}, case {})", self.class, self.theorem, self.case)
    }
}

fn cc(class: Complexity, theorem: &'static str, case: u8) -> ComplexityClass {
    ComplexityClass {
        class,
        theorem,
        case,
    }
}

/// Classify satisfiability with no frame constraint for formulas restricted
/// to the operator set `s`. Clauses are checked hardest-first; the first
/// match wins, and the classification is total.
pub fn classify_operator_set(s: OperatorSet) -> ComplexityClass {
    use OperatorSet as O;
    let neg_and_box = O::NEG | O::AND | O::BOX;
    let neg_and_dia = O::NEG | O::AND | O::DIA;
    let neg_or_box = O::NEG | O::OR | O::BOX;
    let neg_or_dia = O::NEG | O::OR | O::DIA;
    let atneg_lattice_modal = O::ATNEG | O::AND | O::OR | O::BOX | O::DIA;
    for (case, base) in [
        neg_and_box,
        neg_and_dia,
        neg_or_box,
        neg_or_dia,
        atneg_lattice_modal,
    ]
    .into_iter()
    .enumerate()
    {
        if base.is_subset_of(s) {
            return cc(Complexity::Pspace, "pspace", case as u8 + 1);
        }
    }

    let lattice_modal_false = O::AND | O::OR | O::BOX | O::DIA | O::FALSE;
    if lattice_modal_false.is_subset_of(s) {
        return cc(Complexity::Pspace, "pspacetwo", 1);
    }

    let consts = O::TRUE | O::FALSE;
    let poor = O::ATNEG | O::AND | O::BOX | O::DIA;
    if poor.is_subset_of(s) && s.is_subset_of(poor | consts) {
        return cc(Complexity::CoNp, "conp", 1);
    }
    let poor_false = O::AND | O::BOX | O::DIA | O::FALSE;
    if poor_false.is_subset_of(s) && s.is_subset_of(O::AND | O::BOX | O::DIA | consts) {
        return cc(Complexity::CoNp, "conp", 2);
    }

    let propositional = O::NEG | O::ATNEG | O::AND | O::OR | consts;
    if s.is_subset_of(propositional)
        && ((O::NEG | O::OR).is_subset_of(s) || (O::NEG | O::AND).is_subset_of(s))
    {
        return cc(Complexity::Np, "np", 1);
    }
    let atneg_lattice = O::ATNEG | O::AND | O::OR;
    if atneg_lattice.is_subset_of(s)
        && (s.is_subset_of(atneg_lattice | O::BOX | consts)
            || s.is_subset_of(atneg_lattice | O::DIA | consts))
    {
        return cc(Complexity::Np, "np", 2);
    }

    let schemas = [
        O::NEG | O::ATNEG | O::BOX | O::DIA | consts,
        O::ATNEG | O::OR | O::BOX | O::DIA | consts,
        O::ATNEG | O::AND | O::BOX | consts,
        O::ATNEG | O::AND | O::DIA | consts,
        O::AND | O::OR | O::BOX | consts,
        O::AND | O::OR | O::DIA | consts,
        O::AND | O::OR | O::BOX | O::DIA | O::TRUE,
    ];
    for (i, schema) in schemas.into_iter().enumerate() {
        if s.is_subset_of(schema) {
            return cc(Complexity::P, "p", i as u8 + 1);
        }
    }
    unreachable!("classification is total")
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FragmentError {
    #[error("operator set {0} is not classified polynomial-time")]
    NotPolynomial(OperatorSet),
    #[error("operator set {0} does not fit any NP-solvable fragment")]
    NotNp(OperatorSet),
}

fn leaf(true_vars: BTreeSet<String>) -> Rc<WitnessNode> {
    Rc::new(WitnessNode {
        true_vars,
        children: vec![],
        self_loop: false,
    })
}

fn node(true_vars: BTreeSet<String>, children: Vec<Rc<WitnessNode>>) -> Rc<WitnessNode> {
    Rc::new(WitnessNode {
        true_vars,
        children,
        self_loop: false,
    })
}

fn verdict_of(found: Option<Rc<WitnessNode>>) -> SatVerdict {
    match found {
        Some(w) => SatVerdict::sat_with(witness_to_model(&w)),
        None => SatVerdict::unsat(),
    }
}

fn all_vars(f: &Formula) -> BTreeSet<String> {
    f.vars().into_iter().map(str::to_string).collect()
}

/// Decide satisfiability (no frame constraint) for a formula whose operator
/// set is classified polynomial-time, using the algorithm for the matching
/// schema. Produces a witness on SAT. Errors if the operator set lies in a
/// harder class.
pub fn sat_poly_fragment(f: &Formula) -> Result<SatVerdict, FragmentError> {
    let ops = f.operator_set();
    let c = classify_operator_set(ops);
    if c.class != Complexity::P {
        return Err(FragmentError::NotPolynomial(ops));
    }
    Ok(match c.case {
        1 => poly_unary(f),
        2 => verdict_of(poly_or_modal(f)),
        3 => poly_and_box(f),
        4 => verdict_of(poly_and_dia(f)),
        5 => poly_monotone_box(f),
        6 => poly_monotone_dia(f),
        7 => poly_total(f),
        _ => unreachable!(),
    })
}

/// Unary chains (negations, boxes, diamonds over one atom or constant):
/// normalize, then the formula is unsatisfiable exactly when it is a chain
/// of diamonds over `false`.
fn poly_unary(f: &Formula) -> SatVerdict {
    let g = f.to_nnf();
    let mut modal_ops: Vec<bool> = Vec::new(); // true = box, false = diamond
    let mut tip = &g;
    loop {
        match tip {
            Formula::Box(b) => {
                modal_ops.push(true);
                tip = b;
            }
            Formula::Dia(b) => {
                modal_ops.push(false);
                tip = b;
            }
            _ => break,
        }
    }
    let chain_len = if *tip == Formula::ConstFalse {
        // Satisfiable only by cutting the chain at a box, which then holds
        // vacuously at a world with no successors.
        match modal_ops.iter().position(|&is_box| is_box) {
            Some(i) => i + 1,
            None => return SatVerdict::unsat(),
        }
    } else {
        modal_ops.len() + 1
    };
    let mut bottom = match tip {
        Formula::Var(v) if chain_len == modal_ops.len() + 1 => {
            leaf(BTreeSet::from([v.clone()]))
        }
        _ => leaf(BTreeSet::new()),
    };
    for _ in 1..chain_len {
        bottom = node(BTreeSet::new(), vec![bottom]);
    }
    SatVerdict::sat_with(witness_to_model(&bottom))
}

/// Disjunctions of modal chains (no conjunction): a box is always
/// satisfiable at a world with no successors, a diamond defers to its body,
/// a disjunction to any satisfiable disjunct — a one-pass recursion.
fn poly_or_modal(f: &Formula) -> Option<Rc<WitnessNode>> {
    match f {
        Formula::Var(v) => Some(leaf(BTreeSet::from([v.clone()]))),
        Formula::NegVar(_) | Formula::ConstTrue => Some(leaf(BTreeSet::new())),
        Formula::ConstFalse => None,
        Formula::Box(_) => Some(leaf(BTreeSet::new())),
        Formula::Dia(b) => poly_or_modal(b).map(|c| node(BTreeSet::new(), vec![c])),
        Formula::Or(ds) => ds.iter().find_map(poly_or_modal),
        _ => unreachable!("operator set was checked"),
    }
}

/// Conjunctions of literals, constants, and boxes (no diamond): every box
/// holds vacuously at a world with no successors, so only the literal part
/// matters.
fn poly_and_box(f: &Formula) -> SatVerdict {
    let mut assign: BTreeMap<&str, bool> = BTreeMap::new();
    for c in f.conjuncts() {
        let ok = match c {
            Formula::Var(v) => assign.insert(v, true) != Some(false),
            Formula::NegVar(v) => assign.insert(v, false) != Some(true),
            Formula::ConstFalse => false,
            Formula::ConstTrue | Formula::Box(_) => true,
            _ => unreachable!("operator set was checked"),
        };
        if !ok {
            return SatVerdict::unsat();
        }
    }
    let true_vars = assign
        .iter()
        .filter(|(_, &v)| v)
        .map(|(k, _)| k.to_string())
        .collect();
    SatVerdict::sat_with(witness_to_model(&leaf(true_vars)))
}

/// Conjunctions of literals, constants, and diamonds (no box): diamonds
/// never interact — each gets its own successor — so the formula is
/// satisfiable when the literal part is consistent and every diamond body
/// is recursively satisfiable.
fn poly_and_dia(f: &Formula) -> Option<Rc<WitnessNode>> {
    let mut assign: BTreeMap<&str, bool> = BTreeMap::new();
    let mut children = Vec::new();
    for c in f.conjuncts() {
        match c {
            Formula::Var(v) => {
                if assign.insert(v, true) == Some(false) {
                    return None;
                }
            }
            Formula::NegVar(v) => {
                if assign.insert(v, false) == Some(true) {
                    return None;
                }
            }
            Formula::ConstFalse => return None,
            Formula::ConstTrue => {}
            Formula::Dia(b) => children.push(poly_and_dia(b)?),
            _ => unreachable!("operator set was checked"),
        }
    }
    let true_vars = assign
        .iter()
        .filter(|(_, &v)| v)
        .map(|(k, _)| k.to_string())
        .collect();
    Some(node(true_vars, children))
}

/// Negation-free formulas over and/or/box: a single world with every
/// variable true and no successors is universal for the fragment, so
/// satisfiability is one evaluation with boxes read as true.
fn poly_monotone_box(f: &Formula) -> SatVerdict {
    fn val(f: &Formula) -> bool {
        match f {
            Formula::Var(_) | Formula::ConstTrue | Formula::Box(_) => true,
            Formula::ConstFalse => false,
            Formula::And(cs) => cs.iter().all(val),
            Formula::Or(ds) => ds.iter().any(val),
            _ => unreachable!("operator set was checked"),
        }
    }
    if val(f) {
        SatVerdict::sat_with(witness_to_model(&leaf(all_vars(f))))
    } else {
        SatVerdict::unsat()
    }
}

/// Negation-free formulas over and/or/diamond: every world of the witness
/// carries all variables true, so only the successor structure matters; a
/// diamond is as satisfiable as its body.
fn poly_monotone_dia(f: &Formula) -> SatVerdict {
    fn build(f: &Formula, vars: &BTreeSet<String>) -> Option<Vec<Rc<WitnessNode>>> {
        match f {
            Formula::Var(_) | Formula::ConstTrue => Some(vec![]),
            Formula::ConstFalse => None,
            Formula::And(cs) => {
                let mut children = Vec::new();
                for c in cs {
                    children.extend(build(c, vars)?);
                }
                Some(children)
            }
            Formula::Or(ds) => ds.iter().find_map(|d| build(d, vars)),
            Formula::Dia(b) => {
                let inner = build(b, vars)?;
                Some(vec![node(vars.clone(), inner)])
            }
            _ => unreachable!("operator set was checked"),
        }
    }
    let vars = all_vars(f);
    match build(f, &vars) {
        Some(children) => SatVerdict::sat_with(witness_to_model(&node(vars, children))),
        None => SatVerdict::unsat(),
    }
}

/// The fragment with no negation and no `false`: every formula holds at a
/// single reflexive world with all variables true.
fn poly_total(f: &Formula) -> SatVerdict {
    let world = Rc::new(WitnessNode {
        true_vars: all_vars(f),
        children: vec![],
        self_loop: true,
    });
    SatVerdict::sat_with(witness_to_model(&world))
}

/// Decide satisfiability (no frame constraint) for the fragments whose
/// search is purely propositional: negation-closed propositional formulas,
/// and the atomic-negation fragments where the only modality is box or the
/// only modality is diamond. Accepts any formula syntactically inside one
/// of those three families, including ones an exact classification would
/// place in P. Produces a witness on SAT.
pub fn sat_np_fragment(f: &Formula) -> Result<SatVerdict, FragmentError> {
    use OperatorSet as O;
    let ops = f.operator_set();
    let consts = O::TRUE | O::FALSE;
    let propositional = O::NEG | O::ATNEG | O::AND | O::OR | consts;
    let atneg_lattice = O::ATNEG | O::AND | O::OR;
    if ops.is_subset_of(propositional) {
        let found = prop_assignment(&f.to_nnf()).map(|a| leaf(true_set(&a)));
        return Ok(verdict_of(found));
    }
    if ops.is_subset_of(atneg_lattice | O::BOX | consts) {
        // A world with no successors makes every box true, and nothing in
        // the fragment can negate a box, so reading boxes as true preserves
        // satisfiability exactly.
        let stripped = replace_outer_modals(f, &mut |_| Some(Formula::ConstTrue));
        let found = prop_assignment(&stripped).map(|a| leaf(true_set(&a)));
        return Ok(verdict_of(found));
    }
    if ops.is_subset_of(atneg_lattice | O::DIA | consts) {
        return Ok(verdict_of(dia_fragment(f)));
    }
    Err(FragmentError::NotNp(ops))
}

/// Diamond bodies never interact (no boxes to constrain successors), so
/// each outermost diamond is replaced by the constant recording whether its
/// body is satisfiable, leaving a propositional search.
fn dia_fragment(f: &Formula) -> Option<Rc<WitnessNode>> {
    let mut children = Vec::new();
    let replaced = replace_outer_modals(f, &mut |body: &Formula| {
        dia_fragment(body).map(|w| {
            children.push(w);
            Formula::ConstTrue
        })
    });
    let assign = prop_assignment(&replaced)?;
    // Attaching a successor for every satisfiable diamond can only help:
    // the fragment has no negation above a diamond.
    Some(node(true_set(&assign), children))
}

/// Rewrite every outermost modal subformula (box or diamond) using `repl`
/// on its body; `None` becomes the constant false.
fn replace_outer_modals(
    f: &Formula,
    repl: &mut impl FnMut(&Formula) -> Option<Formula>,
) -> Formula {
    match f {
        Formula::Box(b) | Formula::Dia(b) => repl(b).unwrap_or(Formula::ConstFalse),
        Formula::And(cs) => {
            Formula::and(cs.iter().map(|c| replace_outer_modals(c, repl)).collect())
        }
        Formula::Or(ds) => {
            Formula::or(ds.iter().map(|d| replace_outer_modals(d, repl)).collect())
        }
        other => other.clone(),
    }
}

fn true_set(assign: &BTreeMap<String, bool>) -> BTreeSet<String> {
    assign
        .iter()
        .filter(|(_, &v)| v)
        .map(|(k, _)| k.clone())
        .collect()
}

/// Backtracking satisfiability for propositional formulas in negation
/// normal form. Top-level literal conjuncts are forced before the search
/// branches; partial evaluation prunes the rest. Returns a satisfying
/// assignment (unmentioned variables are unconstrained and omitted).
fn prop_assignment(g: &Formula) -> Option<BTreeMap<String, bool>> {
    let mut assign: BTreeMap<String, bool> = BTreeMap::new();
    for c in g.conjuncts() {
        let ok = match c {
            Formula::Var(v) => assign.insert(v.clone(), true) != Some(false),
            Formula::NegVar(v) => assign.insert(v.clone(), false) != Some(true),
            _ => true,
        };
        if !ok {
            return None;
        }
    }
    let vars: Vec<String> = g.vars().into_iter().map(str::to_string).collect();
    if prop_backtrack(g, &vars, &mut assign) {
        Some(assign)
    } else {
        None
    }
}

fn prop_backtrack(g: &Formula, vars: &[String], assign: &mut BTreeMap<String, bool>) -> bool {
    match eval_partial(g, assign) {
        Some(v) => v,
        None => {
            let v = vars
                .iter()
                .find(|v| !assign.contains_key(*v))
                .expect("an undetermined formula has an unassigned variable");
            for value in [false, true] {
                assign.insert(v.clone(), value);
                if prop_backtrack(g, vars, assign) {
                    return true;
                }
            }
            assign.remove(v);
            false
        }
    }
}

fn eval_partial(g: &Formula, assign: &BTreeMap<String, bool>) -> Option<bool> {
    match g {
        Formula::Var(v) => assign.get(v).copied(),
        Formula::NegVar(v) => assign.get(v).map(|b| !b),
        Formula::ConstTrue => Some(true),
        Formula::ConstFalse => Some(false),
        Formula::And(cs) => {
            let mut all_true = true;
            for c in cs {
                match eval_partial(c, assign) {
                    Some(false) => return Some(false),
                    Some(true) => {}
                    None => all_true = false,
                }
            }
            if all_true {
                Some(true)
            } else {
                None
            }
        }
        Formula::Or(ds) => {
            let mut all_false = true;
            for d in ds {
                match eval_partial(d, assign) {
                    Some(true) => return Some(true),
                    Some(false) => {}
                    None => all_false = false,
                }
            }
            if all_false {
                Some(false)
            } else {
                None
            }
        }
        _ => unreachable!("propositional input in negation normal form"),
    }
}

/// Classify the formula's operator set and decide it with the cheapest
/// procedure the classification licenses: the polynomial schemas, the
/// propositional-search fragments, or the general recursion for the hard
/// classes.
pub fn fragment_dispatch(f: &Formula) -> (ComplexityClass, SatVerdict) {
    let c = classify_operator_set(f.operator_set());
    let v = match c.class {
        Complexity::P => sat_poly_fragment(f).expect("classified polynomial"),
        Complexity::Np => sat_np_fragment(f).expect("classified NP"),
        Complexity::CoNp | Complexity::Pspace => sat_k_tableau(f),
    };
    (c, v)
}

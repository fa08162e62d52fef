//! Executable reductions between satisfiability problems: frame-class
//! transfers, constant elimination, variable elimination, and the encodings
//! of graph colorability and quantified 3CNF into the poor man's fragment.
//! Every output comes with an equisatisfiability contract, exercised against
//! the brute-force oracles in the test suite.

mod graph;
mod qbf;

pub use graph::{is_three_colorable, reduce_3col, Graph};
pub use qbf::{label_false, normalize_qbf, phi_exp, qbf_truth, reduce_qbf, QbfInstance};

use crate::formula::{Formula, OperatorSet};

/// Namespace for every variable a reduction invents. Input formulas may use
/// such names too; [`fresh_name`] steps around them deterministically.
pub const AUX_PREFIX: &str = "__aux_";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReduceError {
    #[error("input operators {found} exceed the fragment {allowed} accepted by this reduction")]
    OutsideFragment {
        allowed: OperatorSet,
        found: OperatorSet,
    },
    #[error("input must use at most one variable, found {0}")]
    TooManyVariables(usize),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid quantified instance: {0}")]
    InvalidQbf(String),
}

/// The first name in the sequence `__aux_<base>`, `__aux_<base>1`,
/// `__aux_<base>2`, … that does not occur in `f`. Deterministic in the
/// input, so equal inputs always reduce to equal outputs.
pub(crate) fn fresh_name(base: &str, f: &Formula) -> String {
    let vars = f.vars();
    let plain = format!("{AUX_PREFIX}{base}");
    if !vars.contains(plain.as_str()) {
        return plain;
    }
    (1..)
        .map(|k| format!("{AUX_PREFIX}{base}{k}"))
        .find(|candidate| !vars.contains(candidate.as_str()))
        .expect("the candidate sequence is infinite")
}

/// Transfer satisfiability over serial frames to satisfiability with no
/// frame constraint: conjoin, at every modal depth the formula can see, a
/// demand for at least one successor.
///
/// `Serial-SAT(f)` iff `K-SAT(reduce_kd_to_k(f))`. The input must lie in
/// the poor man's fragment.
pub fn reduce_kd_to_k(f: &Formula) -> Formula {
    assert!(f.is_poor_mans(), "defined on the poor man's fragment");
    let q = Formula::var(fresh_name("q", f));
    let mut parts = vec![f.clone()];
    for i in 0..=f.modal_depth() {
        parts.push(Formula::boxed_n(i, Formula::dia(q.clone())));
    }
    Formula::and(parts)
}

/// Replace the constants `true` and `false` by fresh variables whose truth
/// values are pinned at every depth the formula can see. Satisfiability is
/// preserved over any frame class, since the guard only adds constraints a
/// serial, bounded, or arbitrary frame can always meet.
pub fn reduce_constants_to_vars(f: &Formula) -> Result<Formula, ReduceError> {
    use OperatorSet as O;
    let allowed = O::ATNEG | O::AND | O::BOX | O::DIA | O::TRUE | O::FALSE;
    let found = f.operator_set();
    if !found.is_subset_of(allowed) {
        return Err(ReduceError::OutsideFragment { allowed, found });
    }
    let t = fresh_name("t", f);
    let fv = fresh_name("fv", f);
    let g = f
        .substitute(&Formula::ConstTrue, &Formula::var(t.clone()))
        .substitute(&Formula::ConstFalse, &Formula::var(fv.clone()));
    let guard = Formula::and(vec![Formula::var(t), Formula::neg_var(fv)]);
    let mut parts = vec![g];
    for i in 0..=f.modal_depth() {
        parts.push(Formula::boxed_n(i, guard.clone()));
    }
    Ok(Formula::and(parts))
}

/// Replace the constant `true` by a fresh variable forced true at every
/// depth the formula can see. Preserves satisfiability with no frame
/// constraint; the output keeps `false` but loses `true`.
pub fn reduce_eliminate_true(f: &Formula) -> Result<Formula, ReduceError> {
    use OperatorSet as O;
    let allowed = O::AND | O::BOX | O::DIA | O::TRUE | O::FALSE;
    let found = f.operator_set();
    if !found.is_subset_of(allowed) {
        return Err(ReduceError::OutsideFragment { allowed, found });
    }
    let t = fresh_name("t", f);
    let g = f.substitute(&Formula::ConstTrue, &Formula::var(t.clone()));
    let mut parts = vec![g];
    for i in 0..=f.modal_depth() {
        parts.push(Formula::boxed_n(i, Formula::var(t.clone())));
    }
    Ok(Formula::and(parts))
}

/// Eliminate the sole propositional variable of `f`, preserving
/// satisfiability with no frame constraint. The variable is simulated by a
/// structural marker — "some chain of k+1 steps ends in a dead end" — which
/// a model can switch on or off per world without any valuation; boxes are
/// relativized so the marker chains cannot disturb them.
pub fn reduce_onevar_to_zerovar(f: &Formula) -> Result<Formula, ReduceError> {
    let var_count = f.vars().len();
    if var_count > 1 {
        return Err(ReduceError::TooManyVariables(var_count));
    }
    let k = f.modal_depth();
    Ok(zerovar_map(&to_box_basis(f), k))
}

/// Rewrite into the basis {negation, conjunction, box}: atomic negation
/// becomes general negation, disjunction and diamond dualize, and constants
/// fold through negation and conjunction where they can.
fn to_box_basis(f: &Formula) -> Formula {
    match f {
        Formula::Var(_) | Formula::ConstTrue | Formula::ConstFalse => f.clone(),
        Formula::NegVar(v) => negate(Formula::var(v.clone())),
        Formula::Not(x) => negate(to_box_basis(x)),
        Formula::And(cs) => conj(cs.iter().map(to_box_basis)),
        Formula::Or(ds) => negate(conj(ds.iter().map(|d| negate(to_box_basis(d))))),
        Formula::Box(b) => Formula::boxed(to_box_basis(b)),
        Formula::Dia(b) => negate(Formula::boxed(negate(to_box_basis(b)))),
    }
}

fn negate(f: Formula) -> Formula {
    match f {
        Formula::ConstTrue => Formula::ConstFalse,
        Formula::ConstFalse => Formula::ConstTrue,
        Formula::Not(x) => *x,
        other => Formula::not(other),
    }
}

fn conj(parts: impl Iterator<Item = Formula>) -> Formula {
    let mut out = Vec::new();
    for p in parts {
        match p {
            Formula::ConstTrue => {}
            Formula::ConstFalse => return Formula::ConstFalse,
            other => out.push(other),
        }
    }
    if out.is_empty() {
        Formula::ConstTrue
    } else {
        Formula::and(out)
    }
}

fn marker(k: usize) -> Formula {
    Formula::dia_n(k, Formula::boxed(Formula::ConstFalse))
}

fn zerovar_map(f: &Formula, k: usize) -> Formula {
    match f {
        Formula::Var(_) => marker(k + 1),
        Formula::ConstTrue | Formula::ConstFalse => f.clone(),
        Formula::Not(x) => Formula::not(zerovar_map(x, k)),
        Formula::And(cs) => Formula::and(cs.iter().map(|c| zerovar_map(c, k)).collect()),
        Formula::Box(b) => Formula::boxed(Formula::or(vec![marker(k), zerovar_map(b, k)])),
        _ => unreachable!("normalized to the negation-conjunction-box basis"),
    }
}

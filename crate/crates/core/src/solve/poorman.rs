//! Entry points specialized to the poor man's fragment: atomic negation,
//! conjunction, box, and diamond only. These validate fragment membership
//! and then run the appropriate recursion; with no disjunctions present the
//! general engine never branches, so the shape of the search is much tamer
//! than in the full language.

use super::tableau::{sat_k_tableau, sat_le1};
use super::{ensure_poor_mans, SatVerdict, SolveError};
use crate::formula::Formula;

/// Decide a poor man's formula with no frame constraint, producing a witness
/// on SAT. Diamond obligations still multiply across nesting levels, so the
/// worst case remains superpolynomial, but memoization over conjunct sets
/// keeps repeated obligations cheap.
pub fn poorman_sat_k(f: &Formula) -> Result<SatVerdict, SolveError> {
    ensure_poor_mans(f)?;
    Ok(sat_k_tableau(f))
}

/// Decide a poor man's formula over frames with at most one successor per
/// world. Each level merges every diamond and box body into the single
/// successor obligation, so the recursion visits each nesting level once:
/// polynomial time, witness included.
pub fn poorman_sat_le1(f: &Formula) -> Result<SatVerdict, SolveError> {
    ensure_poor_mans(f)?;
    Ok(sat_le1(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::model::FrameClass;

    fn p(text: &str) -> Formula {
        parse(text).unwrap()
    }

    #[test]
    fn fragment_guard() {
        assert!(matches!(
            poorman_sat_k(&p("p | q")),
            Err(SolveError::NotPoorMans(_))
        ));
        assert!(poorman_sat_le1(&p("!p & q")).is_err());
        let err = poorman_sat_k(&p("true & p")).unwrap_err();
        assert_eq!(
            err.to_string(),
            "formula lies outside the poor man's fragment (operators: and,true)"
        );
    }

    #[test]
    fn unconstrained_verdicts_and_witnesses() {
        let f = p("[]p & []q & <>(p & q)");
        let v = poorman_sat_k(&f).unwrap();
        assert!(v.is_sat());
        let m = v.witness.unwrap();
        assert!(m.conforms_to(&FrameClass::K));
        assert!(m.evaluate_at_root(&f));

        assert!(!poorman_sat_k(&p("[]p & <>~p")).unwrap().is_sat());
    }

    #[test]
    fn single_successor_verdicts_and_witnesses() {
        let f = p("<>p & <>q & <><>~p");
        let v = poorman_sat_le1(&f).unwrap();
        assert!(v.is_sat(), "all diamonds fold into one chain");
        let m = v.witness.unwrap();
        assert!(m.conforms_to(&FrameClass::AtMostOne));
        assert!(m.evaluate_at_root(&f));
        assert_eq!(m.worlds.len(), 3);

        assert!(!poorman_sat_le1(&p("<>p & <>~p")).unwrap().is_sat());
        assert!(!poorman_sat_le1(&p("[]~q & <>(q & p)")).unwrap().is_sat());
    }
}

//! Property-based checks: the printed syntax round-trips through the
//! parser, negation normal form preserves meaning on random models, and
//! the general solver agrees with exhaustive search on small inputs.

use modalsat_core::{
    brute_force_sat, completeness_bound, parse, sat_k_tableau, Formula, FrameClass, KripkeModel,
    OracleOutcome,
};
use proptest::prelude::*;
use std::collections::{BTreeMap, BTreeSet};

fn formula_strategy() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        3 => prop_oneof!["p", "q", "r"].prop_map(Formula::var),
        2 => prop_oneof!["p", "q", "r"].prop_map(Formula::neg_var),
        1 => Just(Formula::ConstTrue),
        1 => Just(Formula::ConstFalse),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Formula::and),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Formula::or),
            inner.clone().prop_map(Formula::boxed),
            inner.clone().prop_map(Formula::dia),
            inner.prop_map(Formula::not),
        ]
    })
}

/// A random pointed model over worlds `0..n` and variables p, q, r: the
/// relation and each variable's extension are bitmask-decoded.
fn model_strategy() -> impl Strategy<Value = KripkeModel> {
    (1usize..=4, any::<u16>(), any::<[u16; 3]>()).prop_map(|(n, rel_bits, var_bits)| {
        let worlds: BTreeSet<u32> = (0..n as u32).collect();
        let mut relation = BTreeSet::new();
        for u in 0..n {
            for v in 0..n {
                if rel_bits >> (u * n + v) & 1 == 1 {
                    relation.insert((u as u32, v as u32));
                }
            }
        }
        let mut valuation: BTreeMap<String, BTreeSet<u32>> = BTreeMap::new();
        for (var, bits) in ["p", "q", "r"].iter().zip(var_bits) {
            let holds: BTreeSet<u32> = (0..n as u32).filter(|w| bits >> w & 1 == 1).collect();
            if !holds.is_empty() {
                valuation.insert((*var).to_string(), holds);
            }
        }
        KripkeModel {
            worlds,
            relation,
            valuation,
            root: 0,
        }
    })
}

proptest! {
    #[test]
    fn rendering_round_trips(f in formula_strategy()) {
        let printed = f.to_string();
        let back = parse(&printed).unwrap();
        prop_assert_eq!(back, f, "through {}", printed);
    }

    #[test]
    fn normal_form_is_negation_free_and_stable(f in formula_strategy()) {
        let nnf = f.to_nnf();
        prop_assert!(!format!("{nnf}").contains('!'), "{nnf}");
        prop_assert_eq!(nnf.to_nnf(), nnf);
    }

    #[test]
    fn normal_form_preserves_meaning(f in formula_strategy(), m in model_strategy()) {
        m.validate().unwrap();
        prop_assert_eq!(m.evaluate(m.root, &f), m.evaluate(m.root, &f.to_nnf()));
    }

    #[test]
    fn restricted_fragment_formulas_are_their_own_normal_form(f in formula_strategy()) {
        prop_assume!(f.is_poor_mans());
        prop_assert_eq!(f.to_nnf(), f);
    }

    #[test]
    fn operator_sets_survive_round_trips(f in formula_strategy()) {
        let s = f.operator_set();
        prop_assert_eq!(parse(&f.to_string()).unwrap().operator_set(), s);
        let tokens = s.to_string();
        prop_assert_eq!(tokens.parse().ok(), Some(s), "tokens {}", tokens);
    }

    #[test]
    fn solver_matches_exhaustive_search_on_small_formulas(f in formula_strategy()) {
        prop_assume!(completeness_bound(&f, &FrameClass::K) <= 6);
        let verdict = sat_k_tableau(&f);
        match brute_force_sat(&f, &FrameClass::K, 6) {
            OracleOutcome::Sat(_) => prop_assert!(verdict.is_sat(), "solver UNSAT, search SAT: {}", f),
            OracleOutcome::Unsat => prop_assert!(!verdict.is_sat(), "solver SAT, search UNSAT: {}", f),
            OracleOutcome::BoundExceeded => unreachable!("bound was checked"),
        }
    }

    #[test]
    fn witnesses_satisfy_their_formulas(f in formula_strategy()) {
        let verdict = sat_k_tableau(&f);
        if let Some(m) = verdict.witness {
            m.validate().unwrap();
            prop_assert!(m.evaluate(m.root, &f), "bad witness for {}", f);
        }
    }
}

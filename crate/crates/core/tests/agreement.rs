//! Cross-validation of the decision procedures: on exhaustive small
//! corpora, every specialized procedure must agree with the general
//! branching solver, and both must agree with bounded exhaustive model
//! search wherever the search is definitive.

use modalsat_core::{
    brute_force_sat, completeness_bound, enumerate_formulas, poorman_sat_k, poorman_sat_kd_pairs,
    poorman_sat_le1, sat_k_tableau, sat_kd_tableau, sat_le1, sat_le2, Formula, FrameClass,
    GeneratorSpec, OperatorSet, OracleOutcome, SatVerdict,
};

fn poor_mans_corpus(size_cap: usize) -> Vec<Formula> {
    let spec = GeneratorSpec {
        fragment: OperatorSet::ATNEG | OperatorSet::AND | OperatorSet::BOX | OperatorSet::DIA,
        max_vars: 2,
        max_depth: 2,
        max_width: 3,
    };
    enumerate_formulas(&spec)
        .take_while(|f| f.size() <= size_cap)
        .collect()
}

fn mixed_corpus(size_cap: usize) -> Vec<Formula> {
    let spec = GeneratorSpec {
        fragment: OperatorSet::ALL,
        max_vars: 2,
        max_depth: 2,
        max_width: 2,
    };
    enumerate_formulas(&spec)
        .take_while(|f| f.size() <= size_cap)
        .collect()
}

/// Compare a solver verdict against the oracle where the oracle has a
/// definitive answer; return whether it did.
fn oracle_check(f: &Formula, fc: &FrameClass, budget: usize, verdict: &SatVerdict) -> bool {
    match brute_force_sat(f, fc, budget) {
        OracleOutcome::Sat(_) => {
            assert!(verdict.is_sat(), "solver UNSAT, oracle SAT on {f} over {fc:?}");
            true
        }
        OracleOutcome::Unsat => {
            assert!(!verdict.is_sat(), "solver SAT, oracle UNSAT on {f} over {fc:?}");
            true
        }
        OracleOutcome::BoundExceeded => false,
    }
}

fn check_witness(verdict: &SatVerdict, f: &Formula, fc: &FrameClass) {
    if let Some(m) = &verdict.witness {
        m.validate().unwrap();
        assert!(m.evaluate(m.root, f), "witness fails {f}");
        assert!(m.conforms_to(fc), "witness frame outside {fc:?} for {f}");
    }
}

#[test]
fn restricted_fragment_procedures_agree_everywhere() {
    let corpus = poor_mans_corpus(7);
    assert!(corpus.len() > 300, "corpus too small: {}", corpus.len());
    let mut definitive = 0usize;
    for f in &corpus {
        let k_fast = poorman_sat_k(f).unwrap();
        let k_gen = sat_k_tableau(f);
        assert_eq!(k_fast.is_sat(), k_gen.is_sat(), "arbitrary frames: {f}");
        check_witness(&k_fast, f, &FrameClass::K);
        check_witness(&k_gen, f, &FrameClass::K);

        let kd_fast = poorman_sat_kd_pairs(f).unwrap();
        let kd_gen = sat_kd_tableau(f);
        assert_eq!(kd_fast.is_sat(), kd_gen.is_sat(), "serial frames: {f}");
        check_witness(&kd_gen, f, &FrameClass::Serial);

        let le1_fast = poorman_sat_le1(f).unwrap();
        let le1_gen = sat_le1(f);
        assert_eq!(le1_fast.is_sat(), le1_gen.is_sat(), "one successor: {f}");
        check_witness(&le1_fast, f, &FrameClass::AtMostOne);
        check_witness(&le1_gen, f, &FrameClass::AtMostOne);

        let le2 = sat_le2(f);
        check_witness(&le2, f, &FrameClass::AtMostTwo);

        if completeness_bound(f, &FrameClass::K) <= 6 {
            definitive += usize::from(oracle_check(f, &FrameClass::K, 6, &k_gen));
        }
        definitive += usize::from(oracle_check(f, &FrameClass::Serial, 5, &kd_gen));
        definitive += usize::from(oracle_check(f, &FrameClass::AtMostOne, 3, &le1_gen));
        definitive += usize::from(oracle_check(f, &FrameClass::AtMostTwo, 5, &le2));
    }
    assert!(
        definitive > corpus.len(),
        "too few oracle-definitive comparisons: {definitive}"
    );
}

#[test]
fn frame_class_inclusions_order_the_verdicts() {
    // Every chain model is a two-successor model is an arbitrary model, and
    // padding dead ends with self-loops turns arbitrary into serial
    // satisfiability only one way: verdicts must be monotone along the
    // inclusions F≤1 ⊂ F≤2 ⊂ all frames, and serial ⊂ all frames.
    for f in poor_mans_corpus(7) {
        let le1 = sat_le1(&f).is_sat();
        let le2 = sat_le2(&f).is_sat();
        let k = sat_k_tableau(&f).is_sat();
        let kd = sat_kd_tableau(&f).is_sat();
        assert!(!le1 || le2, "one-successor SAT but two-successor UNSAT: {f}");
        assert!(!le2 || k, "two-successor SAT but arbitrary UNSAT: {f}");
        assert!(!kd || k, "serial SAT but arbitrary UNSAT: {f}");
    }
}

#[test]
fn general_solver_handles_disjunction_and_negation() {
    let corpus = mixed_corpus(5);
    assert!(corpus.len() > 1000, "corpus too small: {}", corpus.len());
    let mut definitive = 0usize;
    for f in &corpus {
        let k = sat_k_tableau(f);
        check_witness(&k, f, &FrameClass::K);
        if completeness_bound(f, &FrameClass::K) <= 6 {
            definitive += usize::from(oracle_check(f, &FrameClass::K, 6, &k));
        }
        let kd = sat_kd_tableau(f);
        check_witness(&kd, f, &FrameClass::Serial);
        definitive += usize::from(oracle_check(f, &FrameClass::Serial, 4, &kd));
    }
    assert!(
        definitive > corpus.len() / 2,
        "too few oracle-definitive comparisons: {definitive}"
    );
}

#[test]
fn pairwise_law_holds_on_the_exhaustive_corpus() {
    // Satisfiability over serial frames of a restricted-fragment
    // conjunction reduces to satisfiability of each pair of conjuncts
    // (a conjunct paired with itself covers the singleton case).
    for f in poor_mans_corpus(7) {
        let whole = poorman_sat_kd_pairs(&f).unwrap().is_sat();
        let cs = f.conjuncts();
        let mut all_pairs = true;
        for i in 0..cs.len() {
            for j in i..cs.len() {
                let pair = Formula::and(vec![cs[i].clone(), cs[j].clone()]);
                all_pairs &= sat_kd_tableau(&pair).is_sat();
            }
        }
        assert_eq!(whole, all_pairs, "pairwise law fails on {f}");
    }
}

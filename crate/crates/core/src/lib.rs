//! Modal satisfiability workbench.
//!
//! The crate decides satisfiability of modal formulas over several frame
//! classes (all frames, serial frames, and frames with bounded successor
//! counts), with a special focus on the "poor man's" fragment — formulas
//! built from atomic negation, conjunction, box, and diamond only — where
//! satisfiability over serial frames and successor-bounded frames admits
//! fast decision procedures.
//!
//! - [`formula`]: syntax — parsing, rendering, normal forms, operator sets.
//! - [`model`]: Kripke models, frames, frame classes, and evaluation.
//! - [`oracle`]: brute-force satisfiability, the ground truth for testing.
//! - [`generate`]: exhaustive and seeded test-corpus generators.
//! - [`solve`]: decision procedures per frame class.
//! - [`fragments`]: operator-set complexity classification and the
//!   specialized solvers for easy fragments.
//! - [`reduce`]: hardness reductions between problems and frame classes.

pub mod formula;
pub mod fragments;
pub mod generate;
pub mod model;
pub mod oracle;
pub mod reduce;
pub mod solve;

pub use formula::{parse, Formula, OperatorSet, ParseError};
pub use fragments::{
    classify_operator_set, fragment_dispatch, sat_np_fragment, sat_poly_fragment, Complexity,
    ComplexityClass, FragmentError,
};
pub use generate::{enumerate_formulas, sample_formulas, GeneratorSpec};
pub use model::{frame3, Frame, FrameClass, KripkeModel, World};
pub use oracle::{
    all_bounded_witnesses, assignment_coverage, brute_force_sat, completeness_bound,
    fixed_frame_sat, OracleOutcome,
};
pub use reduce::{
    is_three_colorable, label_false, normalize_qbf, phi_exp, qbf_truth, reduce_3col,
    reduce_constants_to_vars, reduce_eliminate_true, reduce_kd_to_k, reduce_onevar_to_zerovar,
    reduce_qbf, Graph, QbfInstance, ReduceError, AUX_PREFIX,
};
pub use solve::{
    poorman_sat_k, poorman_sat_kd_pairs, poorman_sat_le1, sat, sat_k_tableau, sat_kd_tableau,
    sat_le1, sat_le2, Decision, PairTable, SatVerdict, SolveError, TraceStep,
};

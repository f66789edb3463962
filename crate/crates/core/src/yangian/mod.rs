//! Principal-series L-operators, quantum minors, and the exact identity suites.

pub mod loperator;
pub mod minor;
pub mod suites;

pub use loperator::{build_l_embedded, build_l_operator, build_l_recursive, OperatorMatrix};
pub use minor::{
    b_minor, b_rab_minor, corner_minor, quantum_minor, two_skip_minor, MinorEngine, MinorError, MinorSpec,
};
pub use suites::{
    check_antisymmetry, check_gt_commutative, check_minor_commutation, check_quantum_determinant, check_recurrences,
    check_rtt, check_rtt_operator, perturbed_operator, CommRegime,
};

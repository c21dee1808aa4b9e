//! Functions on the naturals that are eventually affine, positive charges
//! with a mass at infinity, and the decomposition of positive functionals into
//! a countably additive part, a mass at infinity and a slope charge.

mod affine;
mod diagnostics;
mod measure;
mod riesz;

pub use affine::EventuallyAffine;
pub use diagnostics::{
    daniell_check, orderly_diagnostic, Check, Counterexample, CounterexampleKind, DaniellVerdict,
    OrderlyReport, ORDERLY_NOTE,
};
pub use measure::{Domain, TailFunctional, TailMeasure, Weights};
pub use riesz::{
    probe_family, riesz_decompose, truncation_limits, two_sided_truncation, verify_decomposition,
    RieszDecomposition, TruncationLimits,
};

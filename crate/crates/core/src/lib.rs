//! Exact sure-win detection, separating probabilities, superhedging prices,
//! cores of concave integrals and Riesz decomposition of positive functionals.
//!
//! All arithmetic is over arbitrary-precision rationals; every verdict comes
//! with a certificate that can be re-checked independently.

pub mod cli;
pub mod coherence;
pub mod concave;
pub mod error;
pub mod linalg;
pub mod lp;
pub mod rational;
pub mod tail;

pub use error::{Error, Result};
pub use rational::Rational;

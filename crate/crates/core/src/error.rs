use thiserror::Error;

use crate::lp::LpError;

/// Input validation failures and internal invariant violations.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error("scenario must contain at least one state")]
    EmptyScenario,
    #[error("duplicate state label {0:?}")]
    DuplicateState(String),
    #[error("unknown state label {0:?}")]
    UnknownState(String),
    #[error("{what} has length {found}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("operands are defined on different scenarios")]
    ScenarioMismatch,
    #[error("weights do not form a probability")]
    NotAProbability,
    #[error(
        "functional is not well defined: values violate a linear dependency among basis elements"
    )]
    IllDefinedFunctional,
    #[error("constant function 1 is not in the span of the basis")]
    ConstantNotInSpan,
    #[error("functional vanishes on 1 but not on its whole domain; no representing charge exists")]
    DegenerateNormalization,
    #[error("vertex enumeration limited to {max_states} states and {max_generators} generators (got {states} and {generators})")]
    EnumerationLimit {
        states: usize,
        generators: usize,
        max_states: usize,
        max_generators: usize,
    },
    #[error("anchor set lacks the normalization anchor (constant 1 with value 1)")]
    MissingNormalization,
    #[error("subset of anchors must be nonempty")]
    EmptySubset,
    #[error("index {index} out of range (length {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("family member {0} must have a nonempty subset of the base set")]
    EmptyMember(usize),
    #[error("no family member covers the whole base set with the constant 1 in its basis")]
    MissingBaseMember,
    #[error("declared inclusion between members {lower} and {upper} does not hold")]
    InclusionMismatch { lower: usize, upper: usize },
    #[error("negative weight or charge in a positive functional")]
    NegativeCharge,
    #[error("a limit charge is not positive on eventually affine functions with nonzero slope")]
    LimitChargeOnAffineDomain,
    #[error("function has nonzero slope, outside the eventually constant domain")]
    OutsideDomain,
    #[error("function is not integrable: unbounded tail against a limit charge")]
    NotIntegrable,
    #[error("internal invariant failure: {0}")]
    Internal(String),
}

impl From<LpError> for Error {
    fn from(e: LpError) -> Self {
        Error::Internal(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

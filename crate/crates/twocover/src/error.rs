use thiserror::Error;

use crate::semistable::ViolationCode;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input document. serde_json messages carry line/column.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("depth matrix not symmetric at ({0}, {1})")]
    AsymmetricDepth(String, String),

    #[error("conflicting depth entries for ({0}, {1})")]
    ConflictingDepth(String, String),

    #[error("invalid rational `{0}`")]
    BadRational(String),

    #[error("negative depth `{0}`")]
    NegativeDepth(String),

    #[error("branch data invalid: {0}")]
    InvalidBranchData(String),

    #[error("map is not a permutation of the labels: {0}")]
    InvalidPermutation(String),

    #[error("eps value for `{0}` must be +1 or -1")]
    BadEpsValue(String),

    #[error("duplicate point `{0}` in branch locus")]
    DuplicatePoint(String),

    #[error("residue characteristic {0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("branch locus is empty; a degree-two cover needs branch points or an explicit unramified flag")]
    EmptyBranchLocus,

    #[error("discriminant data has nonzero trace part; complete the square first")]
    TraceNotZero,

    #[error("semi-stability criterion needs positive genus of the base curve")]
    GenusZero,

    #[error("label permutation does not preserve depths: witness pair ({0}, {1})")]
    NotAnAutomorphism(String, String),

    #[error("relative depth is undefined for the root cluster")]
    RootCluster,

    #[error("cluster notation: {0}")]
    AsciiParse(String),

    #[error("label `{0}` cannot be written in cluster notation")]
    AsciiUnsafeLabel(String),

    #[error("principal cluster {0} has non-integral depth")]
    NonIntegralPrincipalDepth(String),

    #[error("input is not semi-stable: {}", format_violations(.0))]
    NotSemistable(Vec<ViolationCode>),

    #[error("chain for cluster {0} has non-integral length {1}")]
    ChainLengthNotIntegral(String, String),

    #[error("eps value missing for even cluster {0}")]
    EpsMissing(String),

    #[error("eps key `{0}` does not name an even cluster of the picture")]
    EpsUnexpected(String),

    #[error("chain endpoints inconsistent after mapping {0}; eps data is contradictory")]
    EndpointMismatch(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("length pairing is not positive definite")]
    NotPositiveDefinite,

    #[error("automorphism does not preserve the length pairing")]
    PairingNotPreserved,

    #[error("automorphism image is not a cycle of the lattice")]
    NotACycleImage,

    #[error("dual lattice action is not integral")]
    DualActionNotIntegral,

    #[error("component group has order {0}, above the enumeration bound {1}; enable the algebraic method or raise the bound")]
    EnumerationBoundExceeded(String, u64),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

fn format_violations(v: &[ViolationCode]) -> String {
    if v.is_empty() {
        return "parity of the disc invariants is inconsistent".to_string();
    }
    v.iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

pub type Result<T> = std::result::Result<T, Error>;

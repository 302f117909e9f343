use thiserror::Error;

/// Errors raised by the library.
///
/// Failed predicates (a family that contains a poset, a construction that
/// does not verify) are reported as data, never through this type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ground set size {0} outside 1..=30")]
    GroundSet(usize),
    #[error("ground set mismatch: {left} vs {right}")]
    GroundSetMismatch { left: usize, right: usize },
    #[error("subset {bits:#x} has elements outside [{n}]")]
    OutOfRange { bits: u64, n: usize },
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("not a poset: {0}")]
    InvalidPoset(String),
    #[error("value not certified: every tested size up to {cap} is free, so the value is at least {lower_bound}")]
    Uncertified { cap: usize, lower_bound: usize },
    #[error("outside the supported envelope: {0}")]
    Capability(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

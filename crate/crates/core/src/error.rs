use thiserror::Error;

/// Errors raised by the computational modules.
///
/// `Consistency` signals that two independent routes to the same quantity
/// disagreed, or that an internal invariant failed. `TheoremViolation` is
/// reserved for checks whose failure would contradict a known theorem.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} = {value} is outside the supported range {min}..={max}")]
    OutOfRange { what: &'static str, value: i64, min: i64, max: i64 },

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid Hessenberg function: {0}")]
    InvalidHessenberg(String),

    #[error("invalid reflection subset: {0}")]
    InvalidSubset(String),

    #[error("basis mismatch: expected {expected}, found {found}")]
    BasisMismatch { expected: &'static str, found: &'static str },

    #[error("matrix is not nilpotent")]
    NotNilpotent,

    #[error("cost guard: {0}")]
    CostGuard(String),

    #[error("unstable sampling: {0}")]
    UnstableSampling(String),

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("theorem violation: {0}")]
    TheoremViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(what: &'static str, value: usize, min: usize, max: usize) -> Result<()> {
    if value < min || value > max {
        return Err(Error::OutOfRange { what, value: value as i64, min: min as i64, max: max as i64 });
    }
    Ok(())
}

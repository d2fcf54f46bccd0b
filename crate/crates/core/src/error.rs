use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {0} is outside the supported range 1..={max}", max = crate::MAX_DIM)]
    UnsupportedDimension(usize),

    #[error("invalid effect: {0}")]
    InvalidEffect(String),

    #[error("invalid substate: {0}")]
    InvalidSubstate(String),

    #[error("invalid operation: {0}")]
    InvalidOperation(String),

    #[error("invalid observable: {0}")]
    InvalidObservable(String),

    #[error("invalid instrument: {0}")]
    InvalidInstrument(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("cannot normalize the zero substate")]
    NormalizationOfZero,

    /// The operation occurs with probability below tolerance, so the updated
    /// state and every quantity built from it are undefined.
    #[error("transition undefined: operation occurs with probability {probability:e}")]
    TransitionUndefined { probability: f64 },

    #[error("outcome labels do not match: {0}")]
    OutcomeMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

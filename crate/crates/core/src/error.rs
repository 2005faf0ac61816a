use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QtmError {
    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("symbol index {symbol} out of range for tape {tape} (alphabet size {size})")]
    SymbolOutOfRange { tape: usize, symbol: usize, size: usize },

    #[error("state index {state} out of range ({count} states)")]
    StateOutOfRange { state: usize, count: usize },

    #[error("head move {0} is not in {{-1, 0, 1}}")]
    MoveOutOfRange(i64),

    #[error("dimension mismatch: expected {expected} tapes, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("frame mismatch between operands")]
    FrameMismatch,

    #[error("operation requires {required}, frame has {actual} tapes")]
    UnsupportedTapeCount { required: &'static str, actual: usize },

    #[error("amplitude is not finite")]
    NonFiniteAmplitude,

    #[error("matrix is not unitary: deviation {0:e}")]
    NotUnitary(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("transition table fails validation (worst residual {0:e})")]
    InvalidTable(f64),
}

pub type Result<T, E = QtmError> = std::result::Result<T, E>;

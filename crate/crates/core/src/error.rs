use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid character {found:?} at position {position}; expected '0' or '1'")]
    NonBinary { position: usize, found: char },

    #[error("truth table length {0} is not a power of two >= 2")]
    BadLength(usize),

    #[error("qubit count {0} outside supported range {1}..={2}")]
    QubitCount(usize, usize, usize),

    #[error("basis index {index} out of range for {n} qubits")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("qubit {qubit} out of range 1..={n}")]
    QubitOutOfRange { qubit: usize, n: usize },

    #[error("dimension mismatch: expected {expected} qubits, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("cannot classify construction: {0}")]
    Construction(String),

    #[error("state is not normalized (norm^2 = {0})")]
    Unnormalized(f64),

    #[error("DJ promise violated: function is neither constant nor balanced")]
    PromiseViolation,

    #[error("zero-state amplitude {0} is neither ~0 nor ~1 in magnitude")]
    Indeterminate(f64),

    #[error("shot count must be positive")]
    ZeroShots,

    #[error("original DJ run: working qubit entangled with query register (deviation {0})")]
    KickbackViolated(f64),
}

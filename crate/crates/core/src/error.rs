use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QecError {
    #[error("operator sizes differ: expected {expected} qubits, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{0} qubits requested; at most 64 are supported")]
    TooManyQubits(usize),

    #[error("mask has bits set at or above n={n}")]
    MaskOutOfRange { n: usize },

    #[error("invalid Pauli letter {0:?}")]
    BadPauliChar(char),

    #[error("invalid lattice dimensions {d_x}x{d_z}: both must be at least 2")]
    BadDimensions { d_x: usize, d_z: usize },

    #[error("lattice {d_x}x{d_z} is out of range (at most {max_qubits} qubits)")]
    LatticeTooLarge {
        d_x: usize,
        d_z: usize,
        max_qubits: usize,
    },

    #[error("code already carries a Hadamard mask; XZZX transform applied twice")]
    AlreadyXzzx,

    #[error("unknown code family {0:?}")]
    UnknownFamily(String),

    #[error("invalid channel: {0}")]
    BadChannel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} needs about {cost:.3e} operations, over the budget of {budget:.3e}")]
    BudgetExceeded { what: String, cost: f64, budget: f64 },

    #[error("missing error-class data: {0}")]
    MissingClassData(String),

    #[error("{detectors} flagged detectors exceed the exact matching cap")]
    DecoderCapExceeded { detectors: usize },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl QecError {
    /// Process exit code used by the CLI and the C ABI.
    pub fn exit_code(&self) -> i32 {
        match self {
            QecError::BudgetExceeded { .. } => 3,
            QecError::Invariant(_) | QecError::DecoderCapExceeded { .. } => 4,
            _ => 2,
        }
    }
}

pub type Result<T, E = QecError> = std::result::Result<T, E>;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("shape mismatch: {0}")]
    Mismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("argument {index} of a substitution has a nonzero constant term")]
    NonzeroConstantTerm { index: usize },

    #[error("series is not a unit (zero constant term)")]
    NonUnit,

    #[error("variable index {index} out of range for {n} variables")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("vector field is not nilpotent")]
    NotNilpotent,

    #[error("not unipotent")]
    NotUnipotent,

    #[error("Dynkin series did not stabilize within word length {cap}")]
    NonStabilization { cap: usize },

    #[error("group closure exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },

    #[error("derived series did not reach the trivial group within depth {depth}")]
    NotSolvable { depth: usize },

    #[error("no common fixed vector: input matrices do not generate a unipotent group")]
    NoCommonFixedVector,

    #[error("witness at derived level {level} vanishes modulo degree {order}; increase the order")]
    WitnessDied { level: usize, order: u32 },

    #[error("syntax error at {line}:{col}: {message}")]
    Parse {
        line: usize,
        col: usize,
        message: String,
    },

    #[error("verification failed: {0}")]
    Verify(String),
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } => 2,
            Error::Verify(_) | Error::WitnessDied { .. } => 3,
            _ => 1,
        }
    }

    pub(crate) fn mismatch(what: impl Into<String>) -> Self {
        Error::Mismatch(what.into())
    }
}

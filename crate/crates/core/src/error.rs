use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count must be at least {min}, got {n}")]
    TooFewQubits { n: usize, min: usize },

    #[error("index {index} out of range for {what} (limit {limit})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        limit: usize,
    },

    #[error("input is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("zero vector where a nonzero single-qubit state was expected")]
    ZeroVector,

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("state is not permutation invariant: transposition ({0}, {1}) changes it by {2:e}")]
    NotPermutationInvariant(usize, usize, f64),

    #[error("{n} qubits exceeds the dense-representation cap of {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("not of GHZ form; offending entries (row, col): {0:?}")]
    NotGhzForm(Vec<(usize, usize)>),

    #[error("ambiguous classification: both `{first}` and `{second}` lie within tolerance")]
    AmbiguousClassification { first: String, second: String },

    #[error("unrecognized rotation group of order {order}")]
    UnrecognizedGroup { order: usize },

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("degree {degree} exceeds dimension {n}")]
    DegreeTooLarge { degree: usize, n: usize },

    #[error("invalid multi-index {entries:?} for n = {n}: entries must be strictly increasing")]
    NotIncreasing { entries: Vec<usize>, n: usize },

    #[error("form space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("curvature tensor is not Hermitian: defect {defect:e} at (j,k,λ,μ) = {at:?} exceeds {bound:e}")]
    NotHermitian {
        defect: f64,
        at: (usize, usize, usize, usize),
        bound: f64,
    },

    #[error("matrix is not Hermitian: defect {defect:e} exceeds {bound:e}")]
    NonHermitianMatrix { defect: f64, bound: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate entry for (j,k,λ,μ) = {0:?}")]
    DuplicateEntry((usize, usize, usize, usize)),

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

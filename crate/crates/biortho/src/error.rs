//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Relative Frobenius deviation from self-adjointness exceeded the tolerance.
    #[error("matrix is not Hermitian: relative deviation {deviation:.3e} exceeds {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },

    /// The Jacobi sweep cap was reached before the off-diagonal mass vanished.
    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },

    /// Operands have incompatible shapes (rows x cols vs rows x cols).
    #[error("shape mismatch: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),

    #[error("dimension mismatch for {what}: expected {expected}, got {actual}")]
    DimensionMismatch {
        what: String,
        expected: usize,
        actual: usize,
    },

    #[error("vector is not normalized: |norm - 1| = {deviation:.3e}")]
    NotNormalized { deviation: f64 },

    /// Basis changes are only defined on degeneracy classes of size >= 2.
    #[error("degeneracy class {class_index} has size {size}; a basis change needs size >= 2")]
    NotDegenerate { class_index: usize, size: usize },

    #[error("matrix is not unitary: deviation {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    /// The evolution operator does not correlate a system basis with pointer states.
    #[error("not a premeasurement: {detail}")]
    NotAPremeasurement { detail: String },

    #[error("invalid counterfactual target: {0}")]
    InvalidTarget(String),

    #[error("invalid pointer lattice: {0}")]
    InvalidLattice(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("dimension error: {0}")]
    Dimension(String),
}

impl Error {
    pub(crate) fn dim(what: impl Into<String>, expected: usize, actual: usize) -> Self {
        Error::DimensionMismatch {
            what: what.into(),
            expected,
            actual,
        }
    }
}

use thiserror::Error;

/// Errors raised by algebra construction and the verification operations.
#[derive(Debug, Error)]
pub enum EjaError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("elements belong to different algebras")]
    AlgebraMismatch,

    #[error("unsupported structure: {0}")]
    UnsupportedStructure(String),

    #[error("descriptor parse error: {0}")]
    Parse(String),

    #[error("element is not idempotent (residual {residual:.3e})")]
    NotIdempotent { residual: f64 },

    #[error("element is not an atom")]
    NotAtom,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no symmetry links the given atoms: {0}")]
    NoSymmetry(String),

    #[error("search exhausted after {attempts} attempts: {what}")]
    SearchExhausted { what: String, attempts: usize },

    #[error("ill-posed witness problem: transition probabilities differ by {gap:.3e}")]
    IllPosed { gap: f64 },

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("matrix is not orthogonal (residual {residual:.3e})")]
    NotOrthogonal { residual: f64 },

    #[error("automorphism certification failed: {0}")]
    Certification(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, EjaError>;

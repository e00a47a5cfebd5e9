use thiserror::Error;

/// Errors raised by the curvature library.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum CurvError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension {0} is odd; a complex structure needs an even dimension")]
    OddDimension(usize),
    #[error("dimension {0} is too small (need m >= 2)")]
    DimensionTooSmall(usize),
    #[error("J^2 + I has residual {residual:e}")]
    NotAntiInvolution { residual: f64 },
    #[error("matrix is not orthogonal (M^T M - I residual {residual:e})")]
    NotOrthogonal { residual: f64 },
    #[error("dimension {0} is not a multiple of 4")]
    DimensionNotMultipleOf4(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("tensor has {found} entries, expected {expected} = m^4")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("symmetry {family} violated at {quad:?} with residual {residual:e}")]
    SymmetryViolation {
        family: &'static str,
        quad: [usize; 4],
        residual: f64,
    },
    #[error("complex line was built for a different complex structure")]
    LineStructureMismatch,
    #[error("zero vector has no complex line")]
    ZeroVector,
    #[error("isometry does not commute with J (residual {residual:e})")]
    NotComplex { residual: f64 },
    #[error("model is not compatible (J*A - A residual {residual:e})")]
    NotCompatible { residual: f64 },
    #[error("holomorphic sectional curvature is not constant (spread {spread:e})")]
    QNotConstant { spread: f64 },
    #[error("holomorphic sectional curvature is not identically zero (max |Q| {max:e})")]
    QNotZero { max: f64 },
    #[error("equivalent conditions disagree: {detail}")]
    EquivalenceViolation { detail: String },
    #[error("tensor is not in A3 (J*A - A residual {residual:e})")]
    NotInA3 { residual: f64 },
    #[error("unknown constraint tag `{0}`")]
    UnknownConstraintTag(String),
    #[error("oracle is inconsistent with every curvature tensor (fit residual {residual:e})")]
    InconsistentOracle { residual: f64 },
    #[error("solution is not unique (nullity {nullity})")]
    NonUniqueSolution { nullity: usize },
    #[error("complex Jacobi operators agree and both tensors satisfy the Gray identity, yet the difference has norm {norm:e}")]
    UniquenessViolation { norm: f64 },
}

pub type Result<T> = std::result::Result<T, CurvError>;

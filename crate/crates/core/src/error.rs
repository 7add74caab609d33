use thiserror::Error;

/// Failure modes shared by every module of the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    InvalidDimension { expected: usize, got: usize },

    #[error("vector lies outside the operator domain (relative distance {violation:.3e})")]
    DomainViolation { violation: f64 },

    #[error("all input vectors are numerically zero")]
    EmptySpan,

    #[error("sequence is not a frame (lower bound {alpha:.3e})")]
    NotAFrame { alpha: f64 },

    #[error("index {index} out of range 1..={len}")]
    InvalidIndex { index: usize, len: usize },

    #[error("grid has {points} points, at least {required} required")]
    GridTooCoarse { points: usize, required: usize },

    #[error("unknown trajectory probe `{0}`")]
    InvalidProbe(String),

    #[error("operator adjoint vanishes identically; lower bound undefined")]
    DegenerateOperator,

    #[error("operator range is not contained in the synthesis range (residual {residual:.3e})")]
    RangeNotIncluded { residual: f64 },

    #[error("factorization through the analysis operator failed (residual {residual:.3e})")]
    FactorizationFailed { residual: f64 },

    #[error("operator is not surjective (smallest singular value {sigma_min:.3e})")]
    NotSurjective { sigma_min: f64 },

    #[error("sequences are not biorthogonal (defect {defect:.3e})")]
    NotBiorthogonal { defect: f64 },

    #[error("grid incompatible with lattice: {0}")]
    GridMismatch(String),

    #[error("dilated atom leaves the window: {0}")]
    WindowOverflow(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numerical routine failed: {0}")]
    Numerical(String),
}

pub type Result<T, E = FrameError> = std::result::Result<T, E>;

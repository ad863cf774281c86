use thiserror::Error;

/// Errors raised by frame construction, certification and the numerical routines.
#[derive(Debug, Error)]
pub enum FrameError {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("matrix is rank deficient (smallest singular value {0:e})")]
    RankDeficient(f64),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("frame operator is singular (smallest eigenvalue {0:e}); not a fusion frame")]
    NotAFrame(f64),

    #[error("polynomial space too large: {monomials} monomials exceeds the limit {limit}")]
    SizeGuardExceeded { monomials: u128, limit: u128 },

    #[error("operation requires subspaces of equal dimension")]
    MixedDimensions,

    #[error("operation requires at least two subspaces")]
    SingleSubspace,

    #[error("moment table has no entry for dimensions ({k}, {l})")]
    MissingMoment { k: usize, l: usize },

    #[error("quadrature supports at most two principal angles, got {0}")]
    UnsupportedQuadratureDim(usize),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("group closure exceeded the maximal order {0}")]
    GroupTooLarge(usize),

    #[error("matrix is not orthogonal (deviation {0:e})")]
    NotOrthogonal(f64),

    #[error("unknown catalog entry `{0}`")]
    UnknownName(String),

    #[error("a frame needs at least one subspace")]
    EmptyFrame,

    #[error("weights must be positive and finite, got {0}")]
    NonPositiveWeight(f64),

    #[error("basis needed an orthonormalization correction of {0:e}")]
    BasisCorrection(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, FrameError>;

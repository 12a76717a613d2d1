use thiserror::Error;

/// Errors raised by the library. Every variant maps to a stable string code
/// used in the CLI's JSON error object.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("Gram matrix is degenerate")]
    Degenerate,
    #[error("Gram matrix has non-integral entries")]
    NonIntegral,
    #[error("sign list must be nonempty and contain only +1/-1")]
    InvalidSigns,
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("ambient space has signature {found:?}, expected (3, n-, 0)")]
    AmbientSignature { found: (usize, usize, usize) },
    #[error("basis of a three-space must have rank 3, found rank {0}")]
    RankDeficient(usize),
    #[error("three-space is not positive: Hermitian signature {0:?}")]
    NotPositive((usize, usize, usize)),
    #[error("ambient spaces do not match")]
    AmbientMismatch,
    #[error("vector is not a root (norm {norm}, expected -2)")]
    NotARoot { norm: String },
    #[error("matrix is not an isometry of the lattice")]
    NotAnIsometry,
    #[error("ambient space has no designated positive frame")]
    NoPositiveFrame,
    #[error("invalid period point: {0}")]
    InvalidPeriodPoint(String),
    #[error("kappa lies on the wall of root {root:?}")]
    WallError { root: Vec<String> },
    #[error("kappa has non-positive norm {norm}")]
    NonPositiveKappa { norm: String },
    #[error("hyperplane normal must be nonzero")]
    ZeroDelta,
    #[error("line of the intersection lies on the quadric")]
    LineOnQuadric,
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NotSquare { .. } => "not_square",
            Error::NotSymmetric => "not_symmetric",
            Error::NotHermitian => "not_hermitian",
            Error::Degenerate => "degenerate",
            Error::NonIntegral => "non_integral",
            Error::InvalidSigns => "invalid_signs",
            Error::NotPositiveDefinite => "not_positive_definite",
            Error::AmbientSignature { .. } => "ambient_signature",
            Error::RankDeficient(_) => "rank_deficient",
            Error::NotPositive(_) => "not_positive",
            Error::AmbientMismatch => "ambient_mismatch",
            Error::NotARoot { .. } => "not_a_root",
            Error::NotAnIsometry => "not_an_isometry",
            Error::NoPositiveFrame => "no_positive_frame",
            Error::InvalidPeriodPoint(_) => "invalid_period_point",
            Error::WallError { .. } => "wall_error",
            Error::NonPositiveKappa { .. } => "non_positive_kappa",
            Error::ZeroDelta => "zero_delta",
            Error::LineOnQuadric => "line_on_quadric",
            Error::OutOfRange(_) => "out_of_range",
            Error::Parse(_) => "parse_error",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

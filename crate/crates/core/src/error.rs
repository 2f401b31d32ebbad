use thiserror::Error;

/// Errors raised by the algebra kernel and everything built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("degree {degree} outside 0..={top}")]
    DegreeOutOfRange { degree: i64, top: u32 },
    #[error("algebra has no fundamental class")]
    NoFundamentalClass,
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("basis of size {size} exceeds the limit of {limit} monomials")]
    TooLarge { size: usize, limit: usize },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("series constant term must be 1")]
    SeriesNotUnital,
    #[error("series constant term must be 0")]
    SeriesNotNilpotent,
    #[error("series is not invertible (zero constant term)")]
    SeriesNotInvertible,
    #[error("a Pontrjagin-type genus needs an even characteristic series")]
    SeriesNotEven,
    #[error("not a total class: {0}")]
    NotATotalClass(String),
    #[error("unknown pi-class `{0}`")]
    UnknownPiClass(String),
    #[error("expression error: {0}")]
    ExprError(String),
    #[error("unsupported dimension {found}: {reason}")]
    UnsupportedDimension { found: u32, reason: String },
    #[error("pi-class transport is not a bijection: {0}")]
    TransportError(String),
    #[error("correspondence is not a graded ring map: {0}")]
    CorrespondenceError(String),
    #[error("invalid variety model: {0}")]
    InvalidVariety(String),
    #[error("functional is not invariant: {0}")]
    NotInvariant(String),
    #[error("invalid bordism input: {0}")]
    InvalidBordism(String),
}

impl Error {
    /// Stable machine-readable name of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::AlgebraMismatch => "AlgebraMismatch",
            Error::DegreeOutOfRange { .. } => "DegreeOutOfRange",
            Error::NoFundamentalClass => "NoFundamentalClass",
            Error::InvalidPresentation(_) => "InvalidPresentation",
            Error::TooLarge { .. } => "TooLarge",
            Error::UnknownGenerator(_) => "UnknownGenerator",
            Error::SeriesNotUnital => "SeriesNotUnital",
            Error::SeriesNotNilpotent => "SeriesNotNilpotent",
            Error::SeriesNotInvertible => "SeriesNotInvertible",
            Error::SeriesNotEven => "SeriesNotEven",
            Error::NotATotalClass(_) => "NotATotalClass",
            Error::UnknownPiClass(_) => "UnknownPiClass",
            Error::ExprError(_) => "ExprError",
            Error::UnsupportedDimension { .. } => "UnsupportedDimension",
            Error::TransportError(_) => "TransportError",
            Error::CorrespondenceError(_) => "CorrespondenceError",
            Error::InvalidVariety(_) => "InvalidVariety",
            Error::NotInvariant(_) => "NotInvariant",
            Error::InvalidBordism(_) => "InvalidBordism",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

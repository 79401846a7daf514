use thiserror::Error;

use crate::distmod::ModuleViolation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot parse distance `{0}`")]
    BadDistance(String),
    #[error("cannot parse grade `{0}`")]
    BadGrade(String),
    #[error("distance matrix must be {expected}x{expected}, row {row} has {found} entries")]
    NotSquare { expected: usize, row: usize, found: usize },
    #[error("duplicate point label `{0}`")]
    DuplicateLabel(String),
    #[error("d({0},{0}) must be 0")]
    NonzeroDiagonal(String),
    #[error("d({0},{1}) = 0 for distinct points")]
    ZeroOffDiagonal(String, String),
    #[error("triangle inequality fails: d({0},{1}) + d({1},{2}) < d({0},{2})")]
    TriangleViolation(String, String, String),
    #[error("distances overflow the 64-bit rational range")]
    DistanceOverflow,
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("loop at vertex `{0}`")]
    SelfLoop(String),
    #[error("no finite positive distance in the space")]
    NoFiniteDistance,
    #[error("module has not been validated")]
    UnvalidatedModule,
    #[error("distance module violates {} axiom(s); first: {}", .0.len(), .0.first().map(|v| v.to_string()).unwrap_or_default())]
    InvalidModule(Vec<ModuleViolation>),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("boundary maps do not compose to zero")]
    NotAComplex,
    #[error("resolution too short: {0}")]
    ResolutionTooShort(String),
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),
    #[error("cochain is not a cocycle")]
    NotACocycle,
    #[error("degree {n} is outside the computed range 0..={max}")]
    DegreeOutOfRange { n: usize, max: usize },
    #[error("graded dimension mismatch at grade {grade}: quotient {quotient}, pairs {pairs}")]
    DimensionMismatch { grade: usize, quotient: usize, pairs: usize },
    #[error("relation {relation} violated at grade {grade}")]
    RelationViolation { relation: String, grade: String },
    #[error("unsupported format `{0}`")]
    UnsupportedFormat(String),
    #[error("input: {0}")]
    Input(String),
}

impl Error {
    /// Stable machine-readable tag used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::BadDistance(_) => "BadDistance",
            Error::BadGrade(_) => "BadGrade",
            Error::NotSquare { .. } => "NotSquare",
            Error::DuplicateLabel(_) => "DuplicateLabel",
            Error::NonzeroDiagonal(_) => "NonzeroDiagonal",
            Error::ZeroOffDiagonal(..) => "ZeroOffDiagonal",
            Error::TriangleViolation(..) => "TriangleViolation",
            Error::DistanceOverflow => "DistanceOverflow",
            Error::UnknownPoint(_) => "UnknownPoint",
            Error::SelfLoop(_) => "SelfLoop",
            Error::NoFiniteDistance => "NoFiniteDistance",
            Error::UnvalidatedModule => "UnvalidatedModule",
            Error::InvalidModule(_) => "InvalidModule",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::InvalidField(_) => "InvalidField",
            Error::NotAComplex => "NotAComplex",
            Error::ResolutionTooShort(_) => "ResolutionTooShort",
            Error::SpaceMismatch(_) => "SpaceMismatch",
            Error::NotACocycle => "NotACocycle",
            Error::DegreeOutOfRange { .. } => "DegreeOutOfRange",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::RelationViolation { .. } => "RelationViolation",
            Error::UnsupportedFormat(_) => "UnsupportedFormat",
            Error::Input(_) => "Input",
        }
    }
}

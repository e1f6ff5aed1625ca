use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vectors live in different spaces")]
    SpaceMismatch,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid space spec: {0}")]
    InvalidSpec(String),
    #[error("index {index} out of range 0..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("norming point is not unique")]
    NonSmoothPoint,
    #[error("functional is zero")]
    ZeroFunctional,
    #[error("unsupported space: {0}")]
    UnsupportedSpace(String),
    #[error("modulus curve is empty")]
    EmptyCurve,
    #[error("invalid modulus curve: {0}")]
    InvalidCurve(String),
    #[error("space is not uniformly convex")]
    NotUniformlyConvex,
    #[error("dual space is not uniformly monotone")]
    NotUniformlyMonotone,
    #[error("bisection failed: {0}")]
    BisectionFailure(String),
    #[error("Hahn-Banach extension is not unique")]
    NonUniqueExtension,
    #[error("component mismatch: {0}")]
    ComponentMismatch(String),
    #[error("component dual lacks a positive modulus of convexity: {0}")]
    PreconditionModulus(String),
    #[error("label collision: {0:?}")]
    LabelCollision(String),
    #[error("operator has no points")]
    EmptyK,
    #[error("premise violated: {0}")]
    PremiseViolation(String),
    #[error("no Bishop-Phelps-Bollobas witness found along the search path")]
    SearchExhausted,
    #[error("invalid bump function: {0}")]
    BumpInvalid(String),
    #[error("invalid experiment config: {0}")]
    ConfigInvalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

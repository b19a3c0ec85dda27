use thiserror::Error;

/// Errors raised by model construction, channel solvers and predictors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("channel has c_k = 0 and is a flat band; use the flat-band spectrum")]
    FlatBandChannel,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("axial length {l} must be a positive multiple of the period {p} and at most {max}")]
    InvalidTruncation { l: usize, p: usize, max: usize },
    #[error("degenerate geometry: {0}")]
    GeometryDegenerate(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

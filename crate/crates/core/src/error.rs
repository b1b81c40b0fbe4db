use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Shape mismatch between a point, a space and a map, or an unsupported
    /// model combination.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("epsilon {epsilon} is below the resolution floor {floor}")]
    BelowResolutionFloor { epsilon: f64, floor: f64 },

    #[error("insufficient scale range: {admissible} admissible scale(s), at least 3 required")]
    InsufficientScaleRange { admissible: usize },

    #[error("resolution too coarse for requested gamma {gamma}")]
    ResolutionTooCoarse { gamma: f64 },

    #[error("lambda {lambda} is not above the map exponent: no violating pair")]
    LambdaNotAboveExponent { lambda: f64 },

    #[error("image point not representable in cloud: {0}")]
    NotRepresentable(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of an estimator's numerical preconditions, as
    /// opposed to malformed inputs.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::BelowResolutionFloor { .. }
                | Error::InsufficientScaleRange { .. }
                | Error::ResolutionTooCoarse { .. }
                | Error::LambdaNotAboveExponent { .. }
                | Error::NotRepresentable(_)
                | Error::Precondition(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

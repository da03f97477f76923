use thiserror::Error;

/// Errors raised by the exterior-calculus kernels and the bound machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degree {k} out of range for dimension {n}")]
    DegreeOutOfRange { n: usize, k: usize },

    #[error("degree overflow: {j} + {k} exceeds dimension {n}")]
    DegreeOverflow { n: usize, j: usize, k: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("non-finite value {value} at {location:?}")]
    NonFinite { value: f64, location: Vec<f64> },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("metric is not symmetric positive-definite at {0:?}")]
    MetricDegenerate(Vec<f64>),

    #[error("orientation violated (det = {det:e}) at {point:?}")]
    Orientation { point: Vec<f64>, det: f64 },

    #[error("degenerate map: smallest singular value {alpha_min:e} at {point:?}")]
    DegenerateMap { point: Vec<f64>, alpha_min: f64 },

    #[error("support mask selects no sample points")]
    EmptySupport,

    #[error("not implemented: {0}")]
    NotImplemented(String),

    #[error("scenario {id}: {source}")]
    Scenario { id: String, source: Box<Error> },
}

impl Error {
    /// Wraps `self` with the id of the scenario that raised it.
    pub fn in_scenario(self, id: &str) -> Self {
        match self {
            Error::Scenario { .. } => self,
            other => Error::Scenario { id: id.to_string(), source: Box::new(other) },
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

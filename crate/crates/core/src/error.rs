use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {got} exceeds the supported limit {limit}")]
    BoundExceeded {
        what: &'static str,
        limit: usize,
        got: usize,
    },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("order mismatch: {0}")]
    OrderMismatch(String),
    #[error("jet fields live on different point clouds")]
    CloudMismatch,
    #[error("point {0} is not in the cloud")]
    NotInCloud(String),
    #[error("duplicate point {0} in cloud")]
    DuplicatePoint(String),
    #[error("subset must be nonempty")]
    EmptySubset,
    #[error("image of point {point} is unmatched (min distance {min_distance})")]
    Unmatched { point: String, min_distance: f64 },
    #[error("matrix is not orthogonal: {0}")]
    NotOrthogonal(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("candidate jets at {point} disagree: {first} vs {second}")]
    Conflict {
        point: String,
        first: String,
        second: String,
    },
    #[error("groupoid invariance violated: {0}")]
    Inv1Violation(String),
    #[error("{got} quadrature nodes given, at least {required} required")]
    TooFewNodes { required: usize, got: usize },
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("float literal {0:?} not accepted in exact mode")]
    FloatInExactMode(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable name of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::BoundExceeded { .. } => "bound_exceeded",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::OrderMismatch(_) => "order_mismatch",
            Error::CloudMismatch => "cloud_mismatch",
            Error::NotInCloud(_) => "not_in_cloud",
            Error::DuplicatePoint(_) => "duplicate_point",
            Error::EmptySubset => "empty_subset",
            Error::Unmatched { .. } => "unmatched",
            Error::NotOrthogonal(_) => "not_orthogonal",
            Error::Unsupported(_) => "unsupported",
            Error::Conflict { .. } => "conflict",
            Error::Inv1Violation(_) => "inv1_violation",
            Error::TooFewNodes { .. } => "too_few_nodes",
            Error::Internal(_) => "internal",
            Error::FloatInExactMode(_) => "float_in_exact_mode",
            Error::Parse(_) => "parse",
        }
    }
}

pub fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

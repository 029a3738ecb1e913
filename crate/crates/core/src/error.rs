use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("arrows are not composable: {later} does not start at the target of {earlier}")]
    NonComposable { later: String, earlier: String },

    #[error("alcove kind {0} is an infinite set and cannot be enumerated")]
    InfiniteSet(String),

    #[error("groupoid contexts do not match")]
    ContextMismatch,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("Im tau must be positive, got {0}")]
    InvalidTau(f64),

    #[error("invalid elliptic parameters: {0}")]
    InvalidParams(String),

    #[error("near pole: {what} (|value| = {modulus:e})")]
    NearPole { what: String, modulus: f64 },

    #[error("SOS base lies on the singular set: b_{i} - b_{j} = {diff}")]
    BaseOnSingularSet { i: usize, j: usize, diff: String },

    #[error("restriction violated at {point}: component {component} has modulus {modulus:e}")]
    RestrictionViolated {
        point: String,
        component: String,
        modulus: f64,
    },

    #[error("arrows do not close a face: {0}")]
    NonSquare(String),

    #[error("support of the element leaves the alcove at arrow {0}")]
    SupportOutsideAlcove(String),

    #[error("{faces} faces exceed the enumeration budget of {budget}")]
    TooLarge { faces: usize, budget: usize },

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("weight {0} is outside the alcove")]
    LambdaOutsideAlcove(String),

    #[error("unknown suite: {0}")]
    UnknownSuite(String),

    #[error("unknown compute target: {0}")]
    UnknownTarget(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

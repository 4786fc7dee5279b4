use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not a prime below 2^32")]
    InvalidModulus(u64),

    #[error("modulus {modulus} must exceed {required} (characteristic must be larger than the degree and every multiplicity)")]
    ModulusTooSmall { modulus: u64, required: u64 },

    #[error("point {index} has {found} coordinates, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("point {0} is the zero vector")]
    ZeroPoint(usize),

    #[error("points {0} and {1} are projectively equal")]
    CoincidentPoints(usize, usize),

    #[error("{points} points but {mults} multiplicities")]
    LengthMismatch { points: usize, mults: usize },

    #[error("multiplicity {value} at position {index} is not positive")]
    NonPositiveMultiplicity { index: usize, value: i64 },

    #[error("point {0} lies on the slicing hyperplane x0 = 0")]
    PointOnSlicingHyperplane(usize),

    #[error("induced points from priors {first} and {second} coincide (active point {active} is collinear with them)")]
    DegenerateInducedConfig {
        active: usize,
        first: usize,
        second: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("ambient dimension C({n}+{m},{n}) = {dim} exceeds the cap {cap}")]
    CapExceeded { n: u32, m: u32, dim: u64, cap: u64 },

    #[error("malformed uple {0:?}")]
    MalformedUple(String),

    #[error("cache integrity: key {key} already stored with a different value")]
    CacheIntegrity { key: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

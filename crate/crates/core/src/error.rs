use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite coordinate or parameter: {0}")]
    NonFinite(String),

    #[error("empty input: {0}")]
    Empty(String),

    #[error("degenerate input: affine hull has dimension {affine_dim} in ambient dimension {dim}")]
    Degenerate { affine_dim: usize, dim: usize },

    #[error("dimension {dim} exceeds the supported maximum {max} for hull enumeration")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("size {size} exceeds cap {cap}")]
    CapExceeded { size: u128, cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid combination: {0}")]
    InvalidCombination(String),

    #[error("cloud {index} is not contained in the prescribed ball: worst distance {distance} exceeds radius {radius}")]
    ContainmentViolated {
        index: usize,
        distance: f64,
        radius: f64,
    },

    #[error("point for cloud {index} lies outside the convex hull of that cloud")]
    NotInHull { index: usize },

    #[error("witness failure at x = {x:?}, r = {r}: achieved ratio {achieved} below required {required}")]
    WitnessFailure {
        x: Vec<f64>,
        r: f64,
        achieved: f64,
        required: f64,
    },

    #[error("thickness shortfall: certified {certified} below target {target} (worst cell x = {x:?}, r = {r}, ratio {ratio})")]
    ThicknessShortfall {
        certified: f64,
        target: f64,
        x: Vec<f64>,
        r: f64,
        ratio: f64,
    },

    #[error("resolution {resolution} is too coarse for scale floor {floor}")]
    ResolutionTooCoarse { resolution: f64, floor: f64 },

    #[error("summand {index} is a singleton (zero diameter); positive diameter is a hypothesis, not a normalization")]
    Singleton { index: usize },

    #[error("summand {index} is certified thick only at {certified}, not above alpha = {alpha}")]
    ThicknessPrecondition {
        index: usize,
        certified: f64,
        alpha: f64,
    },

    #[error("parametric bound violated: n = {n} does not exceed sqrt(d)(1+lambda)/(lambda(alpha-lambda)) = {required}")]
    ThresholdViolation { n: usize, required: f64 },

    #[error(
        "premise failure in {check} for summand {summand} at vertex path {path:?}: margin {margin}"
    )]
    PremiseFailed {
        check: String,
        summand: usize,
        path: Vec<usize>,
        margin: f64,
    },

    #[error("linear program failed: {0}")]
    Lp(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("malformed input {source_name}: {detail}")]
    Malformed { source_name: String, detail: String },

    #[error("i/o error on {path}: {detail}")]
    Io { path: String, detail: String },
}

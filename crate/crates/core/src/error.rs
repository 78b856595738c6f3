use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// `n = 0` has no lowest or highest set bit.
    #[error("index must be positive (got 0)")]
    ZeroIndex,

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: u64, limit: u64 },

    #[error("level {level} exceeds resolution {resolution}")]
    LevelExceedsResolution { level: u32, resolution: u32 },

    #[error("resolution {resolution} exceeds the configured maximum {max}")]
    ResolutionTooLarge { resolution: u32, max: u32 },

    #[error("exponent p must be positive (got {0})")]
    InvalidExponent(f64),

    #[error("index set is empty")]
    EmptyIndexSet,

    #[error("resolution mismatch: {left} vs {right}")]
    ResolutionMismatch { left: u32, right: u32 },

    #[error("value vector of length {len} is not 2^{resolution}")]
    BadLength { len: usize, resolution: u32 },

    #[error("coefficient schedule violates summability: sum |lambda|^p = {sum} > {cap}")]
    NotSummable { sum: f64, cap: f64 },

    #[error("invalid interval: {0}")]
    InvalidInterval(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

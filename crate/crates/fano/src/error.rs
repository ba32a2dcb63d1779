use flagcalc::CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FanoError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("empty zero locus: rank {rank} exceeds ambient dimension {dim}")]
    EmptyZeroLocus { rank: i64, dim: usize },
    #[error("empty zero locus: the top Chern class of {0} vanishes")]
    VanishingTopChern(String),
    #[error("internal consistency check failed: {what}: {left} != {right}")]
    Inconsistent { what: String, left: String, right: String },
    #[error("{0}")]
    Invalid(String),
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("seed line {line}: {source}")]
    Seed { line: usize, source: CoreError },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl FanoError {
    /// True for failures of an internal cross-check rather than bad input.
    pub fn is_consistency(&self) -> bool {
        matches!(self, FanoError::Inconsistent { .. } | FanoError::Core(CoreError::Inconsistent { .. }))
    }

    pub fn is_parse(&self) -> bool {
        matches!(self, FanoError::Core(CoreError::Parse { .. }) | FanoError::Seed { .. } | FanoError::Config { .. })
    }
}

pub type Result<T> = std::result::Result<T, FanoError>;

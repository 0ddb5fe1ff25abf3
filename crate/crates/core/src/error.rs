use thiserror::Error;

use crate::geometry::GridPoint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty configuration")]
    EmptyConfiguration,
    #[error("duplicate point {0}")]
    DuplicatePoint(GridPoint),
    #[error("frame has no determined vertical axis but points are not collinear")]
    UndeterminedAxis,
    #[error("configuration has {actual} robots, need at least {needed}")]
    TooFewRobots { needed: usize, actual: usize },
    #[error("configuration has {config} robots but the pattern has {target}")]
    CardinalityMismatch { config: usize, target: usize },
    #[error("fairness window {window} too small for {robots} robots (need at least {})", 2 * robots)]
    FairnessWindow { window: usize, robots: usize },
    #[error("malformed trace: {0}")]
    MalformedTrace(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

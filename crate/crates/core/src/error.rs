use thiserror::Error;

use crate::poly::ParseError;
use crate::poly::ResultantError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Resultant(#[from] ResultantError),
    #[error("origin is not a strict local minimum: {0}")]
    NotAStrictMinimum(String),
    #[error("origin is not a critical point with value zero")]
    NotACriticalPoint,
    #[error("no candidate radius passed the neighbourhood checks: {0}")]
    NoValidRadius(String),
    #[error("level {0} escapes the neighbourhood")]
    LevelEscapesNeighbourhood(f64),
    #[error("no contour of level {0} encloses the origin")]
    NoComponentAroundOrigin(f64),
    #[error("refinement onto the level diverged near ({0}, {1})")]
    RefinementDiverged(f64, f64),
    #[error("polynomial does not depend on y")]
    ConstantInY,
    #[error("polar half-branches {0} and {1} cross away from the origin")]
    BranchSelfCrossing(usize, usize),
    #[error("polar seed detection failed: {0}")]
    SeedDetectionFailed(String),
    #[error("tangency Newton iteration diverged near ({0}, {1})")]
    NewtonDiverged(f64, f64),
    #[error("inconsistent interval tracking at x = {x}: {detail}")]
    EventMismatch { x: f64, detail: String },
    #[error("tree has no root")]
    Unrooted,
    #[error("level {value} is below the numeric floor {floor}")]
    BelowNumericFloor { value: f64, floor: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("empty input: {0}")]
    Empty(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    /// Errors caused by the request rather than by the geometry.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::InvalidArgument(_) | Error::Io { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

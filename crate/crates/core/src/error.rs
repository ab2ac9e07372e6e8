use thiserror::Error;

use crate::gridmod::Point;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid grid shape {0:?}: every axis needs at least one coordinate")]
    InvalidShape(Vec<usize>),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("point {point:?} lies outside the grid {sizes:?}")]
    OutOfBounds { point: Point, sizes: Vec<usize> },

    #[error("axis {axis} out of range for a {naxes}-parameter grid")]
    AxisOutOfRange { axis: usize, naxes: usize },

    #[error("modules live over different grids or fields")]
    Incompatible,

    #[error("point set is not convex: {low:?} <= {mid:?} <= {high:?} with {mid:?} missing")]
    NotConvex { low: Point, mid: Point, high: Point },

    #[error("point set is not connected: no zig-zag joins {0:?} and {1:?}")]
    NotConnected(Point, Point),

    #[error("point set is empty")]
    EmptySet,

    #[error("columns are linearly dependent")]
    DependentColumns,

    #[error("not a block on this grid")]
    NotABlock,

    #[error("blocks need at least two parameters (got {0})")]
    TooFewAxes(usize),

    #[error("cube dimension {k} out of range 1..={n}")]
    CubeDimension { k: usize, n: usize },

    #[error("endomorphism is not natural at point {point:?} along axis {axis}")]
    NotNatural { point: Point, axis: usize },

    #[error("claw center {0:?} is not the global minimum")]
    ClawCenter(Point),

    #[error("module is not valid: {0}")]
    InvalidModule(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("malformed module file: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("the zero vector is not a move")]
    ZeroMove,
    #[error("ruleset has no moves")]
    EmptyRuleset,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("arithmetic overflow")]
    Overflow,
    #[error("result has a negative component")]
    NegativeResult,
    #[error("ruleset shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("memory budget exceeded: need {needed} bytes, budget is {budget} bytes")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("unsupported parameter regime: {0}")]
    UnsupportedRegime(String),
    #[error("color conflict at ({x},{y}): {first} vs {second}")]
    ColorConflict { x: u64, y: u64, first: String, second: String },
    #[error("grid too small: {0}")]
    GridTooSmall(String),
    #[error("degenerate segment: {0}")]
    DegenerateSegment(String),
    #[error("boundary lines cross inside the board at x={x}")]
    CrossingLines { x: u64 },
    #[error("line has no lattice points on the board")]
    NoLatticePoints,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pulse {index} is coherent with area {area}, the classical engine only models pi pulses")]
    NonClassicalPulse { index: usize, area: f64 },
    #[error("missing frequency entry: {0}")]
    MissingEntry(String),
    #[error("missing key: {0}")]
    MissingKey(String),
    #[error("invalid polymer: {0}")]
    InvalidPolymer(String),
    #[error("invalid pulse: {0}")]
    InvalidPulse(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("species {0} and {1} are not adjacent in the pattern")]
    NonAdjacentSpecies(char, char),
    #[error("unknown species {0}")]
    UnknownSpecies(String),
    #[error("displacement plan does not conserve the center of gravity (sum {0} units)")]
    CenterOfGravityViolation(i64),
    #[error("polymer length {0} is not a whole number of periods")]
    PartialPeriodPolymer(usize),
    #[error("{needed} bits exceed the capacity {capacity}")]
    CapacityExceeded { needed: usize, capacity: usize },
    #[error("initial configuration is not all zero")]
    NonZeroInitialState,
    #[error("layout mismatch: {0}")]
    LayoutMismatch(String),
    #[error("section overflow: {0}")]
    SectionOverflow(String),
    #[error("pulse {0} is a decay pump and cannot be applied coherently")]
    DissipativePulse(usize),
    #[error("dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("species {0} has no fast-decay level")]
    NoFastDecay(char),
    #[error("shift out of range: {0}")]
    ShiftOutOfRange(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

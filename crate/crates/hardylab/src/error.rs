use thiserror::Error;

/// Errors shared by all hardylab modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate interval [{0}, {1}]")]
    DegenerateInterval(f64, f64),
    #[error("grid needs at least {min} nodes, got {got}")]
    TooFewNodes { min: usize, got: usize },
    #[error("geometric grading ratio must lie in (0,1), got {0}")]
    BadGradingRatio(f64),
    #[error("grid nodes must be strictly increasing (violation near index {0})")]
    NonMonotoneNodes(usize),
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("weight singular at interior node r = {0}")]
    SingularWeight(f64),
    #[error("profile produced a non-finite value at r = {0}")]
    NonFiniteProfile(f64),
    #[error("infinite-energy input: mode k >= 1 requires f(0) = 0, got f(0) = {0}")]
    InfiniteEnergy(f64),
    #[error("step function piece {index} invalid: value {value}, measure {measure}")]
    BadPiece {
        index: usize,
        value: f64,
        measure: f64,
    },
    #[error("step function is not in canonical form (call decreasing_rearrangement first)")]
    NotCanonical,
    #[error("zero denominator in quotient")]
    ZeroDenominator,
    #[error("matrix pair is not symmetric positive definite: {0}")]
    NotSpd(String),
    #[error("eigenvalue bracket failure: {0}")]
    BracketFailure(String),
    #[error("solver did not converge: {0}")]
    NoConvergence(String),
    #[error("descent produced no decrease after backtracking exhaustion (iteration {0})")]
    DescentStalled(usize),
    #[error("mesh does not span the problem domain: {0}")]
    MeshMismatch(String),
    #[error("csv parse error at line {line}: {msg}")]
    CsvParse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

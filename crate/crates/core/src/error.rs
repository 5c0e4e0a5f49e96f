use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FluxError {
    #[error("a flux needs at least one piece")]
    NoPieces,
    #[error("the first piece must extend to -inf")]
    FirstBoundNotUnbounded,
    #[error("breakpoint {index} does not increase")]
    BreakpointsNotIncreasing { index: usize },
    #[error("flux jumps by {jump} at breakpoint u = {at}")]
    Discontinuous { at: f64, jump: f64 },
    #[error("piece {index} has non-finite data")]
    NonFinite { index: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FanError {
    #[error("wave speeds decrease at wave {index}: {previous} > {next}")]
    NonMonotone {
        index: usize,
        previous: f64,
        next: f64,
    },
    #[error("wave {index} does not connect to its neighbour")]
    NotAdjacent { index: usize },
    #[error("wave {index} is malformed: {reason}")]
    Malformed { index: usize, reason: String },
    #[error("non-finite Riemann data")]
    NonFinite,
    #[error("envelope construction did not terminate")]
    NoProgress,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProfileError {
    #[error("delta masses are only defined for t >= 0, got t = {0}")]
    NegativeTime(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("unsupported scenario: {0}")]
    UnsupportedScenario(String),
    #[error("inconsistent fan: {0}")]
    InconsistentFan(String),
    #[error(
        "the v-equation inside the rarefaction on [{from}, {to}] admits a bounded nonzero solution ({family})"
    )]
    NonzeroBoundedSolution { from: f64, to: f64, family: String },
    #[error(transparent)]
    Fan(#[from] FanError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("a wave at x = {position} leaves the interval [{a}, {b}] at t = {t}")]
    IntervalTooNarrow { a: f64, b: f64, t: f64, position: f64 },
    #[error("invalid verification input: {0}")]
    InvalidInput(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FvmError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("time step collapsed to {dt} at t = {t}")]
    CflViolation { t: f64, dt: f64 },
    #[error("spike window [{lo}, {hi}] leaves the domain [{a}, {b}]")]
    WindowClipped { lo: f64, hi: f64, a: f64, b: f64 },
    #[error("not enough snapshots to fit a rate ({0})")]
    TooFewSamples(usize),
}

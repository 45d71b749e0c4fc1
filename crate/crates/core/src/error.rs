use thiserror::Error;

/// Failures shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("radial integrand not converged at r_max: last decade holds {fraction:.3e} of the total (limit {limit:.0e})")]
    TailNotConverged { fraction: f64, limit: f64 },

    #[error("profile is identically zero")]
    ZeroProfile,

    #[error("density is identically zero")]
    ZeroDensity,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{module}: not converged after {iterations} iterations (residual {residual:.3e}, tolerance {tolerance:.0e})")]
    NotConverged {
        module: &'static str,
        iterations: usize,
        residual: f64,
        tolerance: f64,
    },

    #[error("no bound state: lowest eigenvalue {eigenvalue:.3e} is nonnegative at N = {mass}")]
    Unbound { eigenvalue: f64, mass: f64 },

    #[error("shooting bracket failed: no sign change for u(0) in [{lo}, {hi}]")]
    BracketFailed { lo: f64, hi: f64 },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("points {0} and {1} coincide")]
    CoincidentPoints(usize, usize),

    #[error("optimizer stalled: {0}")]
    OptimizerStalled(String),

    #[error("malformed profile file: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

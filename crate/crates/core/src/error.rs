//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by the physics and numerics layers.
#[derive(Debug, Error)]
pub enum CoreError {
    /// An input violated a domain precondition (e.g. rho <= 0).
    #[error("domain error: {0}")]
    Domain(String),

    /// A tabulated medium was queried outside its frequency range.
    #[error("extrapolation error: xi = {xi:e} rad/s outside table range [{lo:e}, {hi:e}]")]
    Extrapolation { xi: f64, lo: f64, hi: f64 },

    /// Quadrature failed to reach the requested tolerance.
    #[error("quadrature did not converge within {evals} evaluations (best estimate {best:e}, error estimate {error:e})")]
    Convergence { best: f64, error: f64, evals: usize },

    /// A Matsubara sum whose terms fail to decay.
    #[error("matsubara sum diverges: |term({n_max})| >= |term({n_half})|")]
    Divergence { n_max: usize, n_half: usize },

    /// Coupling too strong to bracket a resonance root near omega0.
    #[error("strong coupling: alpha0 |T| / omega0^2 = {coupling:.3e} >= 1, no root bracket near omega0")]
    StrongCoupling { coupling: f64 },

    /// Slope profile never reached the requested asymptotic plateaus.
    #[error("regime not reached: slope range attained [{min_slope:.3}, {max_slope:.3}], wanted plateaus {s1} and {s2}")]
    RegimeNotReached {
        min_slope: f64,
        max_slope: f64,
        s1: f64,
        s2: f64,
    },

    /// Two curves were combined on different rho grids.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// An operation was called with an incompatible model kind.
    #[error("usage error: {0}")]
    Usage(String),

    /// Configuration file problem, with a line reference when available.
    #[error("config error at line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl CoreError {
    pub fn domain(msg: impl Into<String>) -> Self {
        CoreError::Domain(msg.into())
    }

    pub fn config(line: usize, msg: impl Into<String>) -> Self {
        CoreError::Config {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CoreError>;

//! Error type shared by every module in the crate.

use core::fmt;

/// Errors from domain validation, solvers, and quadrature.
#[derive(Debug, Clone, PartialEq)]
pub enum EstError {
    /// Input outside an operation's domain (infeasible rate, nonpositive
    /// scale, probability outside [0, 1], ...).
    Domain(String),
    /// Iteration budget exhausted; carries the best iterate found.
    NotConverged {
        what: &'static str,
        best_r_b: f64,
        best_r_e: f64,
        residual: f64,
    },
    /// A converged rate pair violates 0 < R_E < R_B.
    Infeasible { r_b: f64, r_e: f64 },
    /// Panel refinement stopped before reaching the requested tolerance.
    QuadratureNotConverged { estimate: f64, error: f64 },
}

impl fmt::Display for EstError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EstError::Domain(msg) => write!(f, "domain error: {msg}"),
            EstError::NotConverged {
                what,
                best_r_b,
                best_r_e,
                residual,
            } => write!(
                f,
                "not converged: {what} (best iterate r_b={best_r_b}, r_e={best_r_e}, residual={residual})"
            ),
            EstError::Infeasible { r_b, r_e } => {
                write!(f, "infeasible rate pair: r_b={r_b}, r_e={r_e}")
            }
            EstError::QuadratureNotConverged { estimate, error } => write!(
                f,
                "quadrature not converged: estimate={estimate}, error bound={error}"
            ),
        }
    }
}

impl std::error::Error for EstError {}

impl EstError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        EstError::Domain(msg.into())
    }
}

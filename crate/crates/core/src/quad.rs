//! Gauss–Legendre quadrature used for fading averages.

use crate::error::EstError;
use serde::{Deserialize, Serialize};

/// Controls the adaptive panel refinement of the fading-average integral.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Panel-doubling limit; the finest grid has 2^max_refinements panels.
    pub max_refinements: u32,
    /// Exponential tail mass excluded by truncating the fading domain.
    pub tail_mass: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-9,
            rel_tol: 1e-9,
            max_refinements: 12,
            tail_mass: 1e-9,
        }
    }
}

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre polynomial.
pub(crate) fn gauss_legendre_nodes(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // Chebyshev-based starting guess for the i-th root
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n(x) and P_n'(x) via the three-term recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((-x, w)); // roots emitted in ascending order
    }
    out
}

/// Composite fixed-order Gauss–Legendre rule over [a, b] with `panels`
/// equal subintervals.
fn composite<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: u32, nodes: &[(f64, f64)]) -> f64 {
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        let half = 0.5 * h;
        let mut acc = 0.0;
        for &(x, w) in nodes {
            acc += w * f(mid + half * x);
        }
        total += half * acc;
    }
    total
}

/// Adaptive composite Gauss–Legendre integration of f over [a, b]:
/// doubles the panel count until two successive estimates agree to the
/// configured tolerance.
pub(crate) fn adaptive_gauss_legendre<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<f64, EstError> {
    let nodes = gauss_legendre_nodes(16);
    let mut panels = 1_u32;
    let mut prev = composite(&f, a, b, panels, &nodes);
    for _ in 0..cfg.max_refinements {
        panels *= 2;
        let next = composite(&f, a, b, panels, &nodes);
        let err = (next - prev).abs();
        if err <= cfg.abs_tol.max(cfg.rel_tol * next.abs()) {
            return Ok(next);
        }
        prev = next;
    }
    Err(EstError::QuadratureNotConverged {
        estimate: prev,
        error: f64::NAN,
    })
}

//! Solver configuration, diagnostic reports, and scalar root-finding
//! primitives shared by the rate optimizers.

use crate::error::EstError;
use crate::fixed::HessianReport;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Tolerances and iteration limits for the fixed-point solvers.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Fixed-point / first-order residual target.
    pub tolerance: f64,
    /// Outer iteration budget.
    pub max_iter: u32,
    /// Damping factor λ in (0, 1]: x ← (1−λ)x + λ·map(x).
    pub damping: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tolerance: 1e-10,
            max_iter: 200,
            damping: 0.5,
        }
    }
}

impl SolverConfig {
    pub(crate) fn validate(&self) -> Result<(), EstError> {
        if !(self.tolerance > 0.0) {
            return Err(EstError::domain("solver tolerance must be positive"));
        }
        if self.max_iter == 0 {
            return Err(EstError::domain("solver max_iter must be >= 1"));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(EstError::domain("solver damping must lie in (0, 1]"));
        }
        Ok(())
    }
}

/// Second-order classification of a located stationary point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    /// Strict second-order maximum test passed.
    LocalMax,
    /// Scalar second derivative is positive.
    SaddleOrMin,
    /// Hessian test failed (indefinite or negative determinant).
    NotLocalMax,
    /// Degenerate or numerically unresolved curvature.
    Inconclusive,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Classification::LocalMax => "local_max",
            Classification::SaddleOrMin => "saddle_or_min",
            Classification::NotLocalMax => "not_local_max",
            Classification::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

/// Outcome of a rate optimization: the located rates, the achieved residual,
/// and second-order diagnostics.
///
/// For the adaptive scheme `r_b` is the (fixed) main-channel capacity and
/// `second_order` the second derivative at `r_e`; for the fixed-rate scheme
/// `second_order` is the Hessian determinant and `hessian` carries the
/// entries. `sign_changes` counts derivative sign changes over the scan grid
/// for the one-dimensional solvers; more than one means the stationary point
/// is not unique.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverReport {
    pub r_b: f64,
    pub r_e: f64,
    pub est: f64,
    pub residual: f64,
    pub iterations: u32,
    pub second_order: f64,
    pub classification: Classification,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hessian: Option<HessianReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign_changes: Option<u32>,
}

// ---------------------------------------------------------------------------
// Scalar root finding / maximization
// ---------------------------------------------------------------------------

/// Bisection for f(x) = 0 on [lo, hi], where f(lo) and f(hi) have opposite
/// signs. Runs to floating-point interval exhaustion.
pub(crate) fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = f(lo);
    if f_lo == 0.0 {
        return lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Newton iteration safeguarded by a bracketing bisection step whenever the
/// Newton update leaves [lo, hi] or stalls. Requires a sign change on entry.
pub(crate) fn newton_bisect<F, D>(f: F, df: D, mut lo: f64, mut hi: f64, tol: f64) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut f_lo = f(lo);
    if f_lo == 0.0 {
        return lo;
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fx = f(x);
        if fx == 0.0 {
            return x;
        }
        if (fx > 0.0) == (f_lo > 0.0) {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
        }
        let dfx = df(x);
        let newton = x - fx / dfx;
        x = if dfx != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo < tol {
            return x;
        }
    }
    x
}

/// Golden-section search for the maximum of a unimodal f on [lo, hi].
/// Returns the abscissa of the maximum.
pub(crate) fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

/// Two-dimensional Nelder–Mead maximization. Infeasible points must map to
/// −∞ in `f`. Returns the best vertex and the number of iterations used.
pub(crate) fn nelder_mead_max_2d<F: Fn((f64, f64)) -> f64>(
    f: F,
    start: (f64, f64),
    scale: f64,
    tol: f64,
    max_iter: u32,
) -> ((f64, f64), u32) {
    let mut simplex = [
        start,
        (start.0 + scale, start.1),
        (start.0, start.1 + scale),
    ];
    let mut values = [f(simplex[0]), f(simplex[1]), f(simplex[2])];
    let mut iterations = 0;

    for _ in 0..max_iter {
        iterations += 1;
        // order so that values[0] >= values[1] >= values[2]
        let mut order = [0_usize, 1, 2];
        order.sort_by(|&i, &j| values[j].partial_cmp(&values[i]).unwrap());
        simplex = [simplex[order[0]], simplex[order[1]], simplex[order[2]]];
        values = [values[order[0]], values[order[1]], values[order[2]]];

        let spread = (simplex[0].0 - simplex[2].0).abs().max(
            (simplex[0].1 - simplex[2].1)
                .abs()
                .max((simplex[0].0 - simplex[1].0).abs()),
        );
        if spread < tol {
            break;
        }

        let centroid = (
            0.5 * (simplex[0].0 + simplex[1].0),
            0.5 * (simplex[0].1 + simplex[1].1),
        );
        let worst = simplex[2];
        let reflect = (
            centroid.0 + (centroid.0 - worst.0),
            centroid.1 + (centroid.1 - worst.1),
        );
        let f_reflect = f(reflect);

        if f_reflect > values[0] {
            let expand = (
                centroid.0 + 2.0 * (centroid.0 - worst.0),
                centroid.1 + 2.0 * (centroid.1 - worst.1),
            );
            let f_expand = f(expand);
            if f_expand > f_reflect {
                simplex[2] = expand;
                values[2] = f_expand;
            } else {
                simplex[2] = reflect;
                values[2] = f_reflect;
            }
        } else if f_reflect > values[1] {
            simplex[2] = reflect;
            values[2] = f_reflect;
        } else {
            let contract = (
                centroid.0 + 0.5 * (worst.0 - centroid.0),
                centroid.1 + 0.5 * (worst.1 - centroid.1),
            );
            let f_contract = f(contract);
            if f_contract > values[2] {
                simplex[2] = contract;
                values[2] = f_contract;
            } else {
                // shrink toward the best vertex
                for k in 1..3 {
                    simplex[k] = (
                        0.5 * (simplex[k].0 + simplex[0].0),
                        0.5 * (simplex[k].1 + simplex[0].1),
                    );
                    values[k] = f(simplex[k]);
                }
            }
        }
    }

    let mut best = 0;
    for k in 1..3 {
        if values[k] > values[best] {
            best = k;
        }
    }
    (simplex[best], iterations)
}

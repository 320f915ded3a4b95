//! Adaptive transmission scheme: the transmitter knows the main-channel
//! capacity, sets R_B = C_B, and only the redundancy rate R_E is chosen.
//!
//! The throughput is Ψ_a(R_E) = (C_B − R_E) F_{γE}(2^{R_E} − 1): reliability
//! outage is impossible, so the EST trades secrecy rate against the secrecy
//! outage probability. This module provides the closed form, its first and
//! second derivatives, a damped fixed-point solver for the stationary
//! redundancy rate R_E† (with a derivative-bisection fallback), the
//! eavesdropper-SNR → ∞ asymptote, and the fading average of the optimized
//! throughput.

use crate::error::EstError;
use crate::est::CapacityB;
use crate::quad::{adaptive_gauss_legendre, QuadratureConfig};
use crate::solver::{bisect, newton_bisect, Classification, SolverConfig, SolverReport};
use crate::special::{exp2_m1, poisson_pmf, regularized_lower_gamma, Probability, Snr};
use std::cell::RefCell;
use std::f64::consts::LN_2;

/// Interior margin: solvers never evaluate closer than this to 0 or C_B.
const EDGE: f64 = 1e-9;

/// Grid used to count derivative sign changes (stationary-point
/// multiplicity diagnostic) and to bracket the bisection fallback.
const SCAN_POINTS: usize = 512;

/// One fading realization of the adaptive scheme: the realized capacity
/// plus the eavesdropper's statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveScenario {
    c_b: CapacityB,
    gamma_bar_e: Snr,
    n_e: u32,
}

impl AdaptiveScenario {
    /// Requires c_b > 0 (otherwise no feasible R_E), positive gamma_bar_e,
    /// and at least one eavesdropper antenna.
    pub fn new(c_b: CapacityB, gamma_bar_e: Snr, n_e: u32) -> Result<Self, EstError> {
        if c_b.value() <= 0.0 {
            return Err(EstError::domain("adaptive scheme requires c_b > 0"));
        }
        if gamma_bar_e.value() <= 0.0 {
            return Err(EstError::domain("gamma_bar_e must be positive"));
        }
        if n_e == 0 {
            return Err(EstError::domain("n_e must be >= 1"));
        }
        Ok(AdaptiveScenario {
            c_b,
            gamma_bar_e,
            n_e,
        })
    }

    pub fn c_b(&self) -> CapacityB {
        self.c_b
    }

    pub fn gamma_bar_e(&self) -> Snr {
        self.gamma_bar_e
    }

    pub fn n_e(&self) -> u32 {
        self.n_e
    }

    /// Normalized CDF argument x = (2^{r_e} − 1)/γ̄_E.
    fn x(&self, r_e: f64) -> f64 {
        exp2_m1(r_e) / self.gamma_bar_e.value()
    }

    /// F_{γE}(2^{r_e} − 1) with relative accuracy preserved near 0 (the
    /// plain 1 − e^{−x}Σ form cancels there).
    fn eve_cdf(&self, r_e: f64) -> f64 {
        regularized_lower_gamma(self.n_e as f64, self.x(r_e))
            .expect("integer-shape incomplete gamma converges")
    }

    /// d/dr_e F_{γE}(2^{r_e} − 1): the pdf term
    /// (2^{r_e} ln2 / γ̄_E) e^{−x} x^{N−1} / (N−1)!.
    fn eve_cdf_slope(&self, r_e: f64) -> f64 {
        let q = exp2(r_e) * LN_2 / self.gamma_bar_e.value();
        q * poisson_pmf(self.n_e - 1, self.x(r_e))
    }
}

fn exp2(x: f64) -> f64 {
    x.exp2()
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

/// Secrecy outage probability of the adaptive scheme:
/// O_{s,a}(r_e) = 1 − F_{γE}(2^{r_e} − 1).
///
/// Identical to the fixed-rate scheme's secrecy outage; the implementation
/// is shared.
pub fn secrecy_outage_adaptive(r_e: f64, s: AdaptiveScenario) -> Result<Probability, EstError> {
    crate::fixed::secrecy_outage_fixed(r_e, s.gamma_bar_e, s.n_e)
}

/// EST of the adaptive scheme, Ψ_a(r_e) = (C_B − r_e) F_{γE}(2^{r_e} − 1).
///
/// Zero at both endpoints r_e = 0 and r_e = C_B.
pub fn est_adaptive(r_e: f64, s: AdaptiveScenario) -> Result<f64, EstError> {
    let c_b = s.c_b.value();
    if !r_e.is_finite() || r_e < 0.0 || r_e > c_b {
        return Err(EstError::domain(format!(
            "r_e must lie in [0, C_B] = [0, {c_b}], got {r_e}"
        )));
    }
    let outage = secrecy_outage_adaptive(r_e, s)?;
    Ok((c_b - r_e) * outage.complement().value())
}

/// First derivative dΨ_a/dr_e = −F_{γE}(2^{r_e}−1) + (C_B − r_e) F'_{γE}.
pub fn est_adaptive_derivative(r_e: f64, s: AdaptiveScenario) -> Result<f64, EstError> {
    let c_b = s.c_b.value();
    if !r_e.is_finite() || r_e <= 0.0 || r_e >= c_b {
        return Err(EstError::domain(format!(
            "derivative requires r_e in (0, C_B) = (0, {c_b}), got {r_e}"
        )));
    }
    Ok(derivative_unchecked(r_e, s))
}

fn derivative_unchecked(r_e: f64, s: AdaptiveScenario) -> f64 {
    (s.c_b.value() - r_e) * s.eve_cdf_slope(r_e) - s.eve_cdf(r_e)
}

/// Second derivative of Ψ_a. The (N_E − 1)/(2^{r_e} − 1) term makes r_e = 0
/// a domain error for N_E > 1; the evaluation below folds the division into
/// the pdf power so interior points near 0 stay finite.
pub fn est_adaptive_second_derivative(r_e: f64, s: AdaptiveScenario) -> Result<f64, EstError> {
    let c_b = s.c_b.value();
    if !r_e.is_finite() || r_e <= 0.0 || r_e >= c_b {
        return Err(EstError::domain(format!(
            "second derivative requires r_e in (0, C_B) = (0, {c_b}), got {r_e}"
        )));
    }
    Ok(second_derivative_unchecked(r_e, s))
}

fn second_derivative_unchecked(r_e: f64, s: AdaptiveScenario) -> f64 {
    let gamma_e = s.gamma_bar_e.value();
    let c_b = s.c_b.value();
    let n = s.n_e;
    let two_r = exp2(r_e);
    let x = s.x(r_e);
    let slope = s.eve_cdf_slope(r_e);
    let gap = c_b - r_e;

    let mut second = slope * (gap * (1.0 - two_r / gamma_e) * LN_2 - 2.0 + LN_2 * gap * (n - 1) as f64);
    if n > 1 {
        // E · ln2/(2^{r_e}−1) · (N−1)(C_B−r_e): folding the division and the
        // (N−1) multiplier into the pmf gives
        // (2^{r_e} ln2²/γ̄_E²) e^{−x} x^{N−2}/(N−2)!, finite near r_e = 0
        let factor = two_r * LN_2 * LN_2 / (gamma_e * gamma_e);
        second += gap * factor * poisson_pmf(n - 2, x);
    }
    second
}

// ---------------------------------------------------------------------------
// Stationary-rate solver
// ---------------------------------------------------------------------------

/// Fixed-point map r ↦ C_B − F_{γE}(2^r − 1)/F'_{γE}(2^r − 1); its fixed
/// points are the stationary points of Ψ_a.
fn fixed_point_map(r_e: f64, s: AdaptiveScenario) -> f64 {
    s.c_b.value() - s.eve_cdf(r_e) / s.eve_cdf_slope(r_e)
}

fn classify_scalar(second: f64) -> Classification {
    if second < 0.0 {
        Classification::LocalMax
    } else if second > 0.0 {
        Classification::SaddleOrMin
    } else {
        Classification::Inconclusive
    }
}

fn degenerate_report(s: AdaptiveScenario, sign_changes: u32) -> SolverReport {
    // EST vanishes at both endpoints; report the r_e = 0 endpoint.
    SolverReport {
        r_b: s.c_b.value(),
        r_e: 0.0,
        est: 0.0,
        residual: 0.0,
        iterations: 0,
        second_order: f64::NAN,
        classification: Classification::Inconclusive,
        hessian: None,
        sign_changes: Some(sign_changes),
    }
}

/// Locates the stationary redundancy rate R_E† in (0, C_B).
///
/// Runs the damped fixed-point iteration x ← (1−λ)x + λ·map(x) from
/// C_B/2 with projection onto [EDGE, C_B − EDGE]; if the iteration budget
/// is exhausted, falls back to bisection on the derivative over the same
/// interval. A short Newton polish on the derivative then sharpens the
/// root. When the derivative has no sign change at all (degenerate
/// C_B ≈ 0), the zero-EST endpoint report is returned.
pub fn solve_redundancy_rate(s: AdaptiveScenario, cfg: SolverConfig) -> Result<SolverReport, EstError> {
    cfg.validate()?;
    let c_b = s.c_b.value();
    if c_b <= 3.0 * EDGE {
        return Ok(degenerate_report(s, 0));
    }
    let lo = EDGE;
    let hi = c_b - EDGE;

    // Multiplicity scan: count sign changes of dΨ_a/dr_e.
    let mut sign_changes = 0_u32;
    let mut bracket = None;
    let mut prev_r = lo;
    let mut prev_d = derivative_unchecked(lo, s);
    for i in 1..SCAN_POINTS {
        let r = lo + (hi - lo) * i as f64 / (SCAN_POINTS - 1) as f64;
        let d = derivative_unchecked(r, s);
        if prev_d != 0.0 && d != 0.0 && (prev_d > 0.0) != (d > 0.0) {
            sign_changes += 1;
            if bracket.is_none() {
                bracket = Some((prev_r, r));
            }
        }
        prev_r = r;
        prev_d = d;
    }

    // Damped fixed-point iteration.
    let mut r = 0.5 * c_b;
    let mut iterations = 0_u32;
    let mut converged = false;
    for _ in 0..cfg.max_iter {
        iterations += 1;
        let mapped = fixed_point_map(r, s);
        if mapped.is_nan() {
            break;
        }
        if (r - mapped).abs() < cfg.tolerance {
            converged = true;
            break;
        }
        r = ((1.0 - cfg.damping) * r + cfg.damping * mapped).clamp(lo, hi);
    }

    if !converged {
        match bracket {
            Some((a, b)) => {
                r = bisect(|t| derivative_unchecked(t, s), a, b);
                iterations += 64;
            }
            None => return Ok(degenerate_report(s, sign_changes)),
        }
    }

    // Newton polish on the derivative.
    for _ in 0..8 {
        let d = derivative_unchecked(r, s);
        let d2 = second_derivative_unchecked(r, s);
        if d == 0.0 || d2 == 0.0 {
            break;
        }
        let next = r - d / d2;
        if !(next > lo && next < hi) {
            break;
        }
        if derivative_unchecked(next, s).abs() >= d.abs() {
            break;
        }
        r = next;
        iterations += 1;
    }

    let fp_residual = (r - fixed_point_map(r, s)).abs();
    let derivative_residual = derivative_unchecked(r, s).abs();
    let residual = fp_residual.min(derivative_residual);
    if !(residual < cfg.tolerance) {
        return Err(EstError::NotConverged {
            what: "adaptive redundancy-rate fixed point",
            best_r_b: c_b,
            best_r_e: r,
            residual,
        });
    }
    let second = second_derivative_unchecked(r, s);
    Ok(SolverReport {
        r_b: c_b,
        r_e: r,
        est: est_adaptive(r, s)?,
        residual,
        iterations,
        second_order: second,
        classification: classify_scalar(second),
        hessian: None,
        sign_changes: Some(sign_changes),
    })
}

/// γ̄_E → ∞ limit of R_E†: the root of r = C_B − (1 − 2^{−r})/ln2,
/// independent of the eavesdropper statistics.
pub fn asymptotic_redundancy_rate_high_eve_snr(
    c_b: CapacityB,
    cfg: SolverConfig,
) -> Result<f64, EstError> {
    cfg.validate()?;
    let c = c_b.value();
    if c <= 0.0 {
        return Err(EstError::domain("asymptote requires c_b > 0"));
    }
    // g(0) = −C_B < 0 and g(C_B) = (1 − 2^{−C_B})/ln2 > 0: unique root.
    let g = |r: f64| r - c - exp2_m1(-r) / LN_2;
    let dg = |r: f64| 1.0 + exp2(-r);
    let root = newton_bisect(g, dg, 0.0, c, 1e-15 * c.max(1.0));
    let residual = g(root).abs();
    if residual > cfg.tolerance {
        return Err(EstError::NotConverged {
            what: "high-eavesdropper-SNR redundancy asymptote",
            best_r_b: c,
            best_r_e: root,
            residual,
        });
    }
    Ok(root)
}

/// Fading average of the optimized adaptive EST,
/// E_{γB}[ Ψ_a*(log2(1 + γB)) ] with γB exponential of mean `gamma_bar_b`.
///
/// Adaptive Gauss–Legendre over the truncated fading domain
/// [0, −γ̄_B ln(tail_mass)] covering 1 − tail_mass of the exponential
/// mass, solving the stationary rate at every node.
pub fn average_max_est_adaptive(
    gamma_bar_b: Snr,
    gamma_bar_e: Snr,
    n_e: u32,
    cfg: SolverConfig,
    quad: QuadratureConfig,
) -> Result<f64, EstError> {
    if gamma_bar_b.value() <= 0.0 || gamma_bar_e.value() <= 0.0 {
        return Err(EstError::domain("average EST requires positive mean SNRs"));
    }
    let mean_b = gamma_bar_b.value();
    let gamma_max = -mean_b * quad.tail_mass.ln();
    let failure: RefCell<Option<EstError>> = RefCell::new(None);
    let integrand = |gamma_b: f64| {
        let c_b = (1.0 + gamma_b).log2();
        if c_b <= 3.0 * EDGE {
            return 0.0;
        }
        let scenario = AdaptiveScenario {
            c_b: CapacityB::new(c_b).expect("capacity is finite"),
            gamma_bar_e,
            n_e,
        };
        let density = (-gamma_b / mean_b).exp() / mean_b;
        match solve_redundancy_rate(scenario, cfg) {
            Ok(report) => report.est * density,
            Err(err) => {
                failure.borrow_mut().get_or_insert(err);
                0.0
            }
        }
    };
    let value = adaptive_gauss_legendre(integrand, 0.0, gamma_max, &quad);
    // a per-node solver failure explains a non-converged integral; report it first
    if let Some(err) = failure.into_inner() {
        return Err(err);
    }
    value
}

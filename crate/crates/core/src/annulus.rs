//! Absolute-passive eavesdropping: Eve's location is uniform over an
//! annulus around the transmitter and only path-loss statistics are known.
//!
//! With γ̄_E = c_0 ρ^{−η} and ρ² uniform on [ρ_i², ρ_o²], the position
//! average of either scheme's EST has a closed form in the lower
//! incomplete gamma function: the expected secrecy-success probability is
//!
//! 1 − Σ_{j=0}^{N_E−1} (2 u^j / j!) · [γ(v, u ρ_o^η) − γ(v, u ρ_i^η)]
//!                     / ((ρ_o² − ρ_i²) η u^v)
//!
//! with u = (2^{R_E} − 1)/c_0 and v = j + 2/η. Both rate optimizers here
//! are derivative-free (grid bracketing plus golden-section / simplex
//! refinement), matching how the rates are determined in practice.

use crate::error::EstError;
use crate::est::{CapacityB, RatePair};
use crate::solver::{nelder_mead_max_2d, Classification, SolverConfig, SolverReport};
use crate::special::{exp2_m1, factorial, ln_gamma, regularized_lower_gamma, Snr};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Interior margin for the rate optimizers.
const EDGE: f64 = 1e-9;

/// Annulus geometry and reference path-loss calibration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusModel {
    rho_i: f64,
    rho_o: f64,
    gamma_bar_0: Snr,
    rho_r: f64,
    eta: f64,
}

impl AnnulusModel {
    /// Requires 0 < rho_i < rho_o, a positive reference SNR and distance,
    /// and a positive path-loss exponent.
    pub fn new(
        rho_i: f64,
        rho_o: f64,
        gamma_bar_0: Snr,
        rho_r: f64,
        eta: f64,
    ) -> Result<Self, EstError> {
        if !(rho_i > 0.0 && rho_o > rho_i && rho_i.is_finite() && rho_o.is_finite()) {
            return Err(EstError::domain(format!(
                "annulus radii must satisfy 0 < rho_i < rho_o, got ({rho_i}, {rho_o})"
            )));
        }
        if gamma_bar_0.value() <= 0.0 {
            return Err(EstError::domain("reference SNR must be positive"));
        }
        if !(rho_r > 0.0 && rho_r.is_finite()) {
            return Err(EstError::domain("reference distance must be positive"));
        }
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(EstError::domain("path-loss exponent must be positive"));
        }
        Ok(AnnulusModel {
            rho_i,
            rho_o,
            gamma_bar_0,
            rho_r,
            eta,
        })
    }

    pub fn rho_i(&self) -> f64 {
        self.rho_i
    }

    pub fn rho_o(&self) -> f64 {
        self.rho_o
    }

    pub fn gamma_bar_0(&self) -> Snr {
        self.gamma_bar_0
    }

    pub fn rho_r(&self) -> f64 {
        self.rho_r
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Path-loss constant c_0 = γ̄_0 ρ_r^η.
    pub fn c_0(&self) -> f64 {
        self.gamma_bar_0.value() * self.rho_r.powf(self.eta)
    }
}

/// Eve's position in polar coordinates around the transmitter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvePosition {
    pub rho: f64,
    pub theta: f64,
}

/// Average eavesdropper SNR at distance rho: γ̄_E = c_0 ρ^{−η}.
pub fn pathloss_snr(rho: f64, m: AnnulusModel) -> Result<Snr, EstError> {
    if !(rho > 0.0) {
        return Err(EstError::domain(format!(
            "path loss requires a positive distance, got {rho}"
        )));
    }
    Snr::new(m.c_0() * rho.powf(-m.eta))
}

/// Draws a position uniformly over the annulus: ρ² uniform on
/// [ρ_i², ρ_o²] (then square-rooted), θ uniform on [0, 2π).
pub fn sample_eve_position<R: Rng + ?Sized>(rng: &mut R, m: AnnulusModel) -> EvePosition {
    let lo = m.rho_i * m.rho_i;
    let hi = m.rho_o * m.rho_o;
    let rho_sq = lo + (hi - lo) * rng.random::<f64>();
    let theta = 2.0 * std::f64::consts::PI * rng.random::<f64>();
    EvePosition {
        rho: rho_sq.sqrt(),
        theta,
    }
}

// ---------------------------------------------------------------------------
// Position-averaged closed forms
// ---------------------------------------------------------------------------

/// E_ρ[F_{γE(ρ)}(2^{r_e} − 1)]: the position-averaged probability that the
/// redundancy rate covers Eve's capacity. Shared by both theorems.
fn averaged_secrecy_success(r_e: f64, n_e: u32, m: AnnulusModel) -> Result<f64, EstError> {
    let u = exp2_m1(r_e) / m.c_0();
    if u == 0.0 {
        return Ok(0.0);
    }
    let area = m.rho_o * m.rho_o - m.rho_i * m.rho_i;
    let x_hi = u * m.rho_o.powf(m.eta);
    let x_lo = u * m.rho_i.powf(m.eta);
    let mut survival = 0.0;
    for j in 0..n_e {
        let v = j as f64 + 2.0 / m.eta;
        let p_hi = regularized_lower_gamma(v, x_hi)?;
        let p_lo = regularized_lower_gamma(v, x_lo)?;
        // (2 u^j / j!) γ(v, ·)-difference / (area η u^v), with u^{j−v} = u^{−2/η}
        let term = 2.0 * ln_gamma(v).exp() * u.powf(-2.0 / m.eta) * (p_hi - p_lo)
            / (factorial(j) * m.eta * area);
        survival += term;
    }
    Ok((1.0 - survival).clamp(0.0, 1.0))
}

/// Position-averaged EST of the adaptive scheme,
/// Ψ̃_a(r_e) = (C_B − r_e) · E_ρ[F_{γE(ρ)}(2^{r_e} − 1)].
pub fn avg_est_adaptive_annulus(
    r_e: f64,
    c_b: CapacityB,
    n_e: u32,
    m: AnnulusModel,
) -> Result<f64, EstError> {
    let c = c_b.value();
    if !r_e.is_finite() || r_e < 0.0 || r_e > c {
        return Err(EstError::domain(format!(
            "r_e must lie in [0, C_B] = [0, {c}], got {r_e}"
        )));
    }
    if n_e == 0 {
        return Err(EstError::domain("n_e must be >= 1"));
    }
    Ok((c - r_e) * averaged_secrecy_success(r_e, n_e, m)?)
}

/// Position-averaged EST of the fixed-rate scheme,
/// Ψ̃_f(r_b, r_e) = (r_b − r_e) e^{−(2^{r_b}−1)/γ̄_B} · E_ρ[F_{γE(ρ)}(2^{r_e} − 1)].
pub fn avg_est_fixed_annulus(
    r: RatePair,
    gamma_bar_b: Snr,
    n_e: u32,
    m: AnnulusModel,
) -> Result<f64, EstError> {
    if r.r_e() <= 0.0 {
        return Err(EstError::domain(format!(
            "averaged fixed-rate EST requires 0 < r_e < r_b, got r_e={}",
            r.r_e()
        )));
    }
    if gamma_bar_b.value() <= 0.0 {
        return Err(EstError::domain("gamma_bar_b must be positive"));
    }
    if n_e == 0 {
        return Err(EstError::domain("n_e must be >= 1"));
    }
    let survive_b = (-exp2_m1(r.r_b()) / gamma_bar_b.value()).exp();
    Ok(r.secrecy_rate() * survive_b * averaged_secrecy_success(r.r_e(), n_e, m)?)
}

// ---------------------------------------------------------------------------
// Rate optimizers
// ---------------------------------------------------------------------------

fn fd_slope<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

fn fd_curvature<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
}

/// Maximizes Ψ̃_a over r_e ∈ (0, C_B): coarse-grid bracketing followed by
/// golden-section refinement. Returns the zero-EST endpoint report when no
/// interior maximum exists.
pub fn optimize_annulus_adaptive(
    c_b: CapacityB,
    n_e: u32,
    m: AnnulusModel,
    cfg: SolverConfig,
) -> Result<SolverReport, EstError> {
    cfg.validate()?;
    let c = c_b.value();
    if c <= 0.0 {
        return Err(EstError::domain("optimizer requires c_b > 0"));
    }
    let objective = |r: f64| avg_est_adaptive_annulus(r, c_b, n_e, m).unwrap_or(f64::NEG_INFINITY);
    if c <= 3.0 * EDGE {
        return Ok(SolverReport {
            r_b: c,
            r_e: 0.0,
            est: 0.0,
            residual: 0.0,
            iterations: 0,
            second_order: f64::NAN,
            classification: Classification::Inconclusive,
            hessian: None,
            sign_changes: None,
        });
    }

    const GRID: usize = 512;
    let lo = EDGE;
    let hi = c - EDGE;
    let mut best = (lo, f64::NEG_INFINITY);
    for i in 0..GRID {
        let r = lo + (hi - lo) * i as f64 / (GRID - 1) as f64;
        let val = objective(r);
        if val > best.1 {
            best = (r, val);
        }
    }
    if !(best.1 > 0.0) {
        return Ok(SolverReport {
            r_b: c,
            r_e: 0.0,
            est: 0.0,
            residual: 0.0,
            iterations: GRID as u32,
            second_order: f64::NAN,
            classification: Classification::Inconclusive,
            hessian: None,
            sign_changes: None,
        });
    }
    let spacing = (hi - lo) / (GRID - 1) as f64;
    let bracket_lo = (best.0 - spacing).max(lo);
    let bracket_hi = (best.0 + spacing).min(hi);
    let r_e = crate::solver::golden_section_max(objective, bracket_lo, bracket_hi, 1e-11 * c.max(1.0));

    let h = 1e-6 * c.max(1.0);
    let slope = fd_slope(&objective, r_e, h);
    let curvature = fd_curvature(&objective, r_e, h);
    let classification = if curvature < 0.0 {
        Classification::LocalMax
    } else if curvature > 0.0 {
        Classification::SaddleOrMin
    } else {
        Classification::Inconclusive
    };
    Ok(SolverReport {
        r_b: c,
        r_e,
        est: avg_est_adaptive_annulus(r_e, c_b, n_e, m)?,
        residual: slope.abs(),
        iterations: GRID as u32 + 80,
        second_order: curvature,
        classification,
        hessian: None,
        sign_changes: None,
    })
}

/// Maximizes Ψ̃_f over 0 < r_e < r_b: coarse grid over a data-driven
/// rectangle followed by Nelder–Mead refinement (no analytic gradient of
/// the incomplete-gamma form is required).
pub fn optimize_annulus_fixed(
    gamma_bar_b: Snr,
    n_e: u32,
    m: AnnulusModel,
    cfg: SolverConfig,
) -> Result<SolverReport, EstError> {
    cfg.validate()?;
    if gamma_bar_b.value() <= 0.0 {
        return Err(EstError::domain("optimizer requires gamma_bar_b > 0"));
    }
    let r_max = (1.0 + 20.0 * gamma_bar_b.value()).log2();
    let objective = |rb: f64, re: f64| {
        if re <= EDGE || rb <= re + EDGE || rb > 2.0 * r_max {
            return f64::NEG_INFINITY;
        }
        match RatePair::new(rb, re) {
            Ok(pair) => avg_est_fixed_annulus(pair, gamma_bar_b, n_e, m)
                .unwrap_or(f64::NEG_INFINITY),
            Err(_) => f64::NEG_INFINITY,
        }
    };

    const GRID: usize = 128;
    let mut best = (r_max / 2.0, r_max / 4.0, f64::NEG_INFINITY);
    for i in 1..=GRID {
        let rb = r_max * i as f64 / GRID as f64;
        for j in 1..GRID {
            let re = rb * j as f64 / GRID as f64;
            let val = objective(rb, re);
            if val > best.2 {
                best = (rb, re, val);
            }
        }
    }
    let scale = r_max / GRID as f64;
    let ((r_b, r_e), iters) =
        nelder_mead_max_2d(|p| objective(p.0, p.1), (best.0, best.1), scale, 1e-12, 600);

    let pair = RatePair::new(r_b, r_e)
        .map_err(|_| EstError::Infeasible { r_b, r_e })?;
    let est = avg_est_fixed_annulus(pair, gamma_bar_b, n_e, m)?;
    if !est.is_finite() {
        return Err(EstError::NotConverged {
            what: "annulus fixed-rate optimizer",
            best_r_b: r_b,
            best_r_e: r_e,
            residual: f64::NAN,
        });
    }

    // finite-difference second-order certificate
    let h = 1e-5 * r_max.max(1.0);
    let f_b = |rb: f64| objective(rb, r_e);
    let f_e = |re: f64| objective(r_b, re);
    let a = fd_curvature(&f_b, r_b, h);
    let c = fd_curvature(&f_e, r_e, h);
    let b = (objective(r_b + h, r_e + h) - objective(r_b + h, r_e - h)
        - objective(r_b - h, r_e + h)
        + objective(r_b - h, r_e - h))
        / (4.0 * h * h);
    let hessian = HessianFd { a, b, c }.report();
    let residual = fd_slope(&f_b, r_b, h).abs().max(fd_slope(&f_e, r_e, h).abs());
    Ok(SolverReport {
        r_b,
        r_e,
        est,
        residual,
        iterations: iters,
        second_order: hessian.det,
        classification: hessian.classification,
        hessian: Some(hessian),
        sign_changes: None,
    })
}

struct HessianFd {
    a: f64,
    b: f64,
    c: f64,
}

impl HessianFd {
    fn report(&self) -> crate::fixed::HessianReport {
        let det = self.a * self.c - self.b * self.b;
        let classification = if self.a < 0.0 && det > 0.0 {
            Classification::LocalMax
        } else if det < 0.0 || (det > 0.0 && self.a > 0.0) {
            Classification::NotLocalMax
        } else {
            Classification::Inconclusive
        };
        crate::fixed::HessianReport {
            a: self.a,
            b: self.b,
            c: self.c,
            det,
            classification,
        }
    }
}

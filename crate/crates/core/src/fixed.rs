//! Fixed-rate transmission scheme: the transmitter knows only channel
//! statistics, so the codeword rate R_B and redundancy rate R_E are fixed
//! jointly.
//!
//! The throughput is
//!
//! Ψ_f(R_B, R_E) = (R_B − R_E) e^{−(2^{R_B}−1)/γ̄_B} F_{γE}(2^{R_E} − 1)
//!
//! and the stationary pair solves the coupled first-order conditions
//!
//! R_E = R_B − γ̄_B/(2^{R_B} ln2)
//! R_B = R_E + (e^{(2^{R_E}−1)/γ̄_E} − F)/G
//!
//! with F and G the partial sums defined below. The solver alternates the
//! two conditions starting from R_E = 0, then polishes with a Newton step
//! on the analytic gradient; the closed-form Hessian classifies the result.

use crate::error::EstError;
use crate::est::{ChannelParams, RatePair};
use crate::solver::{bisect, newton_bisect, Classification, SolverConfig, SolverReport};
use crate::special::{
    exp2_m1, exp_snr_cdf, factorial, gamma_snr_cdf, poisson_pmf, regularized_lower_gamma,
    Probability, Snr,
};
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

/// Interior margin: the solver never evaluates exactly at R_E = 0.
const EDGE: f64 = 1e-9;

/// Entries of the symmetric 2×2 Hessian of Ψ_f and the strict
/// second-order test: a local maximum requires a < 0 and det > 0.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct HessianReport {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub det: f64,
    pub classification: Classification,
}

impl HessianReport {
    fn from_entries(a: f64, b: f64, c: f64) -> Self {
        let det = a * c - b * b;
        let classification = if a < 0.0 && det > 0.0 {
            Classification::LocalMax
        } else if det < 0.0 || (det > 0.0 && a > 0.0) {
            Classification::NotLocalMax
        } else {
            Classification::Inconclusive
        };
        HessianReport {
            a,
            b,
            c,
            det,
            classification,
        }
    }
}

// ---------------------------------------------------------------------------
// Outage probabilities and the closed form
// ---------------------------------------------------------------------------

/// Reliability outage probability O_{r,f}(r_b) = F_{γB}(2^{r_b} − 1).
pub fn reliability_outage_fixed(r_b: f64, gamma_bar_b: Snr) -> Result<Probability, EstError> {
    if !r_b.is_finite() || r_b < 0.0 {
        return Err(EstError::domain(format!("r_b must be >= 0, got {r_b}")));
    }
    exp_snr_cdf(Snr::new(exp2_m1(r_b))?, gamma_bar_b)
}

/// Secrecy outage probability O_{s,f}(r_e) = 1 − F_{γE}(2^{r_e} − 1).
/// The same function serves the adaptive scheme.
pub fn secrecy_outage_fixed(r_e: f64, gamma_bar_e: Snr, n_e: u32) -> Result<Probability, EstError> {
    if !r_e.is_finite() || r_e < 0.0 {
        return Err(EstError::domain(format!("r_e must be >= 0, got {r_e}")));
    }
    Ok(gamma_snr_cdf(Snr::new(exp2_m1(r_e))?, n_e, gamma_bar_e)?.complement())
}

/// EST of the fixed-rate scheme. Strictly positive on 0 < r_e < r_b for
/// finite parameters; requires r_e > 0 (the rate pair already enforces
/// r_e < r_b).
pub fn est_fixed(r: RatePair, p: ChannelParams) -> Result<f64, EstError> {
    if r.r_e() <= 0.0 {
        return Err(EstError::domain(format!(
            "est_fixed requires 0 < r_e < r_b, got r_e={}",
            r.r_e()
        )));
    }
    let survive_b = reliability_outage_fixed(r.r_b(), p.gamma_bar_b())?.complement();
    let survive_e = secrecy_outage_fixed(r.r_e(), p.gamma_bar_e(), p.n_e())?.complement();
    Ok(r.secrecy_rate() * survive_b.value() * survive_e.value())
}

// ---------------------------------------------------------------------------
// The F, G, D, E building blocks of the first-order conditions and Hessian
// ---------------------------------------------------------------------------

/// F(N_E, r_e, γ̄_E) = Σ_{j=0}^{N_E−1} ((2^{r_e}−1)/γ̄_E)^j / j!, with 0⁰ = 1.
pub fn f_term(n_e: u32, r_e: f64, gamma_bar_e: Snr) -> f64 {
    let x = exp2_m1(r_e) / gamma_bar_e.value();
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 1..n_e {
        term *= x / j as f64;
        sum += term;
    }
    sum
}

/// G(N_E, r_e, γ̄_E) = (2^{r_e} ln2 / (γ̄_E (N_E−1)!)) ((2^{r_e}−1)/γ̄_E)^{N_E−1}.
pub fn g_term(n_e: u32, r_e: f64, gamma_bar_e: Snr) -> f64 {
    let gamma_e = gamma_bar_e.value();
    let x = exp2_m1(r_e) / gamma_e;
    r_e.exp2() * LN_2 / (gamma_e * factorial(n_e - 1)) * x.powi(n_e as i32 - 1)
}

/// D = F_{γE}(2^{r_e} − 1), evaluated through the regularized incomplete
/// gamma so small arguments keep relative accuracy.
pub fn d_term(n_e: u32, r_e: f64, gamma_bar_e: Snr) -> f64 {
    let x = exp2_m1(r_e) / gamma_bar_e.value();
    regularized_lower_gamma(n_e as f64, x).expect("integer-shape incomplete gamma converges")
}

/// E = G e^{−(2^{r_e}−1)/γ̄_E} = dD/dr_e, the density of Eve's capacity at
/// the redundancy rate.
pub fn e_term(n_e: u32, r_e: f64, gamma_bar_e: Snr) -> f64 {
    let gamma_e = gamma_bar_e.value();
    let x = exp2_m1(r_e) / gamma_e;
    r_e.exp2() * LN_2 / gamma_e * poisson_pmf(n_e - 1, x)
}

/// Analytic gradient (∂Ψ_f/∂r_b, ∂Ψ_f/∂r_e) on the open feasible set.
pub fn est_fixed_gradient(r: RatePair, p: ChannelParams) -> Result<(f64, f64), EstError> {
    if r.r_e() <= 0.0 {
        return Err(EstError::domain("gradient requires 0 < r_e < r_b"));
    }
    Ok(gradient_unchecked(r.r_b(), r.r_e(), p))
}

fn gradient_unchecked(r_b: f64, r_e: f64, p: ChannelParams) -> (f64, f64) {
    let gamma_b = p.gamma_bar_b().value();
    let gap = r_b - r_e;
    let survive_b = (-exp2_m1(r_b) / gamma_b).exp();
    let q_b = r_b.exp2() * LN_2 / gamma_b;
    let d = d_term(p.n_e(), r_e, p.gamma_bar_e());
    let e = e_term(p.n_e(), r_e, p.gamma_bar_e());
    let d_rb = d * survive_b * (1.0 - gap * q_b);
    let d_re = survive_b * (gap * e - d);
    (d_rb, d_re)
}

/// Closed-form Hessian of Ψ_f at a feasible rate pair.
///
/// r_e = 0 is rejected for N_E > 1 (the C entry divides by 2^{r_e} − 1);
/// interior points near zero are evaluated through the folded form and
/// stay finite.
pub fn hessian_fixed(r: RatePair, p: ChannelParams) -> Result<HessianReport, EstError> {
    if r.r_e() <= 0.0 {
        return Err(EstError::domain(
            "hessian requires 0 < r_e < r_b (C entry divides by 2^{r_e} - 1)",
        ));
    }
    Ok(hessian_unchecked(r.r_b(), r.r_e(), p))
}

fn hessian_unchecked(r_b: f64, r_e: f64, p: ChannelParams) -> HessianReport {
    let gamma_b = p.gamma_bar_b().value();
    let gamma_e = p.gamma_bar_e().value();
    let n = p.n_e();
    let gap = r_b - r_e;
    let survive_b = (-exp2_m1(r_b) / gamma_b).exp();
    let q_b = r_b.exp2() * LN_2 / gamma_b;
    let q_e = r_e.exp2() * LN_2 / gamma_e;
    let x = exp2_m1(r_e) / gamma_e;
    let d = d_term(n, r_e, p.gamma_bar_e());
    let e = e_term(n, r_e, p.gamma_bar_e());

    let a = -q_b * survive_b * d * (2.0 + LN_2 * gap * (1.0 - r_b.exp2() / gamma_b));
    let b = q_b * survive_b * d + survive_b * (1.0 - gap * q_b) * e;
    let mut c = survive_b * (-2.0 * e + gap * e * (LN_2 - q_e));
    if n > 1 {
        // gap (N−1) E 2^{r_e} ln2/(2^{r_e}−1) = gap q_e² e^{−x} x^{N−2}/(N−2)!
        c += survive_b * gap * q_e * q_e * poisson_pmf(n - 2, x);
    }
    HessianReport::from_entries(a, b, c)
}

// ---------------------------------------------------------------------------
// Stationary-pair solver
// ---------------------------------------------------------------------------

/// Solves t − γ̄_B/(2^t ln2) = r_e for t. The left side is strictly
/// increasing, so the root is unique; this is the R_B first-order condition.
fn bob_rate_for(r_e: f64, gamma_bar_b: f64) -> f64 {
    let pull = gamma_bar_b / LN_2;
    let f = |t: f64| t - pull * (-t).exp2() - r_e;
    let df = |t: f64| 1.0 + gamma_bar_b * (-t).exp2();
    let hi = r_e + pull * (-r_e).exp2();
    newton_bisect(f, df, r_e, hi, 1e-15 * hi.max(1.0))
}

/// (e^x − F)/G of the R_E condition, computed as D/E so both tails keep
/// relative accuracy (e^x − F cancels for small x and overflows for large).
fn eve_ratio(r_e: f64, gamma_bar_e: Snr, n_e: u32) -> f64 {
    d_term(n_e, r_e, gamma_bar_e) / e_term(n_e, r_e, gamma_bar_e)
}

/// Solves r + (e^x − F)/G = r_b for r in (0, r_b); the root exists because
/// the left side is below r_b at 0+ and above it at r_b.
fn eve_rate_for(r_b: f64, gamma_bar_e: Snr, n_e: u32) -> f64 {
    let h = |r: f64| {
        let ratio = eve_ratio(r, gamma_bar_e, n_e);
        if ratio.is_finite() {
            r + ratio - r_b
        } else {
            f64::INFINITY
        }
    };
    if h(r_b - EDGE) <= 0.0 {
        return r_b - EDGE;
    }
    if h(EDGE) >= 0.0 {
        return EDGE;
    }
    bisect(h, EDGE, r_b - EDGE)
}

fn degenerate_pair_report() -> SolverReport {
    SolverReport {
        r_b: 0.0,
        r_e: 0.0,
        est: 0.0,
        residual: 0.0,
        iterations: 0,
        second_order: f64::NAN,
        classification: Classification::Inconclusive,
        hessian: None,
        sign_changes: None,
    }
}

/// Locates the stationary rate pair (R_B*, R_E*) of Ψ_f.
///
/// Alternates the two first-order conditions starting from R_E = 0 (each
/// half-step solves its monotone scalar equation), with damping and
/// projection keeping 0 < R_E < R_B; a Newton polish on the analytic
/// gradient with the closed-form Hessian then drives the first-order
/// residual to the configured tolerance. If the alternation stalls, a
/// coarse 256×256 grid over (0, log2(1 + 20 γ̄_B))² restarts it from the
/// best cell.
pub fn solve_rate_pair(p: ChannelParams, cfg: SolverConfig) -> Result<SolverReport, EstError> {
    cfg.validate()?;
    let gamma_b = p.gamma_bar_b().value();

    let mut r_e = 0.0_f64;
    let mut r_b = bob_rate_for(r_e, gamma_b);
    if r_b <= 3.0 * EDGE {
        return Ok(degenerate_pair_report());
    }

    let mut iterations = 0_u32;
    for _ in 0..cfg.max_iter {
        iterations += 1;
        let r_b_new = bob_rate_for(r_e, gamma_b);
        let raw = eve_rate_for(r_b_new, p.gamma_bar_e(), p.n_e());
        let r_e_new =
            ((1.0 - cfg.damping) * r_e + cfg.damping * raw).clamp(EDGE, r_b_new - EDGE);
        let delta = (r_b_new - r_b).abs().max((r_e_new - r_e).abs());
        r_b = r_b_new;
        r_e = r_e_new;
        if delta < cfg.tolerance.max(1e-13) {
            break;
        }
    }

    let (r_b0, r_e0) = (r_b, r_e);
    let (mut r_b, mut r_e, mut residual) = polish_pair(r_b, r_e, p);

    if !(residual < cfg.tolerance) {
        // Grid restart over a data-driven bound on the codeword rate.
        let r_max = (1.0 + 20.0 * gamma_b).log2();
        let mut best = (r_b0, r_e0, f64::NEG_INFINITY);
        for i in 1..=256 {
            let gb = r_max * i as f64 / 256.0;
            for j in 1..256 {
                let ge = gb * j as f64 / 256.0;
                let pair = RatePair::new(gb, ge).expect("grid cell is feasible");
                let val = est_fixed(pair, p).unwrap_or(f64::NEG_INFINITY);
                if val > best.2 {
                    best = (gb, ge, val);
                }
            }
        }
        let mut gb = best.0;
        let mut ge = best.1;
        for _ in 0..cfg.max_iter {
            iterations += 1;
            let gb_new = bob_rate_for(ge, gamma_b);
            let raw = eve_rate_for(gb_new, p.gamma_bar_e(), p.n_e());
            let ge_new = ((1.0 - cfg.damping) * ge + cfg.damping * raw).clamp(EDGE, gb_new - EDGE);
            let delta = (gb_new - gb).abs().max((ge_new - ge).abs());
            gb = gb_new;
            ge = ge_new;
            if delta < cfg.tolerance.max(1e-13) {
                break;
            }
        }
        let polished = polish_pair(gb, ge, p);
        if polished.2 < residual {
            (r_b, r_e, residual) = polished;
        }
        if !(residual < cfg.tolerance) {
            return Err(EstError::NotConverged {
                what: "fixed-rate stationary pair",
                best_r_b: r_b,
                best_r_e: r_e,
                residual,
            });
        }
    }

    if !(r_e > 0.0 && r_e < r_b) {
        return Err(EstError::Infeasible { r_b, r_e });
    }
    let pair = RatePair::new(r_b, r_e).expect("solution is feasible");
    let hessian = hessian_unchecked(r_b, r_e, p);
    Ok(SolverReport {
        r_b,
        r_e,
        est: est_fixed(pair, p)?,
        residual,
        iterations,
        second_order: hessian.det,
        classification: hessian.classification,
        hessian: Some(hessian),
        sign_changes: None,
    })
}

/// Damped Newton iteration on the gradient; returns the refined pair and
/// the achieved sup-norm of the gradient.
fn polish_pair(mut r_b: f64, mut r_e: f64, p: ChannelParams) -> (f64, f64, f64) {
    let norm = |rb: f64, re: f64| {
        let (gb, ge) = gradient_unchecked(rb, re, p);
        gb.abs().max(ge.abs())
    };
    let mut res = norm(r_b, r_e);
    for _ in 0..40 {
        if res == 0.0 {
            break;
        }
        let h = hessian_unchecked(r_b, r_e, p);
        let det = h.det;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let (gb, ge) = gradient_unchecked(r_b, r_e, p);
        // Newton step: H δ = −g
        let db = -(h.c * gb - h.b * ge) / det;
        let de = -(h.a * ge - h.b * gb) / det;
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..20 {
            let nb = r_b + step * db;
            let ne = r_e + step * de;
            if ne > EDGE && nb > ne + EDGE {
                let nres = norm(nb, ne);
                if nres < res {
                    r_b = nb;
                    r_e = ne;
                    res = nres;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (r_b, r_e, res)
}

// ---------------------------------------------------------------------------
// Asymptotics
// ---------------------------------------------------------------------------

/// γ̄_E → 0 limit: R_B* solves R_B = γ̄_B/(2^{R_B} ln2) and R_E* = 0.
pub fn asymptotic_rate_pair_low_eve_snr(
    gamma_bar_b: Snr,
    cfg: SolverConfig,
) -> Result<RatePair, EstError> {
    cfg.validate()?;
    if gamma_bar_b.value() <= 0.0 {
        return Err(EstError::domain("asymptote requires gamma_bar_b > 0"));
    }
    let r_b = bob_rate_for(0.0, gamma_bar_b.value());
    let residual = (r_b - gamma_bar_b.value() / (r_b.exp2() * LN_2)).abs();
    if residual > cfg.tolerance {
        return Err(EstError::NotConverged {
            what: "low-eavesdropper-SNR codeword-rate asymptote",
            best_r_b: r_b,
            best_r_e: 0.0,
            residual,
        });
    }
    RatePair::new(r_b, 0.0)
}

/// γ̄_E → ∞ limit: solves the eavesdropper-independent system
/// R_B = R_E + (2^{R_E}−1)/(2^{R_E} ln2), R_E = R_B − γ̄_B/(2^{R_B} ln2).
pub fn asymptotic_rate_pair_high_eve_snr(
    gamma_bar_b: Snr,
    cfg: SolverConfig,
) -> Result<RatePair, EstError> {
    cfg.validate()?;
    let gamma_b = gamma_bar_b.value();
    if gamma_b <= 0.0 {
        return Err(EstError::domain("asymptote requires gamma_bar_b > 0"));
    }
    // substitute the R_B equation into the R_E equation:
    // (1 − 2^{−r_e})/ln2 = γ̄_B/(2^{r_b(r_e)} ln2), increasing left side,
    // decreasing right side, so the root is unique.
    let r_b_of = |r_e: f64| r_e - exp2_m1(-r_e) / LN_2;
    let h = |r_e: f64| -exp2_m1(-r_e) / LN_2 - gamma_b / (r_b_of(r_e).exp2() * LN_2);
    let mut hi = 1.0_f64;
    while h(hi) < 0.0 && hi < 1e6 {
        hi *= 2.0;
    }
    let r_e = bisect(h, 1e-12, hi);
    let r_b = r_b_of(r_e);
    let residual = h(r_e)
        .abs()
        .max((r_e - (r_b - gamma_b / (r_b.exp2() * LN_2))).abs());
    if residual > cfg.tolerance {
        return Err(EstError::NotConverged {
            what: "high-eavesdropper-SNR rate-pair asymptote",
            best_r_b: r_b,
            best_r_e: r_e,
            residual,
        });
    }
    if !(r_e > 0.0 && r_e < r_b) {
        return Err(EstError::Infeasible { r_b, r_e });
    }
    RatePair::new(r_b, r_e)
}

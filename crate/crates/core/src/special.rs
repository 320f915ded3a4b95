//! Special functions and SNR-distribution CDFs backing the closed forms.
//!
//! The eavesdropper combines her antennas with MRC, so her output SNR is
//! Erlang (integer-shape Gamma) distributed; the main-channel SNR is
//! exponential. Both CDFs live here, together with the lower incomplete
//! gamma function needed by the annulus-averaged throughput expressions.
//!
//! All functions are pure and target 1e-12 absolute accuracy so that the
//! downstream solvers can certify 1e-8 first-order residuals.

use crate::error::EstError;
use serde::{Deserialize, Serialize};

/// Iteration cap for the incomplete-gamma series / continued fraction.
const MAX_ITER: usize = 500;

// ---------------------------------------------------------------------------
// Domain newtypes
// ---------------------------------------------------------------------------

/// Linear-scale signal-to-noise ratio (dimensionless power ratio, >= 0).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Snr(f64);

impl Snr {
    /// Wraps a linear SNR value. Rejects negative or non-finite input.
    pub fn new(value: f64) -> Result<Self, EstError> {
        if !value.is_finite() || value < 0.0 {
            return Err(EstError::domain(format!(
                "SNR must be finite and nonnegative, got {value}"
            )));
        }
        Ok(Snr(value))
    }

    /// Converts from decibels: linear = 10^(dB/10).
    pub fn from_db(db: f64) -> Self {
        Snr(10.0_f64.powf(db / 10.0))
    }

    /// Linear value.
    pub fn value(self) -> f64 {
        self.0
    }

    /// Converts to decibels: dB = 10 log10(linear). Requires a positive value.
    pub fn to_db(self) -> f64 {
        10.0 * self.0.log10()
    }
}

/// A probability, guaranteed to lie in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Probability(f64);

impl Probability {
    pub const ZERO: Probability = Probability(0.0);
    pub const ONE: Probability = Probability(1.0);

    pub fn new(value: f64) -> Result<Self, EstError> {
        if !value.is_finite() || !(0.0..=1.0).contains(&value) {
            return Err(EstError::domain(format!(
                "probability must lie in [0, 1], got {value}"
            )));
        }
        Ok(Probability(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// 1 - p.
    pub fn complement(self) -> Probability {
        Probability(1.0 - self.0)
    }

    /// Clamps into [0, 1]; used where roundoff may leave a value at
    /// -1e-17 or 1 + 1e-17.
    pub(crate) fn clamped(value: f64) -> Probability {
        Probability(value.clamp(0.0, 1.0))
    }
}

// ---------------------------------------------------------------------------
// Gamma functions
// ---------------------------------------------------------------------------

/// Lanczos coefficients, g = 7, n = 9 (Godfrey / Boost / CPython).
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function, ln Γ(x), for x > 0.
///
/// Lanczos approximation with reflection for x < 0.5; relative accuracy
/// is a few ulps over the range used here.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection: Γ(x) Γ(1-x) = π / sin(πx)
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut sum = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let base = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * base.ln() - base + sum.ln()
}

/// Regularized lower incomplete gamma function P(v, x) = γ(v, x) / Γ(v).
///
/// Series expansion for x < v + 1, Lentz continued fraction for the upper
/// tail otherwise; both sides are relative-accurate, which the solvers rely
/// on for small arguments where 1 - e^{-x} Σ would cancel.
pub fn regularized_lower_gamma(v: f64, x: f64) -> Result<f64, EstError> {
    if !(v > 0.0) || !(x >= 0.0) {
        return Err(EstError::domain(format!(
            "incomplete gamma requires v > 0 and x >= 0, got v={v}, x={x}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let log_prefactor = v * x.ln() - x - ln_gamma(v);
    if x < v + 1.0 {
        series_p(v, x, log_prefactor)
    } else {
        cf_q(v, x, log_prefactor).map(|q| 1.0 - q)
    }
}

/// Lower incomplete gamma function γ(v, x) = ∫₀ˣ t^{v−1} e^{−t} dt.
///
/// Nondecreasing in x, with γ(v, x) → Γ(v) as x → ∞.
pub fn lower_incomplete_gamma(v: f64, x: f64) -> Result<f64, EstError> {
    let p = regularized_lower_gamma(v, x)?;
    Ok(p * ln_gamma(v).exp())
}

/// Series for P(v, x): prefactor · Σ_{n≥0} x^n / (v (v+1) ... (v+n)).
fn series_p(v: f64, x: f64, log_prefactor: f64) -> Result<f64, EstError> {
    let mut term = 1.0 / v;
    let mut sum = term;
    let mut vn = v;
    for _ in 0..MAX_ITER {
        vn += 1.0;
        term *= x / vn;
        sum += term;
        if term.abs() < sum.abs() * f64::EPSILON {
            return Ok((log_prefactor + sum.ln()).exp().min(1.0));
        }
    }
    Err(EstError::NotConverged {
        what: "incomplete gamma series",
        best_r_b: v,
        best_r_e: x,
        residual: term,
    })
}

/// Modified Lentz continued fraction for Q(v, x) = 1 - P(v, x).
fn cf_q(v: f64, x: f64, log_prefactor: f64) -> Result<f64, EstError> {
    const TINY: f64 = 1e-300;
    let b0 = x + 1.0 - v;
    let mut f = if b0.abs() < TINY { TINY } else { b0 };
    let mut c = f;
    let mut d = 0.0_f64;
    for n in 1..=MAX_ITER {
        let nf = n as f64;
        let an = nf * (v - nf);
        let bn = x + 2.0 * nf + 1.0 - v;
        d = bn + an * d;
        if d.abs() < TINY {
            d = TINY;
        }
        d = 1.0 / d;
        c = bn + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < f64::EPSILON {
            return Ok((log_prefactor - f.ln()).exp());
        }
    }
    Err(EstError::NotConverged {
        what: "incomplete gamma continued fraction",
        best_r_b: v,
        best_r_e: x,
        residual: f,
    })
}

// ---------------------------------------------------------------------------
// SNR-distribution CDFs
// ---------------------------------------------------------------------------

/// CDF of the eavesdropper's MRC output SNR, Gamma with integer shape `n_e`
/// and scale `scale`:
///
/// F(x) = 1 − e^{−x/s} Σ_{j=0}^{n_e−1} (x/s)^j / j!
///
/// The sum is accumulated with the forward recurrence
/// term_{j+1} = term_j · (x/s)/(j+1), seeded with e^{−x/s}, so no factorial
/// or power can overflow.
pub fn gamma_snr_cdf(x: Snr, n_e: u32, scale: Snr) -> Result<Probability, EstError> {
    if scale.value() <= 0.0 {
        return Err(EstError::domain(format!(
            "gamma scale must be positive, got {}",
            scale.value()
        )));
    }
    if n_e == 0 {
        return Err(EstError::domain("antenna count n_e must be >= 1"));
    }
    let z = x.value() / scale.value();
    let mut term = (-z).exp();
    let mut survival = term;
    for j in 1..n_e {
        term *= z / j as f64;
        survival += term;
    }
    Ok(Probability::clamped(1.0 - survival))
}

/// CDF of the exponentially distributed main-channel SNR:
/// F(x) = 1 − e^{−x/mean}.
pub fn exp_snr_cdf(x: Snr, mean: Snr) -> Result<Probability, EstError> {
    if mean.value() <= 0.0 {
        return Err(EstError::domain(format!(
            "exponential mean must be positive, got {}",
            mean.value()
        )));
    }
    Ok(Probability::clamped(-(-x.value() / mean.value()).exp_m1()))
}

/// n! as f64 (n is an antenna count, so well below overflow).
pub(crate) fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// 2^r − 1 without cancellation for small r (the plain exp2(r) − 1.0 loses
/// half the mantissa near r = 0, which the solvers' residuals can see).
pub(crate) fn exp2_m1(r: f64) -> f64 {
    (r * std::f64::consts::LN_2).exp_m1()
}

/// Poisson probability mass e^{−x} x^k / k!, with the 0⁰ = 1 convention.
///
/// Evaluated in log space so neither the power nor the exponential can
/// overflow on its own.
pub(crate) fn poisson_pmf(k: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if k == 0 {
        return (-x).exp();
    }
    let ln_p = -x + k as f64 * x.ln() - ln_gamma(k as f64 + 1.0);
    if ln_p < -745.0 {
        0.0
    } else {
        ln_p.exp()
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

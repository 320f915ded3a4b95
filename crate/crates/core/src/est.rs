//! Shared domain types and the effective secrecy throughput definition.
//!
//! The EST of a wiretap code with rates (R_B, R_E) is
//!
//! Ψ = (R_B − R_E) · (1 − O_r) · (1 − O_s)
//!
//! i.e. the secrecy rate weighted by the probability that neither a
//! reliability outage (Bob cannot decode) nor a secrecy outage (Eve's
//! capacity exceeds the redundancy) occurs. Rates are bits per channel
//! use throughout; dB ↔ linear SNR conversion happens only at the CLI
//! boundary.

use crate::error::EstError;
use crate::special::{Probability, Snr};
use serde::{Deserialize, Serialize};

/// Statistical environment of the wiretap channel: average SNRs and the
/// eavesdropper's antenna count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    gamma_bar_b: Snr,
    gamma_bar_e: Snr,
    n_e: u32,
}

impl ChannelParams {
    /// `gamma_bar_b` is the mean main-channel SNR, `gamma_bar_e` the
    /// per-antenna mean eavesdropper SNR (the Gamma scale), `n_e` the
    /// antenna count. All must be positive.
    pub fn new(gamma_bar_b: Snr, gamma_bar_e: Snr, n_e: u32) -> Result<Self, EstError> {
        if gamma_bar_b.value() <= 0.0 {
            return Err(EstError::domain("gamma_bar_b must be positive"));
        }
        if gamma_bar_e.value() <= 0.0 {
            return Err(EstError::domain("gamma_bar_e must be positive"));
        }
        if n_e == 0 {
            return Err(EstError::domain("n_e must be >= 1"));
        }
        Ok(ChannelParams {
            gamma_bar_b,
            gamma_bar_e,
            n_e,
        })
    }

    pub fn gamma_bar_b(&self) -> Snr {
        self.gamma_bar_b
    }

    pub fn gamma_bar_e(&self) -> Snr {
        self.gamma_bar_e
    }

    pub fn n_e(&self) -> u32 {
        self.n_e
    }
}

/// Codeword rate R_B and redundancy rate R_E (bits/channel use), with
/// 0 <= R_E < R_B so the derived secrecy rate R_s = R_B − R_E is positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePair {
    r_b: f64,
    r_e: f64,
}

impl RatePair {
    pub fn new(r_b: f64, r_e: f64) -> Result<Self, EstError> {
        if !r_b.is_finite() || !r_e.is_finite() || r_e < 0.0 || r_e >= r_b {
            return Err(EstError::domain(format!(
                "rate pair requires 0 <= r_e < r_b, got r_b={r_b}, r_e={r_e}"
            )));
        }
        Ok(RatePair { r_b, r_e })
    }

    pub fn r_b(&self) -> f64 {
        self.r_b
    }

    pub fn r_e(&self) -> f64 {
        self.r_e
    }

    /// Secrecy rate R_s = R_B − R_E.
    pub fn secrecy_rate(&self) -> f64 {
        self.r_b - self.r_e
    }
}

/// Instantaneous main-channel capacity C_B = log2(1 + γ_B), bits/channel use.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CapacityB(f64);

impl CapacityB {
    pub fn new(c_b: f64) -> Result<Self, EstError> {
        if !c_b.is_finite() || c_b < 0.0 {
            return Err(EstError::domain(format!(
                "capacity must be finite and nonnegative, got {c_b}"
            )));
        }
        Ok(CapacityB(c_b))
    }

    /// Capacity of a channel with the realized SNR: log2(1 + γ_B).
    /// Evaluated through ln_1p so vanishing SNRs keep a positive capacity.
    pub fn from_snr(gamma_b: Snr) -> Self {
        CapacityB(gamma_b.value().ln_1p() / std::f64::consts::LN_2)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Effective secrecy throughput for given rates and outage probabilities:
/// (r_b − r_e)(1 − reliability_outage)(1 − secrecy_outage).
///
/// Nonnegative and bounded by the secrecy rate r_b − r_e.
pub fn est(
    r_b: f64,
    r_e: f64,
    reliability_outage: Probability,
    secrecy_outage: Probability,
) -> Result<f64, EstError> {
    if !r_b.is_finite() || !r_e.is_finite() || r_e < 0.0 || r_e >= r_b {
        return Err(EstError::domain(format!(
            "EST requires 0 <= r_e < r_b, got r_b={r_b}, r_e={r_e}"
        )));
    }
    Ok((r_b - r_e) * reliability_outage.complement().value() * secrecy_outage.complement().value())
}

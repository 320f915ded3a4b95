//! Monte Carlo oracle: samples fading realizations (and optionally Eve
//! positions) and estimates outage probabilities and the empirical EST.
//!
//! Each closed form in the crate has a matching simulator here whose
//! estimate must agree within a few standard errors; this is the
//! anti-regression oracle for the whole library.
//!
//! Randomness comes from ChaCha8 keyed by (seed, stream_id): identical
//! configurations reproduce bit-identical estimates, and parallel callers
//! get independent substreams by varying `stream_id` (ChaCha exposes 2^64
//! independent streams per seed).

use crate::annulus::{pathloss_snr, sample_eve_position, AnnulusModel};
use crate::adaptive::AdaptiveScenario;
use crate::error::EstError;
use crate::est::{CapacityB, ChannelParams, RatePair};
use crate::special::{Probability, Snr};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Trial count, seed, and substream of one simulation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub trials: u64,
    pub seed: u64,
    pub stream_id: u64,
}

impl SimulationConfig {
    pub fn new(trials: u64, seed: u64, stream_id: u64) -> Result<Self, EstError> {
        if trials == 0 {
            return Err(EstError::domain("trials must be >= 1"));
        }
        Ok(SimulationConfig {
            trials,
            seed,
            stream_id,
        })
    }

    fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
}

/// One-pass (Welford) accumulator; order-independent up to roundoff and
/// numerically stable for long runs.
#[derive(Debug, Clone, Copy, Default)]
struct RunningStats {
    n: u64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn estimate(&self) -> SimEstimate {
        let std_error = if self.n > 1 {
            (self.m2 / (self.n - 1) as f64 / self.n as f64).sqrt()
        } else {
            0.0
        };
        SimEstimate {
            mean: self.mean,
            std_error,
            trials: self.n,
        }
    }
}

// ---------------------------------------------------------------------------
// Samplers
// ---------------------------------------------------------------------------

/// Exponential main-channel SNR with the given mean, via inverse CDF
/// (−mean · ln(1 − U)), matching the CDF used by the closed forms exactly.
pub fn sample_main_snr<R: Rng + ?Sized>(rng: &mut R, gamma_bar_b: Snr) -> Snr {
    let u: f64 = rng.random();
    Snr::new(-gamma_bar_b.value() * (-u).ln_1p()).expect("exponential draw is nonnegative")
}

/// Eavesdropper MRC output SNR: sum of `n_e` independent exponential draws
/// of mean `gamma_bar_e` (Erlang construction, the MRC output of i.i.d.
/// Rayleigh branches).
pub fn sample_eve_snr<R: Rng + ?Sized>(rng: &mut R, gamma_bar_e: Snr, n_e: u32) -> Snr {
    let mut total = 0.0;
    for _ in 0..n_e {
        let u: f64 = rng.random();
        total += -gamma_bar_e.value() * (-u).ln_1p();
    }
    Snr::new(total).expect("Erlang draw is nonnegative")
}

// ---------------------------------------------------------------------------
// Scheme simulators
// ---------------------------------------------------------------------------

fn adaptive_trial<R: Rng + ?Sized>(rng: &mut R, r_e: f64, s: AdaptiveScenario) -> f64 {
    // R_B = C_B, so reliability outage never occurs
    let gamma_e = sample_eve_snr(rng, s.gamma_bar_e(), s.n_e());
    let c_e = (1.0 + gamma_e.value()).log2();
    if c_e <= r_e {
        s.c_b().value() - r_e
    } else {
        0.0
    }
}

/// Empirical EST of the adaptive scheme: scores (C_B − r_e)·1{C_E ≤ r_e}
/// per fading trial.
pub fn simulate_est_adaptive(
    r_e: f64,
    s: AdaptiveScenario,
    cfg: SimulationConfig,
) -> Result<SimEstimate, EstError> {
    let c_b = s.c_b().value();
    if !r_e.is_finite() || r_e < 0.0 || r_e > c_b {
        return Err(EstError::domain(format!(
            "r_e must lie in [0, C_B] = [0, {c_b}], got {r_e}"
        )));
    }
    let mut rng = cfg.rng();
    let mut stats = RunningStats::default();
    for _ in 0..cfg.trials {
        stats.push(adaptive_trial(&mut rng, r_e, s));
    }
    Ok(stats.estimate())
}

fn fixed_trial<R: Rng + ?Sized>(rng: &mut R, r: RatePair, p: ChannelParams) -> f64 {
    let gamma_b = sample_main_snr(rng, p.gamma_bar_b());
    let gamma_e = sample_eve_snr(rng, p.gamma_bar_e(), p.n_e());
    let c_b = (1.0 + gamma_b.value()).log2();
    let c_e = (1.0 + gamma_e.value()).log2();
    if c_b >= r.r_b() && c_e <= r.r_e() {
        r.secrecy_rate()
    } else {
        0.0
    }
}

/// Empirical EST of the fixed-rate scheme: scores
/// (r_b − r_e)·1{C_B ≥ r_b}·1{C_E ≤ r_e} with independent fading draws.
pub fn simulate_est_fixed(
    r: RatePair,
    p: ChannelParams,
    cfg: SimulationConfig,
) -> Result<SimEstimate, EstError> {
    if r.r_e() <= 0.0 {
        return Err(EstError::domain("simulation requires 0 < r_e < r_b"));
    }
    let mut rng = cfg.rng();
    let mut stats = RunningStats::default();
    for _ in 0..cfg.trials {
        stats.push(fixed_trial(&mut rng, r, p));
    }
    Ok(stats.estimate())
}

/// Scheme selector for the annulus simulator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnnulusScheme {
    /// Adaptive: realized capacity plus redundancy rate.
    Adaptive { c_b: CapacityB, r_e: f64 },
    /// Fixed-rate: rate pair plus the main-channel mean SNR.
    Fixed { rates: RatePair, gamma_bar_b: Snr },
}

/// Two-level simulator for the annulus threat model: each trial draws
/// Eve's position, sets γ̄_E from the path loss, then runs one fading
/// trial of the selected scheme.
pub fn simulate_annulus(
    scheme: AnnulusScheme,
    n_e: u32,
    m: AnnulusModel,
    cfg: SimulationConfig,
) -> Result<SimEstimate, EstError> {
    if n_e == 0 {
        return Err(EstError::domain("n_e must be >= 1"));
    }
    match scheme {
        AnnulusScheme::Adaptive { c_b, r_e } => {
            if !r_e.is_finite() || r_e < 0.0 || r_e > c_b.value() {
                return Err(EstError::domain("r_e must lie in [0, C_B]"));
            }
        }
        AnnulusScheme::Fixed { rates, .. } => {
            if rates.r_e() <= 0.0 {
                return Err(EstError::domain("simulation requires 0 < r_e < r_b"));
            }
        }
    }
    let mut rng = cfg.rng();
    let mut stats = RunningStats::default();
    for _ in 0..cfg.trials {
        let pos = sample_eve_position(&mut rng, m);
        let gamma_bar_e = pathloss_snr(pos.rho, m)?;
        let score = match scheme {
            AnnulusScheme::Adaptive { c_b, r_e } => {
                let gamma_e = sample_eve_snr(&mut rng, gamma_bar_e, n_e);
                let c_e = (1.0 + gamma_e.value()).log2();
                if c_e <= r_e {
                    c_b.value() - r_e
                } else {
                    0.0
                }
            }
            AnnulusScheme::Fixed { rates, gamma_bar_b } => {
                let gamma_b = sample_main_snr(&mut rng, gamma_bar_b);
                let gamma_e = sample_eve_snr(&mut rng, gamma_bar_e, n_e);
                let c_b = (1.0 + gamma_b.value()).log2();
                let c_e = (1.0 + gamma_e.value()).log2();
                if c_b >= rates.r_b() && c_e <= rates.r_e() {
                    rates.secrecy_rate()
                } else {
                    0.0
                }
            }
        };
        stats.push(score);
    }
    Ok(stats.estimate())
}

/// Empirical (reliability, secrecy) outage frequencies for a fixed rate
/// pair: the events {R_B > C_B} and {R_E < C_E}.
pub fn estimate_outage_probabilities(
    r: RatePair,
    p: ChannelParams,
    cfg: SimulationConfig,
) -> Result<(SimEstimate, SimEstimate), EstError> {
    let mut rng = cfg.rng();
    let mut reliability = RunningStats::default();
    let mut secrecy = RunningStats::default();
    for _ in 0..cfg.trials {
        let gamma_b = sample_main_snr(&mut rng, p.gamma_bar_b());
        let gamma_e = sample_eve_snr(&mut rng, p.gamma_bar_e(), p.n_e());
        let c_b = (1.0 + gamma_b.value()).log2();
        let c_e = (1.0 + gamma_e.value()).log2();
        reliability.push(if r.r_b() > c_b { 1.0 } else { 0.0 });
        secrecy.push(if r.r_e() < c_e { 1.0 } else { 0.0 });
    }
    Ok((reliability.estimate(), secrecy.estimate()))
}

/// Probability wrapper for an outage estimate (clamped mean).
pub fn estimate_to_probability(estimate: SimEstimate) -> Probability {
    Probability::clamped(estimate.mean)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(trials: u64, seed: u64) -> SimulationConfig {
        SimulationConfig::new(trials, seed, 0).unwrap()
    }

    fn scenario() -> AdaptiveScenario {
        AdaptiveScenario::new(
            CapacityB::new(101.0_f64.log2()).unwrap(),
            Snr::from_db(5.0),
            3,
        )
        .unwrap()
    }

    #[test]
    fn identical_configs_reproduce_bit_identical_estimates() {
        let a = simulate_est_adaptive(2.0, scenario(), cfg(10_000, 42)).unwrap();
        let b = simulate_est_adaptive(2.0, scenario(), cfg(10_000, 42)).unwrap();
        assert_eq!(a, b);

        let c = simulate_est_adaptive(2.0, scenario(), cfg(10_000, 43)).unwrap();
        assert_ne!(a.mean, c.mean);
    }

    #[test]
    fn distinct_streams_are_independent_draws() {
        let a = SimulationConfig::new(10_000, 42, 0).unwrap();
        let b = SimulationConfig::new(10_000, 42, 1).unwrap();
        let ea = simulate_est_adaptive(2.0, scenario(), a).unwrap();
        let eb = simulate_est_adaptive(2.0, scenario(), b).unwrap();
        assert_ne!(ea.mean, eb.mean);
    }

    #[test]
    fn zero_redundancy_scores_zero_exactly() {
        let est = simulate_est_adaptive(0.0, scenario(), cfg(1_000, 1)).unwrap();
        assert_eq!(est.mean, 0.0);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn single_trial_has_zero_std_error() {
        let est = simulate_est_adaptive(2.0, scenario(), cfg(1, 5)).unwrap();
        assert_eq!(est.std_error, 0.0);
        assert_eq!(est.trials, 1);
    }

    #[test]
    fn huge_codeword_rate_means_certain_reliability_outage() {
        let p = ChannelParams::new(Snr::from_db(15.0), Snr::from_db(5.0), 3).unwrap();
        let r = RatePair::new(50.0, 2.0).unwrap();
        let est = simulate_est_fixed(r, p, cfg(10_000, 9)).unwrap();
        assert_eq!(est.mean, 0.0);
    }

    #[test]
    fn zero_redundancy_makes_secrecy_outage_certain() {
        let p = ChannelParams::new(Snr::from_db(15.0), Snr::from_db(5.0), 3).unwrap();
        let r = RatePair::new(4.0, 0.0).unwrap();
        let (_, secrecy) = estimate_outage_probabilities(r, p, cfg(10_000, 3)).unwrap();
        assert_eq!(secrecy.mean, 1.0);
    }

    #[test]
    fn config_rejects_zero_trials() {
        assert!(SimulationConfig::new(0, 1, 0).is_err());
    }
}

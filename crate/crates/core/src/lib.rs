//! Effective secrecy throughput (EST) of SISOME wiretap channels.
//!
//! A single-antenna transmitter talks to a single-antenna receiver while an
//! `N_E`-antenna eavesdropper listens through independent Rayleigh fading.
//! The EST of a wiretap code with codeword rate R_B and redundancy rate R_E,
//!
//! Ψ = (R_B − R_E)(1 − O_r)(1 − O_s),
//!
//! weighs the secrecy rate by the probability that neither the reliability
//! outage {R_B > C_B} nor the secrecy outage {R_E < C_E} occurs. This crate
//! computes Ψ in closed form, finds locally optimal code rates, and
//! validates every expression against an embedded Monte Carlo oracle.
//!
//! # Modules
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`special`] | incomplete gamma, Erlang/exponential SNR CDFs |
//! | [`est`] | domain types and the EST definition |
//! | [`adaptive`] | R_B = C_B scheme: closed form, derivatives, R_E† solver |
//! | [`fixed`] | fixed (R_B, R_E) scheme: joint solver, Hessian test |
//! | [`annulus`] | absolute-passive threat model and averaged throughputs |
//! | [`sim`] | seeded Monte Carlo estimators for every closed form |
//! | [`solver`] | solver configuration and diagnostic reports |
//! | [`quad`] | Gauss–Legendre quadrature for fading averages |
//!
//! Rates are bits per channel use and SNRs are linear throughout; decibel
//! conversion belongs to the caller (the CLI does it at its boundary).

pub mod adaptive;
pub mod annulus;
pub mod error;
pub mod est;
pub mod fixed;
pub mod quad;
pub mod sim;
pub mod solver;
pub mod special;

pub use adaptive::AdaptiveScenario;
pub use annulus::{AnnulusModel, EvePosition};
pub use error::EstError;
pub use est::{CapacityB, ChannelParams, RatePair};
pub use fixed::HessianReport;
pub use quad::QuadratureConfig;
pub use sim::{AnnulusScheme, SimEstimate, SimulationConfig};
pub use solver::{Classification, SolverConfig, SolverReport};
pub use special::{Probability, Snr};

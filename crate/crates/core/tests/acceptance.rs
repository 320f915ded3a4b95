//! Acceptance suite: every release criterion, one test each, with a
//! printed pass/fail line per criterion (run with `--nocapture` to see
//! them). Tolerances are pinned in the assertions.

mod common;

use common::{adaptive_simpson, central_diff, ks_statistic, mixed_partial, second_central_diff};
use est_opt_core::adaptive::{
    asymptotic_redundancy_rate_high_eve_snr, average_max_est_adaptive, est_adaptive,
    est_adaptive_derivative, est_adaptive_second_derivative, solve_redundancy_rate,
    AdaptiveScenario,
};
use est_opt_core::annulus::{
    avg_est_adaptive_annulus, avg_est_fixed_annulus, optimize_annulus_adaptive,
    optimize_annulus_fixed, pathloss_snr, sample_eve_position, AnnulusModel,
};
use est_opt_core::fixed::{
    asymptotic_rate_pair_high_eve_snr, asymptotic_rate_pair_low_eve_snr, d_term, e_term, est_fixed,
    est_fixed_gradient, hessian_fixed, secrecy_outage_fixed, solve_rate_pair,
};
use est_opt_core::sim::{
    simulate_annulus, simulate_est_adaptive, simulate_est_fixed, AnnulusScheme, SimulationConfig,
};
use est_opt_core::solver::SolverConfig;
use est_opt_core::{CapacityB, ChannelParams, RatePair, Snr};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::LN_2;
use std::time::Instant;

macro_rules! check {
    ($cond:expr, $($arg:tt)+) => {
        if !($cond) {
            return Err(format!($($arg)+));
        }
    };
}

fn criterion<F: FnOnce() -> Result<(), String>>(number: u32, label: &str, body: F) {
    match body() {
        Ok(()) => println!("[acceptance] criterion {number} ({label}): PASS"),
        Err(msg) => {
            println!("[acceptance] criterion {number} ({label}): FAIL - {msg}");
            panic!("criterion {number} ({label}) failed: {msg}");
        }
    }
}

fn scenario(c_b: f64, gamma_e: f64, n_e: u32) -> AdaptiveScenario {
    AdaptiveScenario::new(
        CapacityB::new(c_b).unwrap(),
        Snr::new(gamma_e).unwrap(),
        n_e,
    )
    .unwrap()
}

fn params(gamma_b: f64, gamma_e: f64, n_e: u32) -> ChannelParams {
    ChannelParams::new(Snr::new(gamma_b).unwrap(), Snr::new(gamma_e).unwrap(), n_e).unwrap()
}

#[test]
fn criterion_1_adaptive_closed_form_vs_monte_carlo() {
    criterion(1, "adaptive EST vs Monte Carlo", || {
        let start = Instant::now();
        let c_b = CapacityB::from_snr(Snr::from_db(20.0));
        let mut stream = 0_u64;
        for gamma_e_db in [0.0, 5.0, 10.0] {
            let s = AdaptiveScenario::new(c_b, Snr::from_db(gamma_e_db), 3).unwrap();
            for k in 1..=20 {
                let r_e = c_b.value() * k as f64 / 21.0;
                let cfg = SimulationConfig::new(1_000_000, 0xAC01, stream).unwrap();
                stream += 1;
                let sim = simulate_est_adaptive(r_e, s, cfg).unwrap();
                let closed = est_adaptive(r_e, s).unwrap();
                // the (c_b − r_e)·3/n term is the Poisson band of cells where
                // no outage event occurs in 10^6 trials (empirical SE = 0
                // even though the true one is not)
                let tol = 3.0 * sim.std_error + (c_b.value() - r_e) * 3.0 / 1e6;
                check!(
                    (sim.mean - closed).abs() <= tol,
                    "γ̄_E={gamma_e_db} dB, r_e={r_e}: sim {} ± {}, closed {closed}",
                    sim.mean,
                    sim.std_error
                );
            }
        }
        let elapsed = start.elapsed().as_secs_f64();
        check!(elapsed <= 60.0, "runtime {elapsed:.1}s exceeds 60s");
        Ok(())
    });
}

#[test]
fn criterion_2_fixed_closed_form_vs_monte_carlo() {
    criterion(2, "fixed-rate EST vs Monte Carlo", || {
        let p = params(10.0_f64.powf(1.5), 10.0_f64.powf(0.5), 3);
        let mut stream = 0_u64;
        for i in 1..=10 {
            let r_b = 0.8 * i as f64;
            for j in 1..=10 {
                let r_e = r_b * j as f64 / 11.0;
                let r = RatePair::new(r_b, r_e).unwrap();
                let cfg = SimulationConfig::new(1_000_000, 0xAC12, stream).unwrap();
                stream += 1;
                let sim = simulate_est_fixed(r, p, cfg).unwrap();
                let closed = est_fixed(r, p).unwrap();
                let tol = 3.0 * sim.std_error + r.secrecy_rate() * 3.0 / 1e6;
                check!(
                    (sim.mean - closed).abs() <= tol,
                    "r=({r_b}, {r_e}): sim {} ± {}, closed {closed}",
                    sim.mean,
                    sim.std_error
                );
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_3_stationarity_certificates() {
    criterion(3, "stationarity certificates on 27-point grid", || {
        let cfg = SolverConfig::default();
        for gamma_b_db in [5.0, 15.0, 25.0] {
            for gamma_e_db in [0.0, 5.0, 10.0] {
                for n_e in [1_u32, 2, 4] {
                    let tag = format!("γ_B={gamma_b_db} dB, γ̄_E={gamma_e_db} dB, N_E={n_e}");
                    let gamma_b = Snr::from_db(gamma_b_db);
                    let gamma_e = Snr::from_db(gamma_e_db);

                    let s = AdaptiveScenario::new(CapacityB::from_snr(gamma_b), gamma_e, n_e)
                        .unwrap();
                    let rep = solve_redundancy_rate(s, cfg)
                        .map_err(|e| format!("adaptive solve failed at {tag}: {e}"))?;
                    let slope = est_adaptive_derivative(rep.r_e, s).unwrap();
                    check!(
                        slope.abs() < 1e-8,
                        "adaptive first-order residual {slope:e} at {tag}"
                    );
                    check!(
                        rep.second_order < 0.0,
                        "adaptive second derivative {} not negative at {tag}",
                        rep.second_order
                    );

                    let p = ChannelParams::new(gamma_b, gamma_e, n_e).unwrap();
                    let rep = solve_rate_pair(p, cfg)
                        .map_err(|e| format!("pair solve failed at {tag}: {e}"))?;
                    let (gb, ge) =
                        est_fixed_gradient(RatePair::new(rep.r_b, rep.r_e).unwrap(), p).unwrap();
                    check!(
                        gb.abs() < 1e-8 && ge.abs() < 1e-8,
                        "pair gradient ({gb:e}, {ge:e}) at {tag}"
                    );
                    let h = rep.hessian.ok_or("missing hessian report")?;
                    check!(
                        h.a < 0.0 && h.det > 0.0,
                        "Hessian test failed at {tag}: a={}, det={}",
                        h.a,
                        h.det
                    );
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_4_grid_oracle_equivalence() {
    criterion(4, "optimizers match exhaustive grid argmax", || {
        let start = Instant::now();
        let cfg = SolverConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(0xAC04);
        for set in 0..5 {
            let gamma_b_db = 5.0 + 20.0 * rng.random::<f64>();
            let gamma_e_db = -5.0 + 15.0 * rng.random::<f64>();
            let n_e = 1 + (rng.random::<f64>() * 4.0) as u32;
            let tag = format!(
                "set {set}: γ_B={gamma_b_db:.2} dB, γ̄_E={gamma_e_db:.2} dB, N_E={n_e}"
            );
            let gamma_b = Snr::from_db(gamma_b_db);
            let gamma_e = Snr::from_db(gamma_e_db);

            // one-dimensional: 10^5-point grid
            let s = AdaptiveScenario::new(CapacityB::from_snr(gamma_b), gamma_e, n_e).unwrap();
            let rep = solve_redundancy_rate(s, cfg).map_err(|e| format!("{tag}: {e}"))?;
            let c_b = s.c_b().value();
            let n = 100_000;
            let spacing = c_b / n as f64;
            let mut best = (0.0, f64::NEG_INFINITY);
            for i in 1..n {
                let r = i as f64 * spacing;
                let val = est_adaptive(r, s).unwrap();
                if val > best.1 {
                    best = (r, val);
                }
            }
            check!(
                (rep.r_e - best.0).abs() <= spacing,
                "{tag}: 1-D solver {} vs grid {} (spacing {spacing})",
                rep.r_e,
                best.0
            );

            // two-dimensional: 2000² grid over (0, 12)²
            let p = ChannelParams::new(gamma_b, gamma_e, n_e).unwrap();
            let rep = solve_rate_pair(p, cfg).map_err(|e| format!("{tag}: {e}"))?;
            let n = 2000;
            let spacing = 12.0 / n as f64;
            let mut best = (0.0, 0.0, f64::NEG_INFINITY);
            for i in 2..=n {
                let r_b = i as f64 * spacing;
                for j in 1..i {
                    let r_e = j as f64 * spacing;
                    let val = est_fixed(RatePair::new(r_b, r_e).unwrap(), p).unwrap();
                    if val > best.2 {
                        best = (r_b, r_e, val);
                    }
                }
            }
            check!(
                (rep.r_b - best.0).abs() <= spacing && (rep.r_e - best.1).abs() <= spacing,
                "{tag}: 2-D solver ({}, {}) vs grid ({}, {})",
                rep.r_b,
                rep.r_e,
                best.0,
                best.1
            );
        }
        let elapsed = start.elapsed().as_secs_f64();
        check!(elapsed <= 300.0, "runtime {elapsed:.1}s exceeds 300s");
        Ok(())
    });
}

#[test]
fn criterion_5_asymptotic_consistency() {
    criterion(5, "asymptotic consistency (vanishing / dominant Eve)", || {
        let cfg = SolverConfig::default();

        // γ̄_E = −40 dB
        let weak = Snr::from_db(-40.0);
        let s = AdaptiveScenario::new(CapacityB::from_snr(Snr::from_db(20.0)), weak, 1).unwrap();
        let rep = solve_redundancy_rate(s, cfg).map_err(|e| e.to_string())?;
        check!(rep.r_e < 0.05, "R_E† = {} not < 0.05 at −40 dB", rep.r_e);

        let anchor_b = Snr::new(2.0 * LN_2).unwrap();
        let pair = solve_rate_pair(
            ChannelParams::new(anchor_b, weak, 1).unwrap(),
            cfg,
        )
        .map_err(|e| e.to_string())?;
        check!(pair.r_e < 0.05, "R_E* = {} not < 0.05 at −40 dB", pair.r_e);
        let remark3 = asymptotic_rate_pair_low_eve_snr(anchor_b, cfg).map_err(|e| e.to_string())?;
        check!(
            (remark3.r_b() - 1.0).abs() < 1e-12,
            "anchor γ̄_B = 2 ln2 should give R_B* = 1, got {}",
            remark3.r_b()
        );
        check!(
            (pair.r_b - remark3.r_b()).abs() < 1e-2,
            "R_B* {} vs Remark-3 root {}",
            pair.r_b,
            remark3.r_b()
        );

        // γ̄_E = 60 dB, N_E = 1
        let strong = Snr::from_db(60.0);
        let c_anchor = CapacityB::new(1.0 + 0.5 / LN_2).unwrap();
        let remark2 =
            asymptotic_redundancy_rate_high_eve_snr(c_anchor, cfg).map_err(|e| e.to_string())?;
        check!(
            (remark2 - 1.0).abs() < 1e-12,
            "anchor C_B = 1 + (1−2^{{−1}})/ln2 should give root 1, got {remark2}"
        );
        let s = AdaptiveScenario::new(c_anchor, strong, 1).unwrap();
        let rep = solve_redundancy_rate(s, cfg).map_err(|e| e.to_string())?;
        check!(
            (rep.r_e - remark2).abs() < 1e-2,
            "exact R_E† {} vs Remark-2 root {remark2}",
            rep.r_e
        );

        let fig5_b = Snr::from_db(5.0);
        let exact = solve_rate_pair(ChannelParams::new(fig5_b, strong, 1).unwrap(), cfg)
            .map_err(|e| e.to_string())?;
        let remark4 = asymptotic_rate_pair_high_eve_snr(fig5_b, cfg).map_err(|e| e.to_string())?;
        check!(
            (exact.r_b - remark4.r_b()).abs() < 1e-2
                && (exact.r_e - remark4.r_e()).abs() < 1e-2,
            "exact ({}, {}) vs Remark-4 ({}, {})",
            exact.r_b,
            exact.r_e,
            remark4.r_b(),
            remark4.r_e()
        );
        Ok(())
    });
}

#[test]
fn criterion_6_annulus_radius_distribution() {
    criterion(6, "squared radius uniform (KS)", || {
        let n = 1_000_000_usize;
        let bound = 1.36 / (n as f64).sqrt();
        for (shape, (rho_i, rho_o)) in [(1.0_f64, 3.0_f64), (2.0, 10.0), (5.0, 20.0)]
            .into_iter()
            .enumerate()
        {
            let m = AnnulusModel::new(rho_i, rho_o, Snr::from_db(30.0), 1.0, 3.0).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(0xAC06 + shape as u64);
            let samples: Vec<f64> = (0..n)
                .map(|_| {
                    let pos = sample_eve_position(&mut rng, m);
                    pos.rho * pos.rho
                })
                .collect();
            let (lo, hi) = (rho_i * rho_i, rho_o * rho_o);
            let d = ks_statistic(&samples, |x| ((x - lo) / (hi - lo)).clamp(0.0, 1.0));
            check!(
                d < bound,
                "shape ({rho_i}, {rho_o}): KS {d} not below {bound}"
            );
        }
        Ok(())
    });
}

#[test]
fn criterion_7_annulus_triple_agreement() {
    criterion(7, "annulus closed form vs quadrature vs Monte Carlo", || {
        let c_b = CapacityB::from_snr(Snr::from_db(20.0));
        let gamma_bar_b = Snr::from_db(20.0);
        let mut stream = 0_u64;
        for (rho_i, rho_o) in [(2.0, 10.0), (5.0, 20.0)] {
            let m = AnnulusModel::new(rho_i, rho_o, Snr::from_db(30.0), 1.0, 3.0).unwrap();
            let tag = format!("(ρ_i, ρ_o) = ({rho_i}, {rho_o})");
            let area = rho_o * rho_o - rho_i * rho_i;

            // adaptive scheme at r_e = 2
            let closed = avg_est_adaptive_annulus(2.0, c_b, 2, m).unwrap();
            let quad = adaptive_simpson(
                &|rho_sq: f64| {
                    let gamma_e = pathloss_snr(rho_sq.sqrt(), m).unwrap();
                    let s = AdaptiveScenario::new(c_b, gamma_e, 2).unwrap();
                    est_adaptive(2.0, s).unwrap()
                },
                rho_i * rho_i,
                rho_o * rho_o,
                1e-12,
            ) / area;
            check!(
                (closed - quad).abs() / quad.abs().max(1e-12) < 1e-8,
                "{tag} adaptive: closed {closed} vs quadrature {quad}"
            );
            let cfg = SimulationConfig::new(1_000_000, 0xAC07, stream).unwrap();
            stream += 1;
            let sim = simulate_annulus(AnnulusScheme::Adaptive { c_b, r_e: 2.0 }, 2, m, cfg)
                .unwrap();
            check!(
                (sim.mean - closed).abs() <= 3.0 * sim.std_error,
                "{tag} adaptive: sim {} ± {} vs closed {closed}",
                sim.mean,
                sim.std_error
            );

            // fixed-rate scheme at (r_b, r_e) = (4, 2)
            let rates = RatePair::new(4.0, 2.0).unwrap();
            let closed = avg_est_fixed_annulus(rates, gamma_bar_b, 2, m).unwrap();
            let quad = adaptive_simpson(
                &|rho_sq: f64| {
                    let gamma_e = pathloss_snr(rho_sq.sqrt(), m).unwrap();
                    let p = ChannelParams::new(gamma_bar_b, gamma_e, 2).unwrap();
                    est_fixed(rates, p).unwrap()
                },
                rho_i * rho_i,
                rho_o * rho_o,
                1e-12,
            ) / area;
            check!(
                (closed - quad).abs() / quad.abs().max(1e-12) < 1e-8,
                "{tag} fixed: closed {closed} vs quadrature {quad}"
            );
            let cfg = SimulationConfig::new(1_000_000, 0xAC07, stream).unwrap();
            stream += 1;
            let sim = simulate_annulus(AnnulusScheme::Fixed { rates, gamma_bar_b }, 2, m, cfg)
                .unwrap();
            check!(
                (sim.mean - closed).abs() <= 3.0 * sim.std_error,
                "{tag} fixed: sim {} ± {} vs closed {closed}",
                sim.mean,
                sim.std_error
            );
        }
        Ok(())
    });
}

#[test]
fn criterion_8_qualitative_figure_reproduction() {
    criterion(8, "qualitative sweep properties", || {
        let cfg = SolverConfig::default();

        // optimal redundancy rate: nondecreasing in γ̄_E and N_E,
        // saturating along the γ_B axis
        for n_e in [2_u32, 4, 8] {
            for gamma_e_db in [2.0, 8.0] {
                let mut rates = Vec::new();
                for gamma_b_db in [0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0] {
                    let s = AdaptiveScenario::new(
                        CapacityB::from_snr(Snr::from_db(gamma_b_db)),
                        Snr::from_db(gamma_e_db),
                        n_e,
                    )
                    .unwrap();
                    rates.push(solve_redundancy_rate(s, cfg).map_err(|e| e.to_string())?.r_e);
                }
                let first_step = rates[1] - rates[0];
                let last_step = rates[6] - rates[5];
                check!(
                    rates.windows(2).all(|w| w[1] >= w[0] - 1e-9),
                    "R_E† not nondecreasing in γ_B at N_E={n_e}, γ̄_E={gamma_e_db} dB: {rates:?}"
                );
                check!(
                    last_step < 0.5 * first_step,
                    "R_E† not saturating in γ_B at N_E={n_e}, γ̄_E={gamma_e_db} dB: steps {first_step} → {last_step}"
                );
            }
        }
        for gamma_e_db in [2.0, 8.0] {
            let mut prev = 0.0_f64;
            for n_e in [2_u32, 4, 8] {
                let s = AdaptiveScenario::new(
                    CapacityB::from_snr(Snr::from_db(20.0)),
                    Snr::from_db(gamma_e_db),
                    n_e,
                )
                .unwrap();
                let r = solve_redundancy_rate(s, cfg).map_err(|e| e.to_string())?.r_e;
                check!(r >= prev - 1e-9, "R_E† fell with N_E at γ̄_E={gamma_e_db} dB");
                prev = r;
            }
        }
        for n_e in [2_u32, 4, 8] {
            let mut prev = 0.0_f64;
            for gamma_e_db in [2.0, 8.0] {
                let s = AdaptiveScenario::new(
                    CapacityB::from_snr(Snr::from_db(20.0)),
                    Snr::from_db(gamma_e_db),
                    n_e,
                )
                .unwrap();
                let r = solve_redundancy_rate(s, cfg).map_err(|e| e.to_string())?.r_e;
                check!(r >= prev - 1e-9, "R_E† fell with γ̄_E at N_E={n_e}");
                prev = r;
            }
        }

        // fixed-rate pair: nondecreasing in γ̄_E with shrinking gap
        let mut prev = (0.0_f64, 0.0_f64, f64::INFINITY);
        for gamma_e_db in [-10.0, -5.0, 0.0, 5.0, 10.0, 15.0] {
            let p = ChannelParams::new(Snr::from_db(5.0), Snr::from_db(gamma_e_db), 1).unwrap();
            let rep = solve_rate_pair(p, cfg).map_err(|e| e.to_string())?;
            let gap = rep.r_b - rep.r_e;
            check!(
                rep.r_b >= prev.0 - 1e-8 && rep.r_e >= prev.1 - 1e-8 && gap <= prev.2 + 1e-8,
                "pair trend broke at γ̄_E={gamma_e_db} dB"
            );
            prev = (rep.r_b, rep.r_e, gap);
        }

        // adaptive dominance with a gap growing in γ̄_B
        for gamma_e_db in [2.0, 8.0] {
            let gamma_e = Snr::from_db(gamma_e_db);
            let mut prev_gap = f64::NEG_INFINITY;
            for gamma_b_db in [0.0, 5.0, 10.0, 15.0, 20.0] {
                let gamma_b = Snr::from_db(gamma_b_db);
                let avg_adaptive = average_max_est_adaptive(
                    gamma_b,
                    gamma_e,
                    2,
                    cfg,
                    est_opt_core::QuadratureConfig::default(),
                )
                .map_err(|e| e.to_string())?;
                let fixed = solve_rate_pair(
                    ChannelParams::new(gamma_b, gamma_e, 2).unwrap(),
                    cfg,
                )
                .map_err(|e| e.to_string())?
                .est;
                check!(
                    avg_adaptive >= fixed - 1e-9,
                    "adaptive average {avg_adaptive} below fixed optimum {fixed} at γ̄_B={gamma_b_db} dB, γ̄_E={gamma_e_db} dB"
                );
                let gap = avg_adaptive - fixed;
                check!(
                    gap >= prev_gap - 1e-9,
                    "adaptive-over-fixed gap shrank at γ̄_B={gamma_b_db} dB, γ̄_E={gamma_e_db} dB"
                );
                prev_gap = gap;
            }
        }

        // annulus optima nondecreasing in both radii
        let c_b = CapacityB::from_snr(Snr::from_db(20.0));
        let gamma_bar_b = Snr::from_db(20.0);
        let mut prev_a = 0.0_f64;
        let mut prev_f = 0.0_f64;
        for rho_i in [2.0, 4.0, 6.0] {
            let m = AnnulusModel::new(rho_i, 20.0, Snr::from_db(30.0), 1.0, 3.0).unwrap();
            let a = optimize_annulus_adaptive(c_b, 2, m, cfg).map_err(|e| e.to_string())?.est;
            let f = optimize_annulus_fixed(gamma_bar_b, 2, m, cfg)
                .map_err(|e| e.to_string())?
                .est;
            check!(a >= prev_a - 1e-9, "Ψ̃*_a fell with ρ_i");
            check!(f >= prev_f - 1e-9, "Ψ̃*_f fell with ρ_i");
            prev_a = a;
            prev_f = f;
        }
        let mut prev_a = 0.0_f64;
        let mut prev_f = 0.0_f64;
        for rho_o in [10.0, 15.0, 20.0] {
            let m = AnnulusModel::new(5.0, rho_o, Snr::from_db(30.0), 1.0, 3.0).unwrap();
            let a = optimize_annulus_adaptive(c_b, 2, m, cfg).map_err(|e| e.to_string())?.est;
            let f = optimize_annulus_fixed(gamma_bar_b, 2, m, cfg)
                .map_err(|e| e.to_string())?
                .est;
            check!(a >= prev_a - 1e-9, "Ψ̃*_a fell with ρ_o");
            check!(f >= prev_f - 1e-9, "Ψ̃*_f fell with ρ_o");
            prev_a = a;
            prev_f = f;
        }
        Ok(())
    });
}

#[test]
fn criterion_9_derivative_correctness() {
    criterion(9, "analytic derivatives vs finite differences", || {
        let mut rng = ChaCha8Rng::seed_from_u64(0xAC09);
        let mut checked = 0;
        while checked < 100 {
            let c_b: f64 = 0.6 + 7.0 * rng.random::<f64>();
            let gamma_b = 10.0_f64.powf(0.2 + 2.0 * rng.random::<f64>());
            let gamma_e = 10.0_f64.powf(-1.0 + 2.0 * rng.random::<f64>());
            let n_e = 1 + (rng.random::<f64>() * 5.0) as u32;
            let r_b: f64 = 0.4 + 7.0 * rng.random::<f64>();
            let r_e_adaptive = c_b * (0.08 + 0.84 * rng.random::<f64>());
            let r_e_fixed = r_b * (0.08 + 0.84 * rng.random::<f64>());

            // adaptive first and second derivative
            let s = scenario(c_b, gamma_e, n_e);
            let d1 = est_adaptive_derivative(r_e_adaptive, s).unwrap();
            let d2 = est_adaptive_second_derivative(r_e_adaptive, s).unwrap();
            let p = params(gamma_b, gamma_e, n_e);
            let pair = RatePair::new(r_b, r_e_fixed).unwrap();
            let (gb, ge) = est_fixed_gradient(pair, p).unwrap();
            let hess = hessian_fixed(pair, p).unwrap();
            // keep the relative comparisons conditioned: all reference
            // magnitudes bounded away from zero
            if d1.abs() < 1e-3
                || d2.abs() < 1e-2
                || gb.abs() < 1e-3
                || ge.abs() < 1e-3
                || hess.a.abs() < 1e-2
                || hess.b.abs() < 1e-2
                || hess.c.abs() < 1e-2
            {
                continue;
            }
            checked += 1;

            let fd1 = central_diff(&|r| est_adaptive(r, s).unwrap(), r_e_adaptive, 1e-6);
            check!(
                (d1 - fd1).abs() / fd1.abs().max(d1.abs()) < 1e-6,
                "adaptive dΨ/dR: {d1} vs {fd1}"
            );
            let fd2 = second_central_diff(&|r| est_adaptive(r, s).unwrap(), r_e_adaptive, 1e-4);
            check!(
                (d2 - fd2).abs() / fd2.abs().max(d2.abs()) < 1e-4,
                "adaptive d²Ψ/dR²: {d2} vs {fd2}"
            );

            let f = |rb: f64, re: f64| est_fixed(RatePair::new(rb, re).unwrap(), p).unwrap();
            let fd_gb = central_diff(&|rb| f(rb, r_e_fixed), r_b, 1e-6);
            let fd_ge = central_diff(&|re| f(r_b, re), r_e_fixed, 1e-6);
            check!(
                (gb - fd_gb).abs() / fd_gb.abs().max(gb.abs()) < 1e-6,
                "∂Ψ_f/∂r_b: {gb} vs {fd_gb}"
            );
            check!(
                (ge - fd_ge).abs() / fd_ge.abs().max(ge.abs()) < 1e-6,
                "∂Ψ_f/∂r_e: {ge} vs {fd_ge}"
            );

            // all five Hessian terms: A, B, C against second differences,
            // D against the survival probability, E against dD/dr_e
            let fd_a = second_central_diff(&|rb| f(rb, r_e_fixed), r_b, 1e-4);
            let fd_c = second_central_diff(&|re| f(r_b, re), r_e_fixed, 1e-4);
            let fd_b = mixed_partial(&f, r_b, r_e_fixed, 1e-4);
            check!(
                (hess.a - fd_a).abs() / fd_a.abs().max(hess.a.abs()) < 1e-4,
                "Hessian A: {} vs {fd_a}",
                hess.a
            );
            check!(
                (hess.b - fd_b).abs() / fd_b.abs().max(hess.b.abs()) < 1e-4,
                "Hessian B: {} vs {fd_b}",
                hess.b
            );
            check!(
                (hess.c - fd_c).abs() / fd_c.abs().max(hess.c.abs()) < 1e-4,
                "Hessian C: {} vs {fd_c}",
                hess.c
            );

            let d_val = d_term(n_e, r_e_fixed, p.gamma_bar_e());
            let survival =
                1.0 - secrecy_outage_fixed(r_e_fixed, p.gamma_bar_e(), n_e).unwrap().value();
            check!(
                (d_val - survival).abs() < 1e-12,
                "D term {d_val} vs survival {survival}"
            );
            let e_val = e_term(n_e, r_e_fixed, p.gamma_bar_e());
            if survival > 1e-4 {
                let fd_e = central_diff(
                    &|re| d_term(n_e, re, p.gamma_bar_e()),
                    r_e_fixed,
                    1e-6,
                );
                check!(
                    (e_val - fd_e).abs() / fd_e.abs().max(e_val.abs()) < 1e-6,
                    "E term {e_val} vs dD/dr {fd_e}"
                );
            }
        }
        Ok(())
    });
}

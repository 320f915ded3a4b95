//! est-opt: effective secrecy throughput of SISOME wiretap channels.
//!
//! Subcommands: `evaluate` (closed-form EST at given rates), `optimize`
//! (locally optimal code rates with solver diagnostics), `sweep`
//! (one-parameter CSV curves), `simulate` (seeded Monte Carlo estimates).
//!
//! Conventions: SNR flags in dB, rates in bits per channel use, radii in
//! the same unit as the reference distance. Exit codes: 0 success,
//! 2 usage, 3 domain error, 4 non-convergence, 1 I/O.

mod compute;
mod records;
mod sweep;

use clap::{Args, Parser, Subcommand};
use compute::{CliError, PointParams, Scheme};
use est_opt_core::adaptive::AdaptiveScenario;
use est_opt_core::sim::{
    simulate_annulus, simulate_est_adaptive, simulate_est_fixed, AnnulusScheme, SimulationConfig,
};
use est_opt_core::{CapacityB, ChannelParams, RatePair, Snr, SolverConfig};
use records::{Row, CSV_HEADER};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "est-opt",
    version,
    about = "Effective secrecy throughput of SISOME wiretap channels: closed forms, rate optimizers, Monte Carlo"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the closed-form EST and outage probabilities at given rates
    Evaluate(EvaluateArgs),
    /// Find locally optimal code rates and print the solver report
    Optimize(OptimizeArgs),
    /// Sweep one parameter and write a CSV curve
    Sweep(SweepArgs),
    /// Estimate the EST by seeded Monte Carlo simulation
    Simulate(SimulateArgs),
}

/// Channel and geometry parameters (SNRs in dB).
#[derive(Args, Debug, Clone, Copy)]
struct ChannelArgs {
    /// Main-channel SNR in dB: the realized γ_B for the adaptive schemes,
    /// the average γ̄_B for the fixed-rate schemes (and for --average)
    #[arg(long = "gamma-b-db", allow_hyphen_values = true)]
    gamma_b_db: Option<f64>,

    /// Average eavesdropper SNR γ̄_E in dB (non-annulus schemes)
    #[arg(long = "gamma-e-db", allow_hyphen_values = true)]
    gamma_e_db: Option<f64>,

    /// Eavesdropper antenna count N_E
    #[arg(long = "ne", default_value_t = 1)]
    ne: u32,

    /// Annulus: reference eavesdropper SNR γ̄_0 in dB at distance rho-r
    #[arg(long = "gamma0-db", allow_hyphen_values = true)]
    gamma0_db: Option<f64>,

    /// Annulus: reference distance ρ_r
    #[arg(long = "rho-r", default_value_t = 1.0)]
    rho_r: f64,

    /// Annulus: path-loss exponent η
    #[arg(long = "eta")]
    eta: Option<f64>,

    /// Annulus: inner radius ρ_i
    #[arg(long = "rho-i")]
    rho_i: Option<f64>,

    /// Annulus: outer radius ρ_o
    #[arg(long = "rho-o")]
    rho_o: Option<f64>,
}

#[derive(Args, Debug, Clone, Copy)]
struct RateArgs {
    /// Codeword rate R_B in bits/channel use (fixed-rate schemes)
    #[arg(long = "rb")]
    r_b: Option<f64>,

    /// Redundancy rate R_E in bits/channel use
    #[arg(long = "re")]
    r_e: Option<f64>,
}

#[derive(Args, Debug, Clone, Copy)]
struct SolverArgs {
    /// Fixed-point / first-order residual target
    #[arg(long, default_value_t = 1e-10)]
    tolerance: f64,

    /// Iteration budget
    #[arg(long = "max-iter", default_value_t = 200)]
    max_iter: u32,

    /// Damping factor in (0, 1]
    #[arg(long, default_value_t = 0.5)]
    damping: f64,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            tolerance: self.tolerance,
            max_iter: self.max_iter,
            damping: self.damping,
        }
    }
}

#[derive(Args, Debug, Clone, Copy)]
struct FormatArgs {
    /// Emit JSON (the default)
    #[arg(long, conflicts_with = "csv")]
    json: bool,

    /// Emit a CSV header plus one row instead of JSON
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long, value_enum)]
    scheme: Scheme,
    #[command(flatten)]
    channel: ChannelArgs,
    #[command(flatten)]
    rates: RateArgs,
    #[command(flatten)]
    format: FormatArgs,
    /// Write to this path instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OptimizeArgs {
    #[arg(long, value_enum)]
    scheme: Scheme,
    #[command(flatten)]
    channel: ChannelArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    format: FormatArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    scheme: Scheme,
    /// Parameter to sweep (SNRs in dB, rates/radii linear)
    #[arg(long, value_enum)]
    param: sweep::SweepParam,
    #[arg(long, allow_hyphen_values = true)]
    start: f64,
    #[arg(long, allow_hyphen_values = true)]
    stop: f64,
    #[arg(long)]
    step: f64,
    /// Average the optimized adaptive EST over main-channel fading
    /// (gamma-b-db is then the mean SNR γ̄_B)
    #[arg(long)]
    average: bool,
    #[command(flatten)]
    channel: ChannelArgs,
    #[command(flatten)]
    rates: RateArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    scheme: Scheme,
    #[command(flatten)]
    channel: ChannelArgs,
    #[command(flatten)]
    rates: RateArgs,
    /// Fading trials
    #[arg(long, default_value_t = 1_000_000)]
    trials: u64,
    /// RNG seed (same seed and stream reproduce bit-identical output)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// RNG substream (independent parallel streams share a seed)
    #[arg(long, default_value_t = 0)]
    stream: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn point_params(channel: &ChannelArgs, rates: Option<&RateArgs>) -> Result<PointParams, CliError> {
    let gamma_b_db = channel
        .gamma_b_db
        .ok_or_else(|| CliError::Usage("--gamma-b-db is required".into()))?;
    Ok(PointParams {
        gamma_b_db,
        gamma_e_db: channel.gamma_e_db,
        ne: channel.ne,
        gamma0_db: channel.gamma0_db,
        rho_r: channel.rho_r,
        eta: channel.eta,
        rho_i: channel.rho_i,
        rho_o: channel.rho_o,
        r_b: rates.and_then(|r| r.r_b),
        r_e: rates.and_then(|r| r.r_e),
    })
}

fn inputs_json(scheme: Scheme, p: &PointParams) -> serde_json::Value {
    let mut map = serde_json::Map::new();
    map.insert("gamma_b_db".into(), p.gamma_b_db.into());
    if !scheme.is_annulus() {
        if let Some(v) = p.gamma_e_db {
            map.insert("gamma_e_db".into(), v.into());
        }
    }
    map.insert("ne".into(), p.ne.into());
    if scheme.is_annulus() {
        if let Some(v) = p.gamma0_db {
            map.insert("gamma0_db".into(), v.into());
        }
        map.insert("rho_r".into(), p.rho_r.into());
        if let Some(v) = p.eta {
            map.insert("eta".into(), v.into());
        }
        if let Some(v) = p.rho_i {
            map.insert("rho_i".into(), v.into());
        }
        if let Some(v) = p.rho_o {
            map.insert("rho_o".into(), v.into());
        }
    }
    if let Some(v) = p.r_b {
        map.insert("r_b".into(), v.into());
    }
    if let Some(v) = p.r_e {
        map.insert("r_e".into(), v.into());
    }
    serde_json::Value::Object(map)
}

fn single_row_csv(row: &Row) -> String {
    format!("{CSV_HEADER}\n{}\n", row.to_csv_line())
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run_evaluate(args: &EvaluateArgs) -> Result<(), CliError> {
    let p = point_params(&args.channel, Some(&args.rates))?;
    let row = compute::evaluate(args.scheme, &p)?;
    let content = if args.format.csv {
        single_row_csv(&row)
    } else {
        let record = serde_json::json!({
            "scheme": args.scheme.as_str(),
            "inputs": inputs_json(args.scheme, &p),
            "est": row.est,
            "rel_outage": row.rel_outage,
            "sec_outage": row.sec_outage,
        });
        format!("{}\n", serde_json::to_string_pretty(&record).expect("serializable"))
    };
    write_output(&args.out, &content)
}

fn run_optimize(args: &OptimizeArgs) -> Result<(), CliError> {
    let p = point_params(&args.channel, None)?;
    let (row, report) = compute::optimize(args.scheme, &p, args.solver.config())?;
    let content = if args.format.csv {
        single_row_csv(&row)
    } else {
        let record = serde_json::json!({
            "scheme": args.scheme.as_str(),
            "inputs": inputs_json(args.scheme, &p),
            "report": report,
            "est": row.est,
            "rel_outage": row.rel_outage,
            "sec_outage": row.sec_outage,
        });
        format!("{}\n", serde_json::to_string_pretty(&record).expect("serializable"))
    };
    write_output(&args.out, &content)
}

fn run_sweep(args: &SweepArgs) -> Result<(), CliError> {
    // the swept parameter needs no binding flag; any placeholder is
    // overwritten per point
    let mut channel = args.channel;
    if matches!(args.param, sweep::SweepParam::GammaBDb) && channel.gamma_b_db.is_none() {
        channel.gamma_b_db = Some(0.0);
    }
    if matches!(args.param, sweep::SweepParam::GammaEDb) && channel.gamma_e_db.is_none() {
        channel.gamma_e_db = Some(0.0);
    }
    if matches!(args.param, sweep::SweepParam::RhoI) && channel.rho_i.is_none() {
        channel.rho_i = Some(1.0);
    }
    if matches!(args.param, sweep::SweepParam::RhoO) && channel.rho_o.is_none() {
        channel.rho_o = Some(f64::MAX);
    }
    let base = point_params(&channel, Some(&args.rates))?;
    let csv = sweep::run(
        args.scheme,
        args.param,
        args.average,
        args.start,
        args.stop,
        args.step,
        &base,
        args.solver.config(),
    )?;
    write_output(&args.out, &csv)
}

fn run_simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let p = point_params(&args.channel, Some(&args.rates))?;
    let cfg = SimulationConfig::new(args.trials, args.seed, args.stream)?;
    if args.trials == 1 {
        eprintln!("warning: a single trial carries no variance information; std_error is reported as 0");
    }
    let estimate = match args.scheme {
        Scheme::Adaptive => {
            let scenario = AdaptiveScenario::new(
                CapacityB::from_snr(Snr::from_db(p.gamma_b_db)),
                Snr::from_db(p.gamma_e_db.ok_or_else(|| {
                    CliError::Usage("--gamma-e-db is required for this scheme".into())
                })?),
                p.ne,
            )?;
            simulate_est_adaptive(p.require_r_e()?, scenario, cfg)?
        }
        Scheme::Fixed => {
            let (r_b, r_e) = p.require_rates()?;
            let channel = ChannelParams::new(
                Snr::from_db(p.gamma_b_db),
                Snr::from_db(p.gamma_e_db.ok_or_else(|| {
                    CliError::Usage("--gamma-e-db is required for this scheme".into())
                })?),
                p.ne,
            )?;
            simulate_est_fixed(RatePair::new(r_b, r_e)?, channel, cfg)?
        }
        Scheme::AnnulusAdaptive => {
            let m = p.annulus()?;
            let c_b = CapacityB::from_snr(Snr::from_db(p.gamma_b_db));
            simulate_annulus(
                AnnulusScheme::Adaptive {
                    c_b,
                    r_e: p.require_r_e()?,
                },
                p.ne,
                m,
                cfg,
            )?
        }
        Scheme::AnnulusFixed => {
            let m = p.annulus()?;
            let (r_b, r_e) = p.require_rates()?;
            simulate_annulus(
                AnnulusScheme::Fixed {
                    rates: RatePair::new(r_b, r_e)?,
                    gamma_bar_b: Snr::from_db(p.gamma_b_db),
                },
                p.ne,
                m,
                cfg,
            )?
        }
    };
    let record = serde_json::json!({
        "scheme": args.scheme.as_str(),
        "inputs": inputs_json(args.scheme, &p),
        "trials": args.trials,
        "seed": args.seed,
        "stream": args.stream,
        "estimate": estimate,
    });
    let content = format!("{}\n", serde_json::to_string_pretty(&record).expect("serializable"));
    write_output(&args.out, &content)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Evaluate(args) => run_evaluate(args),
        Command::Optimize(args) => run_optimize(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Simulate(args) => run_simulate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}

//! Sweep driver: expands a one-parameter grid, computes each point
//! (evaluating at given rates or optimizing, depending on the swept
//! parameter), and assembles the CSV. Points run in parallel, capped by
//! EST_OPT_THREADS; rows are emitted in grid order regardless of
//! completion order.

use crate::compute::{self, CliError, PointParams, Scheme};
use crate::records::{Row, CSV_HEADER};
use est_opt_core::SolverConfig;
use rayon::prelude::*;

/// Which parameter varies along the sweep. SNRs sweep in dB; rates and
/// radii sweep in linear units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepParam {
    GammaBDb,
    GammaEDb,
    Ne,
    RB,
    RE,
    RhoI,
    RhoO,
}

fn apply(param: SweepParam, value: f64, base: &PointParams) -> PointParams {
    let mut p = *base;
    match param {
        SweepParam::GammaBDb => p.gamma_b_db = value,
        SweepParam::GammaEDb => p.gamma_e_db = Some(value),
        SweepParam::Ne => p.ne = value.round() as u32,
        SweepParam::RB => p.r_b = Some(value),
        SweepParam::RE => p.r_e = Some(value),
        SweepParam::RhoI => p.rho_i = Some(value),
        SweepParam::RhoO => p.rho_o = Some(value),
    }
    p
}

fn validate(
    scheme: Scheme,
    param: SweepParam,
    average: bool,
    start: f64,
    stop: f64,
    step: f64,
) -> Result<(), CliError> {
    if !(step > 0.0) || !(start < stop) {
        return Err(CliError::Usage(format!(
            "empty sweep range: start={start}, stop={stop}, step={step} (need step > 0 and start < stop)"
        )));
    }
    match param {
        SweepParam::GammaEDb if scheme.is_annulus() => {
            return Err(CliError::Usage(
                "the annulus schemes have no γ̄_E parameter; sweep rho-i/rho-o instead".into(),
            ));
        }
        SweepParam::RhoI | SweepParam::RhoO if !scheme.is_annulus() => {
            return Err(CliError::Usage(
                "radius sweeps require an annulus scheme".into(),
            ));
        }
        SweepParam::RB if matches!(scheme, Scheme::Adaptive | Scheme::AnnulusAdaptive) => {
            return Err(CliError::Usage(
                "the adaptive schemes fix r_b = C_B; sweep r-e instead".into(),
            ));
        }
        SweepParam::Ne if start < 0.5 => {
            return Err(CliError::Usage("ne sweep values must be >= 1".into()));
        }
        _ => {}
    }
    if average {
        if scheme != Scheme::Adaptive {
            return Err(CliError::Usage(
                "--average applies to the adaptive scheme only".into(),
            ));
        }
        if !matches!(param, SweepParam::GammaBDb | SweepParam::GammaEDb | SweepParam::Ne) {
            return Err(CliError::Usage(
                "--average sweeps channel statistics (gamma-b-db, gamma-e-db, ne)".into(),
            ));
        }
    }
    Ok(())
}

fn grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let mut values = Vec::new();
    let mut k = 0_u64;
    loop {
        let v = start + k as f64 * step;
        if v > stop + 1e-9 * step {
            break;
        }
        values.push(v);
        k += 1;
    }
    values
}

fn point_row(
    scheme: Scheme,
    param: SweepParam,
    average: bool,
    value: f64,
    base: &PointParams,
    cfg: SolverConfig,
) -> Result<Row, CliError> {
    let p = apply(param, value, base);
    let mut row = if average {
        compute::average_adaptive(&p, cfg)?
    } else {
        match param {
            // sweeping a rate: evaluate the closed form at that rate
            SweepParam::RB | SweepParam::RE => compute::evaluate(scheme, &p)?,
            // sweeping channel statistics or geometry: re-optimize
            _ => compute::optimize(scheme, &p, cfg)?.0,
        }
    };
    row.param = Some(value);
    Ok(row)
}

/// Runs the sweep and renders the CSV (header plus one row per grid point).
pub fn run(
    scheme: Scheme,
    param: SweepParam,
    average: bool,
    start: f64,
    stop: f64,
    step: f64,
    base: &PointParams,
    cfg: SolverConfig,
) -> Result<String, CliError> {
    validate(scheme, param, average, start, stop, step)?;
    let values = grid(start, stop, step);

    let compute_all = || {
        values
            .par_iter()
            .map(|&v| point_row(scheme, param, average, v, base, cfg))
            .collect::<Result<Vec<Row>, CliError>>()
    };
    let rows = match std::env::var("EST_OPT_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
    {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
            .map_err(|e| CliError::Io(format!("thread pool: {e}")))?
            .install(compute_all),
        None => compute_all(),
    }?;

    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &rows {
        out.push_str(&row.to_csv_line());
        out.push('\n');
    }
    Ok(out)
}

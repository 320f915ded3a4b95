//! Per-point computations shared by the single-shot subcommands and the
//! sweep driver: build domain objects from CLI-level parameters (SNRs in
//! dB), dispatch to the library, and collect a uniform output row.

use crate::records::Row;
use est_opt_core::adaptive::{
    average_max_est_adaptive, est_adaptive, secrecy_outage_adaptive, solve_redundancy_rate,
    AdaptiveScenario,
};
use est_opt_core::annulus::{
    avg_est_adaptive_annulus, avg_est_fixed_annulus, optimize_annulus_adaptive,
    optimize_annulus_fixed, AnnulusModel,
};
use est_opt_core::fixed::{
    est_fixed, reliability_outage_fixed, secrecy_outage_fixed, solve_rate_pair,
};
use est_opt_core::{
    CapacityB, ChannelParams, EstError, QuadratureConfig, RatePair, Snr, SolverConfig,
    SolverReport,
};

/// Transmission scheme selector (shared by every subcommand).
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Scheme {
    /// R_B = C_B (main-channel capacity known); optimize R_E only
    Adaptive,
    /// both rates fixed from channel statistics
    Fixed,
    /// adaptive scheme averaged over an annulus of eavesdropper positions
    AnnulusAdaptive,
    /// fixed-rate scheme averaged over an annulus of eavesdropper positions
    AnnulusFixed,
}

impl Scheme {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::Adaptive => "adaptive",
            Scheme::Fixed => "fixed",
            Scheme::AnnulusAdaptive => "annulus-adaptive",
            Scheme::AnnulusFixed => "annulus-fixed",
        }
    }

    pub fn is_annulus(&self) -> bool {
        matches!(self, Scheme::AnnulusAdaptive | Scheme::AnnulusFixed)
    }
}

/// CLI-level errors with their exit codes: 2 usage, 3 domain, 4
/// non-convergence, 1 I/O.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
    NotConverged(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 3,
            CliError::NotConverged(_) => 4,
            CliError::Io(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) | CliError::NotConverged(m) | CliError::Io(m) => m,
        }
    }
}

impl From<EstError> for CliError {
    fn from(err: EstError) -> Self {
        match err {
            EstError::Domain(_) => CliError::Domain(err.to_string()),
            _ => CliError::NotConverged(err.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// All point-level inputs in CLI units (SNRs in dB, rates in bits/channel
/// use, radii in the reference-distance unit).
#[derive(Debug, Clone, Copy)]
pub struct PointParams {
    pub gamma_b_db: f64,
    pub gamma_e_db: Option<f64>,
    pub ne: u32,
    pub gamma0_db: Option<f64>,
    pub rho_r: f64,
    pub eta: Option<f64>,
    pub rho_i: Option<f64>,
    pub rho_o: Option<f64>,
    pub r_b: Option<f64>,
    pub r_e: Option<f64>,
}

impl PointParams {
    fn capacity(&self) -> CapacityB {
        CapacityB::from_snr(Snr::from_db(self.gamma_b_db))
    }

    fn gamma_bar_b(&self) -> Snr {
        Snr::from_db(self.gamma_b_db)
    }

    fn gamma_bar_e(&self) -> Result<Snr, CliError> {
        self.gamma_e_db
            .map(Snr::from_db)
            .ok_or_else(|| usage("--gamma-e-db is required for this scheme"))
    }

    fn scenario(&self) -> Result<AdaptiveScenario, CliError> {
        Ok(AdaptiveScenario::new(
            self.capacity(),
            self.gamma_bar_e()?,
            self.ne,
        )?)
    }

    fn channel(&self) -> Result<ChannelParams, CliError> {
        Ok(ChannelParams::new(
            self.gamma_bar_b(),
            self.gamma_bar_e()?,
            self.ne,
        )?)
    }

    pub fn annulus(&self) -> Result<AnnulusModel, CliError> {
        let gamma0 = self
            .gamma0_db
            .ok_or_else(|| usage("--gamma0-db is required for the annulus schemes"))?;
        let eta = self
            .eta
            .ok_or_else(|| usage("--eta is required for the annulus schemes"))?;
        let rho_i = self
            .rho_i
            .ok_or_else(|| usage("--rho-i is required for the annulus schemes"))?;
        let rho_o = self
            .rho_o
            .ok_or_else(|| usage("--rho-o is required for the annulus schemes"))?;
        Ok(AnnulusModel::new(
            rho_i,
            rho_o,
            Snr::from_db(gamma0),
            self.rho_r,
            eta,
        )?)
    }

    pub fn require_r_e(&self) -> Result<f64, CliError> {
        self.r_e.ok_or_else(|| usage("--re is required"))
    }

    pub fn require_rates(&self) -> Result<(f64, f64), CliError> {
        let r_b = self.r_b.ok_or_else(|| usage("--rb is required"))?;
        let r_e = self.require_r_e()?;
        Ok((r_b, r_e))
    }

    fn base_row(&self, scheme: Scheme, est: f64) -> Row {
        Row {
            param: None,
            gamma_b_db: self.gamma_b_db,
            gamma_e_db: if scheme.is_annulus() { None } else { self.gamma_e_db },
            ne: self.ne,
            r_b: None,
            r_e: None,
            est,
            rel_outage: None,
            sec_outage: None,
            residual: None,
            classification: None,
        }
    }
}

fn feasible_pair(r_b: f64, r_e: f64) -> Result<RatePair, CliError> {
    Ok(RatePair::new(r_b, r_e)?)
}

// ---------------------------------------------------------------------------
// Evaluate
// ---------------------------------------------------------------------------

/// Closed-form EST and outage components at explicitly given rates. The
/// r_e = 0 boundary reports the limit (zero throughput, certain secrecy
/// outage) for the fixed-rate schemes.
pub fn evaluate(scheme: Scheme, p: &PointParams) -> Result<Row, CliError> {
    match scheme {
        Scheme::Adaptive => {
            let s = p.scenario()?;
            let r_e = p.require_r_e()?;
            let est = est_adaptive(r_e, s)?;
            let sec = secrecy_outage_adaptive(r_e, s)?.value();
            let mut row = p.base_row(scheme, est);
            row.r_b = Some(s.c_b().value());
            row.r_e = Some(r_e);
            row.rel_outage = Some(0.0);
            row.sec_outage = Some(sec);
            Ok(row)
        }
        Scheme::Fixed => {
            let channel = p.channel()?;
            let (r_b, r_e) = p.require_rates()?;
            let rel = reliability_outage_fixed(r_b, channel.gamma_bar_b())?.value();
            let sec = secrecy_outage_fixed(r_e, channel.gamma_bar_e(), channel.n_e())?.value();
            let est = if r_e == 0.0 {
                0.0
            } else {
                est_fixed(feasible_pair(r_b, r_e)?, channel)?
            };
            let mut row = p.base_row(scheme, est);
            row.r_b = Some(r_b);
            row.r_e = Some(r_e);
            row.rel_outage = Some(rel);
            row.sec_outage = Some(sec);
            Ok(row)
        }
        Scheme::AnnulusAdaptive => {
            let m = p.annulus()?;
            let c_b = p.capacity();
            let r_e = p.require_r_e()?;
            let est = avg_est_adaptive_annulus(r_e, c_b, p.ne, m)?;
            let gap = c_b.value() - r_e;
            let mut row = p.base_row(scheme, est);
            row.r_b = Some(c_b.value());
            row.r_e = Some(r_e);
            row.rel_outage = Some(0.0);
            row.sec_outage = if gap > 0.0 { Some(1.0 - est / gap) } else { None };
            Ok(row)
        }
        Scheme::AnnulusFixed => {
            let m = p.annulus()?;
            let (r_b, r_e) = p.require_rates()?;
            let gamma_bar_b = p.gamma_bar_b();
            let rel = reliability_outage_fixed(r_b, gamma_bar_b)?.value();
            let est = if r_e == 0.0 {
                0.0
            } else {
                avg_est_fixed_annulus(feasible_pair(r_b, r_e)?, gamma_bar_b, p.ne, m)?
            };
            let survive = (r_b - r_e) * (1.0 - rel);
            let mut row = p.base_row(scheme, est);
            row.r_b = Some(r_b);
            row.r_e = Some(r_e);
            row.rel_outage = Some(rel);
            row.sec_outage = if r_e == 0.0 {
                Some(1.0)
            } else if survive > 0.0 {
                Some(1.0 - est / survive)
            } else {
                None
            };
            Ok(row)
        }
    }
}

// ---------------------------------------------------------------------------
// Optimize
// ---------------------------------------------------------------------------

/// Locally optimal code rates plus the solver diagnostics.
pub fn optimize(
    scheme: Scheme,
    p: &PointParams,
    cfg: SolverConfig,
) -> Result<(Row, SolverReport), CliError> {
    let report = match scheme {
        Scheme::Adaptive => solve_redundancy_rate(p.scenario()?, cfg)?,
        Scheme::Fixed => solve_rate_pair(p.channel()?, cfg)?,
        Scheme::AnnulusAdaptive => {
            optimize_annulus_adaptive(p.capacity(), p.ne, p.annulus()?, cfg)?
        }
        Scheme::AnnulusFixed => {
            optimize_annulus_fixed(p.gamma_bar_b(), p.ne, p.annulus()?, cfg)?
        }
    };

    let mut row = p.base_row(scheme, report.est);
    row.r_b = Some(report.r_b);
    row.r_e = Some(report.r_e);
    row.residual = Some(report.residual);
    row.classification = Some(report.classification);
    match scheme {
        Scheme::Adaptive => {
            row.rel_outage = Some(0.0);
            row.sec_outage = Some(
                secrecy_outage_adaptive(report.r_e, p.scenario()?)?.value(),
            );
        }
        Scheme::Fixed => {
            let channel = p.channel()?;
            row.rel_outage =
                Some(reliability_outage_fixed(report.r_b, channel.gamma_bar_b())?.value());
            row.sec_outage = Some(
                secrecy_outage_fixed(report.r_e, channel.gamma_bar_e(), channel.n_e())?.value(),
            );
        }
        Scheme::AnnulusAdaptive => {
            row.rel_outage = Some(0.0);
            let gap = report.r_b - report.r_e;
            row.sec_outage = if gap > 0.0 {
                Some(1.0 - report.est / gap)
            } else {
                None
            };
        }
        Scheme::AnnulusFixed => {
            let rel = reliability_outage_fixed(report.r_b, p.gamma_bar_b())?.value();
            row.rel_outage = Some(rel);
            let survive = (report.r_b - report.r_e) * (1.0 - rel);
            row.sec_outage = if survive > 0.0 {
                Some(1.0 - report.est / survive)
            } else {
                None
            };
        }
    }
    Ok((row, report))
}

/// Fading-averaged optimized adaptive EST (for main-channel-statistics
/// sweeps); here `gamma_b_db` is the average SNR γ̄_B.
pub fn average_adaptive(p: &PointParams, cfg: SolverConfig) -> Result<Row, CliError> {
    let est = average_max_est_adaptive(
        p.gamma_bar_b(),
        p.gamma_bar_e()?,
        p.ne,
        cfg,
        QuadratureConfig::default(),
    )?;
    Ok(p.base_row(Scheme::Adaptive, est))
}

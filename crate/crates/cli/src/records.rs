//! Output records: the CSV row schema shared by all subcommands and the
//! 12-significant-digit float formatting that keeps files regression-diffable.

use est_opt_core::Classification;

pub const CSV_HEADER: &str =
    "param,gamma_b_db,gamma_e_db,ne,r_b,r_e,est,rel_outage,sec_outage,residual,classification";

/// One output row. `None` cells print empty (e.g. no γ̄_E column for the
/// annulus schemes, no residual for plain evaluations).
#[derive(Debug, Clone)]
pub struct Row {
    pub param: Option<f64>,
    pub gamma_b_db: f64,
    pub gamma_e_db: Option<f64>,
    pub ne: u32,
    pub r_b: Option<f64>,
    pub r_e: Option<f64>,
    pub est: f64,
    pub rel_outage: Option<f64>,
    pub sec_outage: Option<f64>,
    pub residual: Option<f64>,
    pub classification: Option<Classification>,
}

/// 12 significant digits, scientific notation.
pub fn fmt_sig(x: f64) -> String {
    format!("{x:.11e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_sig).unwrap_or_default()
}

impl Row {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            fmt_opt(self.param),
            fmt_sig(self.gamma_b_db),
            fmt_opt(self.gamma_e_db),
            self.ne,
            fmt_opt(self.r_b),
            fmt_opt(self.r_e),
            fmt_sig(self.est),
            fmt_opt(self.rel_outage),
            fmt_opt(self.sec_outage),
            fmt_opt(self.residual),
            self.classification
                .map(|c| c.to_string())
                .unwrap_or_default(),
        )
    }
}

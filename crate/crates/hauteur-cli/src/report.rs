//! The machine-readable bound report: a flat TOML record with factored
//! integer strings, exact rational strings and fixed-width decimal renderings.
//! Field order and formatting are stable, so equal inputs produce
//! byte-identical reports.

use hauteur::bigfloat;
use hauteur::exactmath::Factorization;
use hauteur::heightbound::BoundReport;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Scale used when rendering decimal-log views of factored integers.
const LOG_RENDER_BITS: u32 = 96;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    /// Upper bound for the ramification index, factored (e.g. "2^2 * 5").
    pub e_bound: String,
    /// Upper bound for the inertia degree, factored.
    pub f_bound: String,
    /// Decimal log of the inertia bound, 6 significant digits.
    pub log10_f: String,
    pub k: u64,
    pub lambda: u64,
    /// Exact rational, e.g. "27/20".
    pub beta: String,
    /// Natural log of the height lower bound, 15 significant digits.
    pub ln_height_bound: String,
    /// Decimal log of the height lower bound, 6 significant digits.
    pub log10_height_bound: String,
}

impl Report {
    pub fn from_bound(report: &BoundReport) -> Result<Self, CliError> {
        let log10_f = report
            .f_bound
            .log10_interval(LOG_RENDER_BITS)
            .map_err(CliError::from)?
            .decimal(6);
        let scale = report.ln_bound.scale();
        let log10_height = report
            .ln_bound
            .div_pos(&bigfloat::ln10(scale))
            .map_err(CliError::from)?
            .decimal(6);
        Ok(Report {
            e_bound: report.e_bound.to_string(),
            f_bound: report.f_bound.to_string(),
            log10_f,
            k: report.k,
            lambda: report.lambda,
            beta: report.beta.to_string(),
            ln_height_bound: report.ln_bound.decimal(15),
            log10_height_bound: log10_height,
        })
    }

    pub fn render(&self) -> String {
        toml::to_string(self).expect("report serialization cannot fail")
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let report: Report =
            toml::from_str(text).map_err(|e| CliError::Input(format!("bad report: {e}")))?;
        // The factored fields must re-parse to valid factorizations.
        report.e_bound_factored()?;
        report.f_bound_factored()?;
        Ok(report)
    }

    pub fn e_bound_factored(&self) -> Result<Factorization, CliError> {
        self.e_bound.parse().map_err(CliError::from)
    }

    pub fn f_bound_factored(&self) -> Result<Factorization, CliError> {
        self.f_bound.parse().map_err(CliError::from)
    }
}

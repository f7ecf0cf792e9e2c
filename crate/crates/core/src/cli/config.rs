//! Run configuration files.
//!
//! A configuration is a plain-text document of named sections holding
//! `key = value` scalars (TOML syntax). Unknown sections and keys are
//! rejected.
//!
//! ```toml
//! [economy]
//! mode = "isoelastic_normalized"   # or "general_labor_tax"
//! theta = 0.8                      # single trust level (optional if [sweep] given)
//! tau_max = 0.99
//!
//! [utility]
//! family = "log_separable"         # or "power_g" (needs gamma)
//! psi = 0.5
//! eta = 0.0
//! g = 1.0
//!
//! [production]
//! family = "power"
//! tfp = 2.0
//! alpha = 0.5
//!
//! [sweep]                          # optional trust grid, inclusive of stop
//! theta_start = 0.1
//! theta_stop = 0.9
//! theta_step = 0.1
//!
//! [run]                            # optional
//! oracle_step = 1e-4
//! oracle_tolerance = 1e-4
//! tau_points = 50
//! format = "csv"                   # or "json"
//! output = "schedule.csv"
//! ```

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::economy::{build_economy, Economy, EconomyParams, ProductionSpec, TaxMode, UtilitySpec};
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeName {
    IsoelasticNormalized,
    GeneralLaborTax,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UtilityFamily {
    LogSeparable,
    PowerG,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductionFamily {
    Power,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EconomySection {
    pub mode: ModeName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default = "default_tau_max")]
    pub tau_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UtilitySection {
    pub family: UtilityFamily,
    pub psi: f64,
    pub eta: f64,
    pub g: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductionSection {
    pub family: ProductionFamily,
    pub tfp: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub theta_start: f64,
    pub theta_stop: f64,
    pub theta_step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(default = "default_oracle_step")]
    pub oracle_step: f64,
    #[serde(default = "default_oracle_step")]
    pub oracle_tolerance: f64,
    #[serde(default = "default_tau_points")]
    pub tau_points: usize,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            oracle_step: default_oracle_step(),
            oracle_tolerance: default_oracle_step(),
            tau_points: default_tau_points(),
            format: OutputFormat::Csv,
            output: None,
        }
    }
}

fn default_tau_max() -> f64 {
    0.99
}

fn default_oracle_step() -> f64 {
    1e-4
}

fn default_tau_points() -> usize {
    50
}

/// A validated run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub economy: EconomySection,
    pub utility: UtilitySection,
    pub production: ProductionSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub run: RunSection,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    /// Malformed document, unknown key, or wrong value type.
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    /// Well-formed document whose values break a bound.
    Validation { field: String, bound: String },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Parse { line, column, message } => {
                write!(f, "ParseError at line {line}, column {column}: {message}")
            }
            ConfigError::Validation { field, bound } => {
                write!(f, "ValidationError: `{field}` must satisfy {bound}")
            }
        }
    }
}

impl std::error::Error for ConfigError {}

fn validation(field: impl Into<String>, bound: impl Into<String>) -> ConfigError {
    ConfigError::Validation {
        field: field.into(),
        bound: bound.into(),
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let config: RunConfig = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map(|span| line_column(text, span.start)).unwrap_or((0, 0));
        ConfigError::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    config.validate()?;
    Ok(config)
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.len(), |nl| before.len() - nl - 1) + 1;
    (line, column)
}

/// Decimal places kept when generating trust grids; removes the drift of
/// repeated `start + i * step`.
const GRID_DECIMALS: f64 = 1e12;

impl RunConfig {
    /// Serializes back into the document format.
    pub fn to_document(&self) -> String {
        toml::to_string(self).expect("configuration is always serializable")
    }

    /// Re-runs every validation rule; used after command-line overrides.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.utility.family == UtilityFamily::PowerG && self.utility.gamma.is_none() {
            return Err(validation("gamma", "required for family power_g"));
        }
        if self.utility.family == UtilityFamily::LogSeparable && self.utility.gamma.is_some() {
            return Err(validation("gamma", "only valid for family power_g"));
        }
        if let Some(theta) = self.economy.theta {
            if !(theta > 0.0 && theta < 1.0) {
                return Err(validation("theta", "(0, 1)"));
            }
        }
        if let Some(sweep) = &self.sweep {
            let SweepSection {
                theta_start,
                theta_stop,
                theta_step,
            } = *sweep;
            if !(theta_start > 0.0 && theta_start < 1.0) {
                return Err(validation("theta_start", "(0, 1)"));
            }
            if !(theta_stop > 0.0 && theta_stop < 1.0) {
                return Err(validation("theta_stop", "(0, 1)"));
            }
            if !(theta_stop > theta_start) {
                return Err(validation("theta_stop", "theta_stop > theta_start"));
            }
            if !(theta_step > 0.0 && theta_step.is_finite()) {
                return Err(validation("theta_step", "theta_step > 0"));
            }
        }
        let run = &self.run;
        if !(run.oracle_step > 0.0 && run.oracle_step <= 1e-2) {
            return Err(validation("oracle_step", "(0, 1e-2]"));
        }
        if !(run.oracle_tolerance > 0.0 && run.oracle_tolerance.is_finite()) {
            return Err(validation("oracle_tolerance", "oracle_tolerance > 0"));
        }
        if run.tau_points < 2 {
            return Err(validation("tau_points", "tau_points >= 2"));
        }
        self.economy_at(self.representative_theta()).map(|_| ())
    }

    /// The single trust level if set, else the first grid point, else 0.5.
    /// Used where trust does not affect the result but the economy still
    /// needs one.
    pub fn representative_theta(&self) -> f64 {
        self.economy.theta.or(self.sweep.map(|s| s.theta_start)).unwrap_or(0.5)
    }

    fn params(&self, theta: f64) -> EconomyParams {
        let u = &self.utility;
        let utility = match u.family {
            UtilityFamily::LogSeparable => UtilitySpec::LogSeparable {
                psi: u.psi,
                eta: u.eta,
                g: u.g,
            },
            UtilityFamily::PowerG => UtilitySpec::PowerG {
                psi: u.psi,
                eta: u.eta,
                g: u.g,
                gamma: u.gamma.unwrap_or(f64::NAN),
            },
        };
        let ProductionFamily::Power = self.production.family;
        EconomyParams {
            utility,
            production: ProductionSpec::Power {
                tfp: self.production.tfp,
                alpha: self.production.alpha,
            },
            theta,
            tau_max: self.economy.tau_max,
            mode: match self.economy.mode {
                ModeName::IsoelasticNormalized => TaxMode::IsoelasticNormalized,
                ModeName::GeneralLaborTax => TaxMode::GeneralLaborTax,
            },
        }
    }

    /// The configured economy at trust level `theta`.
    pub fn economy_at(&self, theta: f64) -> Result<Economy, ConfigError> {
        build_economy(&self.params(theta)).map_err(|e| match e {
            Error::InvalidParameter { field, bound, .. } => validation(field, bound),
            other => validation("economy.mode", other.to_string()),
        })
    }

    /// The single configured trust level.
    pub fn single_theta(&self) -> Result<f64, ConfigError> {
        self.economy
            .theta
            .ok_or_else(|| validation("theta", "required by this command (set economy.theta or --theta)"))
    }

    /// The economy at the single configured trust level.
    pub fn economy(&self) -> Result<Economy, ConfigError> {
        self.economy_at(self.single_theta()?)
    }

    /// Trust grid from `[sweep]`, inclusive of the stop value.
    pub fn theta_grid(&self) -> Result<Vec<f64>, ConfigError> {
        let sweep = self
            .sweep
            .ok_or_else(|| validation("sweep", "required by this command (add [sweep] or --theta-grid)"))?;
        let span = (sweep.theta_stop - sweep.theta_start) / sweep.theta_step;
        let count = (span + 1e-9).floor() as usize + 1;
        Ok((0..count)
            .map(|i| {
                let theta = sweep.theta_start + i as f64 * sweep.theta_step;
                (theta * GRID_DECIMALS).round() / GRID_DECIMALS
            })
            .collect())
    }
}

/// Parses `start:stop:step`.
pub fn parse_theta_grid(spec: &str) -> Result<SweepSection, ConfigError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        return Err(validation("theta-grid", "format start:stop:step"));
    };
    let num = |s: &str, field: &str| s.trim().parse::<f64>().map_err(|_| validation(field, "a number"));
    Ok(SweepSection {
        theta_start: num(start, "theta_start")?,
        theta_stop: num(stop, "theta_stop")?,
        theta_step: num(step, "theta_step")?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[economy]
mode = "isoelastic_normalized"
theta = 0.9

[utility]
family = "log_separable"
psi = 1.0
eta = 1.0
g = 1.0

[production]
family = "power"
tfp = 2.0
alpha = 0.5
"#;

    #[test]
    fn minimal_document() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.economy.theta, Some(0.9));
        assert_eq!(cfg.economy.tau_max, 0.99);
        assert_eq!(cfg.run.oracle_step, 1e-4);
        assert_eq!(cfg.run.format, OutputFormat::Csv);
        cfg.economy().unwrap();
    }

    #[test]
    fn theta_out_of_range() {
        let doc = MINIMAL.replace("theta = 0.9", "theta = 1.2");
        match parse_config(&doc).unwrap_err() {
            ConfigError::Validation { field, bound } => {
                assert_eq!(field, "theta");
                assert_eq!(bound, "(0, 1)");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_key_names_key_and_line() {
        let doc = MINIMAL.replace("g = 1.0", "g = 1.0\ngamma_typo = 0.3");
        match parse_config(&doc).unwrap_err() {
            ConfigError::Parse { line, message, .. } => {
                assert!(message.contains("gamma_typo"), "{message}");
                assert_eq!(line, 11);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_section_rejected() {
        let doc = format!("{MINIMAL}\n[extras]\nfoo = 1\n");
        assert!(matches!(parse_config(&doc), Err(ConfigError::Parse { .. })));
    }

    #[test]
    fn malformed_syntax() {
        assert!(matches!(
            parse_config("[economy\nmode = 3"),
            Err(ConfigError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn economy_validation_surfaces() {
        let doc = MINIMAL.replace("alpha = 0.5", "alpha = 1.5");
        assert!(matches!(
            parse_config(&doc),
            Err(ConfigError::Validation { ref field, .. }) if field == "alpha"
        ));
        let doc = MINIMAL.replace("family = \"log_separable\"", "family = \"power_g\"");
        assert!(matches!(
            parse_config(&doc),
            Err(ConfigError::Validation { ref field, .. }) if field == "gamma"
        ));
    }

    #[test]
    fn grid_is_inclusive() {
        let doc = format!("{MINIMAL}\n[sweep]\ntheta_start = 0.1\ntheta_stop = 0.9\ntheta_step = 0.1\n");
        let grid = parse_config(&doc).unwrap().theta_grid().unwrap();
        assert_eq!(grid, vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]);
    }

    #[test]
    fn grid_validation() {
        let doc = format!("{MINIMAL}\n[sweep]\ntheta_start = 0.5\ntheta_stop = 0.4\ntheta_step = 0.1\n");
        assert!(parse_config(&doc).is_err());
        let doc = format!("{MINIMAL}\n[sweep]\ntheta_start = 0.5\ntheta_stop = 1.0\ntheta_step = 0.1\n");
        assert!(parse_config(&doc).is_err());
        assert!(parse_theta_grid("0.1:0.9").is_err());
        assert_eq!(parse_theta_grid("0.1:0.9:0.2").unwrap().theta_step, 0.2);
    }

    #[test]
    fn round_trip() {
        let doc = format!("{MINIMAL}\n[sweep]\ntheta_start = 0.1\ntheta_stop = 0.9\ntheta_step = 0.1\n[run]\noutput = \"x.csv\"\nformat = \"json\"\n");
        let cfg = parse_config(&doc).unwrap();
        let again = parse_config(&cfg.to_document()).unwrap();
        assert_eq!(cfg, again);
    }
}

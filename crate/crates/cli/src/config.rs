//! Run configuration: JSON file, field defaults, flag overrides, and
//! validation against the example being run.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    #[default]
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(CliError::Config(format!(
                "unknown format {other:?} (use json or csv)"
            ))),
        }
    }
}

fn default_n_max() -> u32 {
    20
}

fn default_depth() -> u32 {
    2
}

fn default_period() -> String {
    "ab".to_string()
}

fn default_quad_tol() -> f64 {
    1e-9
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub example: String,
    #[serde(default = "default_n_max")]
    pub n_max: u32,
    #[serde(default = "default_depth")]
    pub cylinder_depth: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub arithmetic: Arithmetic,
    #[serde(default)]
    pub preperiod: String,
    #[serde(default = "default_period")]
    pub period: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<PathBuf>,
    #[serde(default = "default_quad_tol")]
    pub quad_tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

/// Command-line overrides applied on top of a config file or a catalog
/// default.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub example: Option<String>,
    pub n_max: Option<u32>,
    pub cylinder_depth: Option<u32>,
    pub lambda: Option<f64>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("cannot parse {}: {e}", path.display())))
    }

    pub fn apply(&mut self, over: &Overrides) {
        if let Some(example) = &over.example {
            self.example = example.clone();
        }
        if let Some(n_max) = over.n_max {
            self.n_max = n_max;
        }
        if let Some(depth) = over.cylinder_depth {
            self.cylinder_depth = depth;
        }
        if let Some(lambda) = over.lambda {
            self.lambda = Some(lambda);
        }
        if let Some(output) = &over.output {
            self.output = Some(output.clone());
        }
        if let Some(format) = over.format {
            self.format = format;
        }
    }

    // the negated float comparisons are deliberate: they reject NaN
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<(), CliError> {
        if crate::catalog::find(&self.example).is_none() {
            return Err(CliError::Config(format!(
                "unknown example {:?}; `folner list` names the available ones",
                self.example
            )));
        }
        if self.n_max < 1 {
            return Err(CliError::Config("n_max must be at least 1".into()));
        }
        if self.example == "sol" {
            match self.lambda {
                None => {
                    return Err(CliError::Config(
                        "sol needs lambda (the expansion factor, > 1)".into(),
                    ))
                }
                Some(l) if !(l > 1.0) || !l.is_finite() => {
                    return Err(CliError::Config(format!(
                        "lambda must be a finite number above 1, got {l}"
                    )))
                }
                _ => {}
            }
        } else if self.lambda.is_some() {
            return Err(CliError::Config(
                "lambda is only meaningful for the sol example".into(),
            ));
        }
        if self.example == "f2-boundary" {
            if self.cylinder_depth > 6 {
                return Err(CliError::Config(
                    "cylinder_depth above 6 is not supported".into(),
                ));
            }
            folner::examples::f2::BoundaryPoint::parse(&self.preperiod, &self.period)
                .map_err(|e| CliError::Config(format!("bad boundary point: {e}")))?;
            if self.cocycle.is_some() && self.n_max > 12 {
                return Err(CliError::Config(
                    "a tabulated cocycle materializes the orbit set; n_max is capped at 12".into(),
                ));
            }
        } else if self.cocycle.is_some() {
            return Err(CliError::Config(
                "a tabulated cocycle only applies to f2-boundary".into(),
            ));
        }
        if !(self.quad_tol > 0.0) || !self.quad_tol.is_finite() {
            return Err(CliError::Config(format!(
                "quad_tol must be a positive number, got {}",
                self.quad_tol
            )));
        }
        Ok(())
    }
}

/// The weight table for a user-supplied cocycle on the boundary orbit:
/// germ words mapped to integer levels, with weight 3^(-level).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TabulatedCocycle {
    pub levels: std::collections::BTreeMap<String, i64>,
}

impl TabulatedCocycle {
    pub fn load(path: &Path) -> Result<TabulatedCocycle, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("cannot parse {}: {e}", path.display())))
    }
}

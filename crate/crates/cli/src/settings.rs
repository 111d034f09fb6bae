//! Parameter resolution: command-line flag, then config file, then
//! environment, then built-in default.
//!
//! The config file is flat TOML, one `key = value` per line:
//!
//! ```toml
//! dim = 150
//! margin = 10
//! delta = 0.7
//! g = 0.5
//! g-lo = 0.05
//! g-hi = 1.0
//! steps = 96
//! levels = 10
//! gap-tol = 1e-8
//! comm-tol = 1e-10
//! fit-tol = 1e-8
//! ```
//!
//! Environment: `AQRM_DIM`, `AQRM_GAP_TOL`, `AQRM_COMM_TOL` replace the
//! built-in defaults for dim and the two tolerances.

use std::path::Path;

use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigFile {
    pub dim: Option<usize>,
    pub margin: Option<usize>,
    pub delta: Option<f64>,
    pub g: Option<f64>,
    pub g_lo: Option<f64>,
    pub g_hi: Option<f64>,
    pub steps: Option<usize>,
    pub levels: Option<usize>,
    pub gap_tol: Option<f64>,
    pub comm_tol: Option<f64>,
    pub fit_tol: Option<f64>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub struct EnvDefaults {
    pub dim: Option<usize>,
    pub gap_tol: Option<f64>,
    pub comm_tol: Option<f64>,
}

fn env_var<T: std::str::FromStr>(name: &str) -> Result<Option<T>, CliError> {
    match std::env::var(name) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{name}={s:?} is not a valid value"))),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(CliError::Usage(format!("{name}: {e}"))),
    }
}

impl EnvDefaults {
    pub fn from_env() -> Result<Self, CliError> {
        Ok(Self {
            dim: env_var("AQRM_DIM")?,
            gap_tol: env_var("AQRM_GAP_TOL")?,
            comm_tol: env_var("AQRM_COMM_TOL")?,
        })
    }
}

/// Flag, config and environment layers for one run.
pub struct Layers {
    pub config: ConfigFile,
    pub env: EnvDefaults,
}

pub fn pick<T>(flag: Option<T>, config: Option<T>, env: Option<T>, default: T) -> T {
    flag.or(config).or(env).unwrap_or(default)
}

/// A required value with no built-in default.
pub fn require<T>(flag: Option<T>, config: Option<T>, name: &str) -> Result<T, CliError> {
    flag.or(config)
        .ok_or_else(|| CliError::Usage(format!("--{name} is required (flag or config key `{name}`)")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        assert_eq!(pick(Some(1), Some(2), Some(3), 4), 1);
        assert_eq!(pick(None, Some(2), Some(3), 4), 2);
        assert_eq!(pick(None, None, Some(3), 4), 3);
        assert_eq!(pick(None::<i32>, None, None, 4), 4);
    }

    #[test]
    fn config_parses_kebab_keys() {
        let c: ConfigFile = toml::from_str("dim = 90\ngap-tol = 1e-9\ng-lo = 0.1\n").unwrap();
        assert_eq!(c.dim, Some(90));
        assert_eq!(c.gap_tol, Some(1e-9));
        assert_eq!(c.g_lo, Some(0.1));
        assert!(toml::from_str::<ConfigFile>("dimension = 3\n").is_err());
    }
}

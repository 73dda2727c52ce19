//! Run settings: defaults, then an optional TOML file, then flags.

use std::path::Path;

use anyhow::{bail, Context, Result};
use chazy::verify::{DEFAULT_N_CHECK, DEFAULT_THRESHOLD, DEFAULT_TOL};
use serde::Deserialize;

use crate::io::Format;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub tol: f64,
    pub pass_threshold: f64,
    pub n_check: usize,
    pub seed: u64,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tol: DEFAULT_TOL,
            pass_threshold: DEFAULT_THRESHOLD,
            n_check: DEFAULT_N_CHECK,
            seed: 0,
            format: Format::Csv,
        }
    }
}

/// Keys accepted in a config file; all optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub tol: Option<f64>,
    pub pass_threshold: Option<f64>,
    pub n_check: Option<usize>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("invalid config {}", path.display()))
    }
}

impl RunConfig {
    /// Layer `file` and then `flags` over the defaults and validate.
    pub fn resolve(file: FileConfig, flags: FileConfig) -> Result<Self> {
        let d = RunConfig::default();
        let cfg = RunConfig {
            tol: flags.tol.or(file.tol).unwrap_or(d.tol),
            pass_threshold: flags
                .pass_threshold
                .or(file.pass_threshold)
                .unwrap_or(d.pass_threshold),
            n_check: flags.n_check.or(file.n_check).unwrap_or(d.n_check),
            seed: flags.seed.or(file.seed).unwrap_or(d.seed),
            format: flags.format.or(file.format).unwrap_or(d.format),
        };
        if !(1e-14..=1e-2).contains(&cfg.tol) {
            bail!("tol {} outside [1e-14, 1e-2]", cfg.tol);
        }
        if !(cfg.pass_threshold > 0.0 && cfg.pass_threshold.is_finite()) {
            bail!("pass_threshold must be positive");
        }
        if cfg.n_check < 2 {
            bail!("n_check must be at least 2");
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file: FileConfig = toml::from_str("tol = 1e-8\nseed = 4\nformat = \"json\"").unwrap();
        let flags = FileConfig {
            seed: Some(9),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(file, flags).unwrap();
        assert_eq!(cfg.tol, 1e-8);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.format, Format::Json);
        assert_eq!(cfg.n_check, DEFAULT_N_CHECK);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(toml::from_str::<FileConfig>("speed = 3").is_err());
        let bad = |f: FileConfig| RunConfig::resolve(FileConfig::default(), f).is_err();
        assert!(bad(FileConfig {
            tol: Some(1.0),
            ..Default::default()
        }));
        assert!(bad(FileConfig {
            n_check: Some(1),
            ..Default::default()
        }));
        assert!(bad(FileConfig {
            pass_threshold: Some(-1.0),
            ..Default::default()
        }));
    }
}

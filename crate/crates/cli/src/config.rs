//! Config file loading and flag/file/default resolution.
//!
//! Every subcommand flag can also be given through a JSON config file
//! (`--config run.json`); explicit flags win over the file, the file
//! wins over built-in defaults.

use serde::Deserialize;
use std::path::{Path, PathBuf};

pub const OUT_DIR_ENV: &str = "WEDGELAB_OUT_DIR";

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub smatrix: Option<String>,
    pub mass: Option<f64>,
    pub theta_max: Option<f64>,
    pub panels: Option<usize>,
    pub order: Option<usize>,
    pub x0: Option<f64>,
    pub x1: Option<f64>,
    pub kind: Option<String>,
    pub profiles: Option<usize>,
    pub n_max: Option<usize>,
    pub pairs: Option<usize>,
    pub seed: Option<u64>,
    pub center: Option<f64>,
    pub radius: Option<f64>,
    pub amplitude: Option<f64>,
    pub tol: Option<f64>,
    pub alpha: Option<f64>,
    pub d: Option<usize>,
    pub p: Option<Vec<f64>>,
    pub out_dir: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, String> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let raw = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        serde_json::from_str(&raw)
            .map_err(|e| format!("invalid config {}: {e}", path.display()))
    }
}

/// Flag beats config file beats default.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// Output directory: flag, then environment, then config file, then cwd.
pub fn out_dir(flag: Option<PathBuf>, file: &FileConfig) -> PathBuf {
    flag.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .or_else(|| file.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_is_flag_file_default() {
        assert_eq!(pick(Some(1), Some(2), 3), 1);
        assert_eq!(pick(None, Some(2), 3), 2);
        assert_eq!(pick::<i32>(None, None, 3), 3);
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        let parsed: Result<FileConfig, _> = serde_json::from_str("{\"masss\": 1.0}");
        assert!(parsed.is_err());
    }
}

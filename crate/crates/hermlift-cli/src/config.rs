//! Defaults read from the file named by `HERMLIFT_CONFIG`. Command-line
//! flags win over the file; the file wins over built-in defaults.

use std::path::Path;

use serde::Deserialize;

use crate::error::CliError;

pub const CONFIG_ENV: &str = "HERMLIFT_CONFIG";

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub seed: Option<u64>,
    pub bound_det: Option<i64>,
    pub bound_diag: Option<i64>,
    pub n_max: Option<usize>,
    pub cap: Option<i64>,
    pub ell: Option<u64>,
}

impl Config {
    pub fn from_env() -> Result<Config, CliError> {
        match std::env::var_os(CONFIG_ENV) {
            Some(path) => Config::load(Path::new(&path)),
            None => Ok(Config::default()),
        }
    }

    pub fn load(path: &Path) -> Result<Config, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let cfg: Config = toml::from_str(&text).map_err(|e| CliError::Config(e.to_string()))?;
        for (name, v) in [("bound_det", cfg.bound_det), ("bound_diag", cfg.bound_diag), ("cap", cfg.cap)] {
            if matches!(v, Some(x) if x <= 0) {
                return Err(CliError::Config(format!("`{name}` must be positive")));
            }
        }
        if cfg.n_max == Some(0) {
            return Err(CliError::Config("`n_max` must be positive".into()));
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_validates() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.toml");
        std::fs::write(&p, "seed = 7\nbound_det = 40\n").unwrap();
        let c = Config::load(&p).unwrap();
        assert_eq!(c.seed, Some(7));
        assert_eq!(c.bound_det, Some(40));
        std::fs::write(&p, "cap = 0\n").unwrap();
        assert!(Config::load(&p).is_err());
        std::fs::write(&p, "unknown = 1\n").unwrap();
        assert!(Config::load(&p).is_err());
    }
}

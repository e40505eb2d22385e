use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Format;
use crate::error::{NctError, Result};

pub const ENV_SEED: &str = "NCT_SEED";
pub const ENV_BOX: &str = "NCT_BOX";

/// Suite parameters. Defaults: seed 42, box 3, 50 trials, tolerance `1e-10`,
/// remainder radii `{4, 8, 16, 32}`, JSON output to stdout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub box_radius: i64,
    pub trials: usize,
    pub tol: f64,
    pub radii: Vec<f64>,
    pub report: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            box_radius: 3,
            trials: 50,
            tol: 1e-10,
            radii: vec![4.0, 8.0, 16.0, 32.0],
            report: None,
            format: Format::Json,
        }
    }
}

impl RunConfig {
    /// Overrides seed and box from `NCT_SEED` / `NCT_BOX` when set.
    pub fn apply_env(&mut self, lookup: impl Fn(&str) -> Option<String>) -> Result<()> {
        if let Some(v) = lookup(ENV_SEED) {
            self.seed = v
                .trim()
                .parse()
                .map_err(|_| NctError::Usage(format!("{ENV_SEED}={v} is not an unsigned integer")))?;
        }
        if let Some(v) = lookup(ENV_BOX) {
            self.box_radius = v
                .trim()
                .parse()
                .map_err(|_| NctError::Usage(format!("{ENV_BOX}={v} is not an integer")))?;
        }
        Ok(())
    }

    pub fn from_env() -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_env(|k| std::env::var(k).ok())?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.box_radius < 1 {
            return Err(NctError::Usage(format!("box must be at least 1, got {}", self.box_radius)));
        }
        if self.trials == 0 {
            return Err(NctError::Usage("trials must be positive".into()));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(NctError::Usage("tolerance must be positive".into()));
        }
        if self.radii.len() < 4 || self.radii.iter().any(|r| !(r.is_finite() && *r >= 1.0)) {
            return Err(NctError::Usage("need at least 4 radii, each at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Core,
    Symbols,
    Pdo,
    Sobolev,
    Module,
    Osc,
    All,
}

impl Suite {
    pub const PARTS: [Suite; 6] = [Suite::Core, Suite::Symbols, Suite::Pdo, Suite::Sobolev, Suite::Module, Suite::Osc];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Core => "core",
            Suite::Symbols => "symbols",
            Suite::Pdo => "pdo",
            Suite::Sobolev => "sobolev",
            Suite::Module => "module",
            Suite::Osc => "osc",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = NctError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::PARTS
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                NctError::Usage(format!("unknown suite `{s}` (core|symbols|pdo|sobolev|module|osc|all)"))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn env_overrides_defaults() {
        let mut cfg = RunConfig::default();
        cfg.apply_env(|k| match k {
            ENV_SEED => Some("7".into()),
            ENV_BOX => Some(" 2 ".into()),
            _ => None,
        })
        .unwrap();
        assert_eq!((cfg.seed, cfg.box_radius), (7, 2));
        assert!(cfg.apply_env(|_| Some("x".into())).is_err());
    }

    #[test]
    fn degenerate_box_rejected() {
        let cfg = RunConfig {
            box_radius: 0,
            ..Default::default()
        };
        assert!(matches!(cfg.validate(), Err(NctError::Usage(_))));
    }

    #[test]
    fn suite_names() {
        for s in Suite::PARTS {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!(matches!("nope".parse::<Suite>(), Err(NctError::Usage(_))));
    }
}

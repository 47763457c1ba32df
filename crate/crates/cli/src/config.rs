use std::path::Path;

use clap::ValueEnum;
use serde::Deserialize;

use palg::{Error, Limits};

pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
    Dot,
}

/// Settings read from `--config`. Every key is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub table_cap: Option<usize>,
    pub poset_cap: Option<usize>,
    pub oracle_cap: Option<usize>,
    pub budget: Option<u64>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub limits: Limits,
    pub seed: u64,
    pub format: Format,
}

/// Values given on the command line or in the environment.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub table_cap: Option<usize>,
    pub poset_cap: Option<usize>,
    pub oracle_cap: Option<usize>,
    pub budget: Option<u64>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
}

impl Config {
    /// Flags and environment win over the file, the file over the defaults.
    pub fn resolve(file: FileConfig, over: Overrides) -> Result<Self, Error> {
        let d = Limits::default();
        let limits = Limits {
            table_cap: over.table_cap.or(file.table_cap).unwrap_or(d.table_cap),
            poset_cap: over.poset_cap.or(file.poset_cap).unwrap_or(d.poset_cap),
            oracle_cap: over.oracle_cap.or(file.oracle_cap).unwrap_or(d.oracle_cap),
            budget: over.budget.or(file.budget).map(u128::from).unwrap_or(d.budget),
        };
        if limits.table_cap == 0 || limits.poset_cap == 0 || limits.oracle_cap == 0 || limits.budget == 0 {
            return Err(Error::Invalid("caps and budget must be positive".into()));
        }
        Ok(Config {
            limits,
            seed: over.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            format: over.format.or(file.format).unwrap_or_default(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let file: FileConfig = toml::from_str("table-cap = 10\nbudget = 99\nformat = \"text\"").unwrap();
        let c = Config::resolve(
            file,
            Overrides {
                table_cap: Some(20),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(c.limits.table_cap, 20);
        assert_eq!(c.limits.budget, 99);
        assert_eq!(c.limits.poset_cap, Limits::default().poset_cap);
        assert_eq!(c.format, Format::Text);
        assert_eq!(c.seed, DEFAULT_SEED);
    }

    #[test]
    fn rejects_zero_and_unknown_keys() {
        let zero = Overrides {
            budget: Some(0),
            ..Default::default()
        };
        assert!(Config::resolve(FileConfig::default(), zero).is_err());
        assert!(toml::from_str::<FileConfig>("tablecap = 3").is_err());
    }
}

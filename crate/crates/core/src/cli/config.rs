use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::{CliError, Format};
use crate::ifunctions::{GeometrySpec, ToricFibrationSpec};

/// A job file. Every key is optional; flags given on the command line win.
#[derive(Deserialize, Debug, Default, Clone)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub command: Option<String>,
    pub geometry: Option<GeometrySpec>,
    pub toric: Option<ToricFibrationSpec>,
    #[serde(rename = "N")]
    pub n: Option<u32>,
    pub degrees: Option<Vec<i64>>,
    pub trunc: Option<i64>,
    pub input: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub suite: Option<Vec<String>>,
    pub k: Option<Vec<u64>>,
    pub order: Option<usize>,
}

impl JobConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let raw = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&raw).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }

    pub fn parse(raw: &str) -> Result<Self, String> {
        let cfg: JobConfig = serde_json::from_str(raw).map_err(|e| e.to_string())?;
        if let Some(g) = &cfg.geometry {
            g.validate().map_err(|e| e.to_string())?;
        }
        if let Some(t) = &cfg.toric {
            t.validate().map_err(|e| e.to_string())?;
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_reject() {
        let c =
            JobConfig::parse(r#"{"command":"invariants","N":4,"degrees":[5],"trunc":1}"#).unwrap();
        assert_eq!(c.n, Some(4));
        assert!(JobConfig::parse(r#"{"bogus":1}"#).is_err());
        assert!(
            JobConfig::parse(r#"{"geometry":{"ambient":[4],"bundles":[[5,1]],"trunc":1}}"#)
                .is_err()
        );
        let g = JobConfig::parse(
            r#"{"geometry":{"ambient":[4],"bundles":[[5]],"trunc":1},"format":"text"}"#,
        )
        .unwrap();
        assert_eq!(g.format, Some(Format::Text));
    }
}

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ChainParams;

/// Couplings given in a config file; each present field overrides the flag.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsPatch {
    pub t1: Option<f64>,
    pub t2: Option<f64>,
    pub gamma: Option<f64>,
    pub lambda_l: Option<f64>,
    pub lambda_r: Option<f64>,
}

impl ParamsPatch {
    pub fn apply(&self, p: ChainParams) -> ChainParams {
        ChainParams {
            t1: self.t1.unwrap_or(p.t1),
            t2: self.t2.unwrap_or(p.t2),
            gamma: self.gamma.unwrap_or(p.gamma),
            lambda_l: self.lambda_l.unwrap_or(p.lambda_l),
            lambda_r: self.lambda_r.unwrap_or(p.lambda_r),
        }
    }
}

/// Contents of `--config file.json`. The run is a pure function of these
/// values and the flags; unknown keys are rejected.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub params: ParamsPatch,
    /// `a:b[:step]`.
    pub n: Option<String>,
    /// `lo:hi:count`.
    pub t1_grid: Option<String>,
    pub t2_grid: Option<String>,
    pub quantity: Option<Vec<String>>,
    pub tube: Option<f64>,
    pub kind: Option<String>,
    pub samples: Option<usize>,
    pub lambda: Option<f64>,
    pub im_tol: Option<f64>,
    pub criteria: Option<Vec<u32>>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::from_json(r#"{"n": "2:10", "bogus": 1}"#).is_err());
        assert!(RunConfig::from_json(r#"{"params": {"t3": 1.0}}"#).is_err());
    }

    #[test]
    fn patch_overrides() {
        let c = RunConfig::from_json(r#"{"params": {"t1": 2.5, "lambda_r": 0.0}, "n": "2:10"}"#).unwrap();
        let base = ChainParams::symmetric(2.0, 1.5, 1.0, 1e-7).unwrap();
        let p = c.params.apply(base);
        assert_eq!((p.t1, p.t2, p.lambda_l, p.lambda_r), (2.5, 1.5, 1e-7, 0.0));
        assert_eq!(c.n.as_deref(), Some("2:10"));
    }
}

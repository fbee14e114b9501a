use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::registry::DatasetSpec;
use crate::error::{Error, Result};
use crate::model::Variant;
use crate::optim::OptimizerKind;

/// Preprocessing applied inside each training fold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Preprocessing {
    pub standardize: bool,
    /// Project onto this many LDA directions after standardizing.
    pub lda_dims: Option<usize>,
}

impl Default for Preprocessing {
    fn default() -> Self {
        Self {
            standardize: true,
            lda_dims: None,
        }
    }
}

/// Everything that determines one cross-validation run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dataset_id: String,
    /// `None` selects the dataset default, raised to the feature count when
    /// the default would fall below it.
    pub lobules: Option<usize>,
    pub epochs: usize,
    pub agents: usize,
    pub k_folds: usize,
    pub seed: u64,
    pub variant: Variant,
    pub optimizer: OptimizerKind,
    pub preprocessing: Preprocessing,
    /// Stratified row subsample drawn before splitting; `None` uses all rows.
    pub subsample: Option<usize>,
}

impl ExperimentConfig {
    /// Defaults for a registered dataset: 500 epochs, 10 agents, 10 folds,
    /// seed 42, full model, IFOX, standardization on.
    pub fn for_dataset(id: &str) -> Result<Self> {
        let spec = DatasetSpec::lookup(id)?;
        Ok(Self {
            dataset_id: spec.id.to_string(),
            lobules: None,
            epochs: 500,
            agents: 10,
            k_folds: 10,
            seed: 42,
            variant: Variant::Full,
            optimizer: OptimizerKind::Ifox,
            preprocessing: Preprocessing {
                standardize: true,
                lda_dims: spec.default_lda_dims,
            },
            subsample: spec.default_subsample,
        })
    }

    pub fn validate(&self) -> Result<()> {
        DatasetSpec::lookup(&self.dataset_id)?;
        if self.k_folds < 2 {
            return Err(Error::Config(format!("k_folds must be >= 2, got {}", self.k_folds)));
        }
        if self.epochs == 0 {
            return Err(Error::Config("epochs must be >= 1".into()));
        }
        if self.agents < 2 {
            return Err(Error::Config(format!("agents must be >= 2, got {}", self.agents)));
        }
        if self.preprocessing.lda_dims == Some(0) {
            return Err(Error::Config("lda_dims must be >= 1".into()));
        }
        if let Some(n) = self.subsample {
            if n < self.k_folds {
                return Err(Error::Config(format!(
                    "subsample {n} is smaller than k_folds {}",
                    self.k_folds
                )));
            }
        }
        Ok(())
    }

    /// Reads a `key = value` file on top of the dataset defaults. Blank
    /// lines and `#` comments are ignored. The `dataset` key may appear
    /// anywhere; it is applied first.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value, got '{line}'", lineno + 1)))?;
            pairs.push((lineno + 1, k.trim().to_string(), v.trim().to_string()));
        }
        let dataset = pairs
            .iter()
            .find(|(_, k, _)| k == "dataset")
            .map(|(_, _, v)| v.clone())
            .ok_or_else(|| Error::Config("config file must set 'dataset'".into()))?;
        let mut cfg = Self::for_dataset(&dataset).map_err(|e| Error::Config(e.to_string()))?;
        for (lineno, key, value) in &pairs {
            cfg.set(key, value)
                .map_err(|e| Error::Config(format!("line {lineno}: {e}")))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Applies one `key = value` setting. Keys mirror the field names;
    /// `none` clears optional values.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse()
                .map_err(|_| Error::Config(format!("'{key}' expects a number, got '{v}'")))
        }
        fn opt_num(key: &str, v: &str) -> Result<Option<usize>> {
            if v.eq_ignore_ascii_case("none") {
                Ok(None)
            } else {
                num(key, v).map(Some)
            }
        }
        match key {
            "dataset" => {
                let spec = DatasetSpec::lookup(value)?;
                self.dataset_id = spec.id.to_string();
            }
            "lobules" => self.lobules = opt_num(key, value)?,
            "epochs" => self.epochs = num(key, value)?,
            "agents" => self.agents = num(key, value)?,
            "k_folds" => self.k_folds = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "variant" => self.variant = value.parse()?,
            "optimizer" => self.optimizer = value.parse()?,
            "standardize" => {
                self.preprocessing.standardize = match value {
                    "true" | "yes" | "1" => true,
                    "false" | "no" | "0" => false,
                    _ => {
                        return Err(Error::Config(format!(
                            "'standardize' expects true/false, got '{value}'"
                        )))
                    }
                }
            }
            "lda_dims" => self.preprocessing.lda_dims = opt_num(key, value)?,
            "subsample" => self.subsample = opt_num(key, value)?,
            _ => return Err(Error::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dataset_defaults() {
        let iris = ExperimentConfig::for_dataset("iris").unwrap();
        assert_eq!((iris.epochs, iris.agents, iris.k_folds), (500, 10, 10));
        assert_eq!(iris.preprocessing.lda_dims, None);
        let mnist = ExperimentConfig::for_dataset("mnist").unwrap();
        assert_eq!(mnist.preprocessing.lda_dims, Some(9));
        assert_eq!(mnist.subsample, Some(2000));
        assert!(ExperimentConfig::for_dataset("cifar").is_err());
    }

    #[test]
    fn parses_key_values() {
        let cfg = ExperimentConfig::parse(
            "# comment\nepochs = 50\ndataset = wine\nlobules=20 # trailing\nvariant = phase1-only\nstandardize = false\n",
        )
        .unwrap();
        assert_eq!(cfg.dataset_id, "wine");
        assert_eq!(cfg.epochs, 50);
        assert_eq!(cfg.lobules, Some(20));
        assert_eq!(cfg.variant, Variant::Phase1Only);
        assert!(!cfg.preprocessing.standardize);
    }

    #[test]
    fn rejects_bad_configs() {
        let err = ExperimentConfig::parse("dataset = iris\nk_folds = 1\n").unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        assert_eq!(err.exit_code(), 2);
        assert!(ExperimentConfig::parse("dataset = iris\ncolour = red\n").is_err());
        assert!(ExperimentConfig::parse("epochs = 5\n").is_err());
        assert!(ExperimentConfig::parse("dataset = iris\nepochs = many\n").is_err());
        assert!(ExperimentConfig::parse("dataset = iris\nbroken line\n").is_err());
    }
}

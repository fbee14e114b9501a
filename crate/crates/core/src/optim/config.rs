use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::Scalar;

/// Which optimizer to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptimizerKind {
    Ifox,
    Fox,
    /// Uniform random search with the same evaluation budget; a control.
    Random,
}

impl OptimizerKind {
    pub const ALL: [OptimizerKind; 3] = [OptimizerKind::Ifox, OptimizerKind::Fox, OptimizerKind::Random];

    pub fn as_str(self) -> &'static str {
        match self {
            OptimizerKind::Ifox => "ifox",
            OptimizerKind::Fox => "fox",
            OptimizerKind::Random => "random",
        }
    }
}

impl fmt::Display for OptimizerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OptimizerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ifox" => Ok(OptimizerKind::Ifox),
            "fox" => Ok(OptimizerKind::Fox),
            "random" => Ok(OptimizerKind::Random),
            other => Err(Error::Param(format!(
                "unknown optimizer '{other}' (expected ifox, fox or random)"
            ))),
        }
    }
}

/// Budget and search box of one optimizer run. The box only bounds the
/// initial population; moved agents are not clamped.
#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerConfig<T> {
    /// Number of epochs (detoxification cycles).
    pub epochs: usize,
    /// Population size (detoxification power).
    pub agents: usize,
    pub dim: usize,
    pub lower: T,
    pub upper: T,
    pub seed: u64,
}

impl<T: Scalar> OptimizerConfig<T> {
    pub fn new(epochs: usize, agents: usize, dim: usize, lower: T, upper: T, seed: u64) -> Result<Self> {
        let cfg = Self {
            epochs,
            agents,
            dim,
            lower,
            upper,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.epochs < 1 {
            return Err(Error::Param("epochs must be >= 1".into()));
        }
        if self.agents < 2 {
            return Err(Error::Param(format!("agents must be >= 2, got {}", self.agents)));
        }
        if self.dim < 1 {
            return Err(Error::Param("dim must be >= 1".into()));
        }
        if self.lower.is_nan() || self.upper.is_nan() || self.lower >= self.upper {
            return Err(Error::Param(format!(
                "search box requires lower < upper, got [{}, {}]",
                self.lower, self.upper
            )));
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }
}

/// Outcome of one optimizer run.
#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerRun<T> {
    pub best_x: Vec<T>,
    pub best_f: T,
    /// Incumbent fitness after each epoch's evaluations; non-increasing.
    pub history: Vec<T>,
    pub evals: usize,
    pub wall_time: f64,
}

impl<T: Scalar> OptimizerRun<T> {
    /// Whether the incumbent left the initialization box.
    pub fn out_of_bounds(&self, lower: T, upper: T) -> bool {
        self.best_x.iter().any(|&x| x < lower || x > upper)
    }
}

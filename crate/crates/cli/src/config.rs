//! Versioned TOML experiment configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::usage;

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub seed: u64,
    /// Number of independently seeded runs per sweep point.
    #[serde(default = "one")]
    pub trials: u64,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    /// Accuracy for the first-hit statistic: the first iteration whose
    /// recorded value is within `target` of the known optimum value.
    #[serde(default)]
    pub target: Option<f64>,
    /// Also write every trace as JSON next to its CSV.
    #[serde(default)]
    pub json_traces: bool,
    pub problem: ProblemSpec,
    pub optimizer: OptimizerSpec,
    #[serde(default)]
    pub sweep: SweepSpec,
}

fn one() -> u64 {
    1
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// Minibatch sizes; each overrides `optimizer.b`. Empty means one run.
    #[serde(default)]
    pub b: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProblemSpec {
    /// The two-dimensional sigmoid sum on its box.
    G {},
    Cliff {
        #[serde(default = "half")]
        valley_width: f64,
        #[serde(default = "ten")]
        cliff_height: f64,
        #[serde(default = "plateau")]
        plateau_slope: f64,
    },
    Quadratic {
        center: Vec<f64>,
    },
    Cone {
        center: Vec<f64>,
    },
    IdealizedGlm {
        dim: usize,
        samples: usize,
        #[serde(default = "two")]
        w_radius: f64,
    },
    Counterexample {},
    Perceptron {
        dim: usize,
        samples: usize,
        gamma: f64,
    },
    NoisyGlm {
        dim: usize,
        #[serde(default = "two")]
        w_radius: f64,
        #[serde(default = "unit")]
        noise_level: f64,
        #[serde(default = "pool")]
        pool_size: usize,
    },
    LowerBound {
        eps: f64,
    },
    /// A dataset JSON file of kind `glm` or `perceptron`.
    Dataset {
        path: PathBuf,
    },
}

fn half() -> f64 {
    0.5
}
fn ten() -> f64 {
    10.0
}
fn plateau() -> f64 {
    1e-6
}
fn two() -> f64 {
    2.0
}
fn unit() -> f64 {
    1.0
}
fn pool() -> usize {
    4096
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizerName {
    Ngd,
    Sngd,
    Gd,
    Sgd,
    Msgd,
    Nesterov,
}

impl OptimizerName {
    pub fn is_normalized(self) -> bool {
        matches!(self, Self::Ngd | Self::Sngd)
    }

    pub fn uses_minibatch(self) -> bool {
        matches!(self, Self::Sngd | Self::Msgd | Self::Nesterov)
    }
}

/// Starting point: explicit coordinates, the origin, or a uniform draw from
/// the problem's sampling region.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StartSpec {
    Coords(Vec<f64>),
    Rule(StartRule),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartRule {
    Origin,
    Random,
}

/// One flat table for every optimizer; which fields apply depends on
/// `name` and is checked by [`OptimizerSpec::validate`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerSpec {
    pub name: OptimizerName,
    pub iterations: usize,
    pub x1: StartSpec,
    /// Constant step size.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    /// Polynomial decay `eta0 (1 + gamma t)^(-exponent)` for the baselines.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub momentum: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<usize>,
    /// Project iterates onto the problem's domain (normalized methods only).
    #[serde(default)]
    pub project: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grad_tol: Option<f64>,
    /// Use the problem's direction oracle instead of its gradient (ngd only).
    #[serde(default)]
    pub oracle: bool,
}

impl OptimizerSpec {
    pub fn validate(&self, sweep: &SweepSpec) -> anyhow::Result<()> {
        let name = self.name;
        let reject = |field: &str, present: bool| {
            if present {
                Err(usage(format!(
                    "optimizer `{name:?}` does not accept `{field}`"
                )))
            } else {
                Ok(())
            }
        };
        if self.iterations == 0 {
            return Err(usage("optimizer.iterations must be ≥ 1"));
        }
        if name.is_normalized() {
            if self.eta.is_none() {
                return Err(usage("normalized optimizers need `eta`"));
            }
            for (field, present) in [
                ("eta0", self.eta0.is_some()),
                ("gamma", self.gamma.is_some()),
                ("exponent", self.exponent.is_some()),
                ("momentum", self.momentum.is_some()),
            ] {
                reject(field, present)?;
            }
        } else {
            reject("project", self.project)?;
            reject("grad_tol", self.grad_tol.is_some())?;
            match (self.eta, self.eta0, self.gamma) {
                (Some(_), None, None) => reject("exponent", self.exponent.is_some())?,
                (None, Some(_), Some(_)) => {}
                _ => return Err(usage("give either `eta` or both `eta0` and `gamma`")),
            }
        }
        reject("oracle", self.oracle && name != OptimizerName::Ngd)?;
        if name.uses_minibatch() {
            if self.b.is_none() && sweep.b.is_empty() {
                return Err(usage(format!(
                    "optimizer `{name:?}` needs `b` or a [sweep] b list"
                )));
            }
        } else {
            reject("b", self.b.is_some())?;
            if !sweep.b.is_empty() {
                return Err(usage(format!(
                    "optimizer `{name:?}` has no minibatch to sweep"
                )));
            }
        }
        if sweep.b.contains(&0) || self.b == Some(0) {
            return Err(usage("minibatch sizes must be ≥ 1"));
        }
        Ok(())
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> anyhow::Result<Self> {
        // Check the version first so older files get a clear message instead
        // of a field-level parse error.
        let raw: toml::Table =
            toml::from_str(text).map_err(|e| usage(format!("invalid TOML: {e}")))?;
        match raw.get("schema_version").and_then(|v| v.as_integer()) {
            Some(v) if v == CONFIG_SCHEMA_VERSION as i64 => {}
            Some(v) => {
                return Err(usage(format!(
                    "unsupported schema_version {v} (expected {CONFIG_SCHEMA_VERSION})"
                )))
            }
            None => return Err(usage("missing integer `schema_version`")),
        }
        let cfg: Self = toml::from_str(text).map_err(|e| usage(format!("invalid config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.trials == 0 {
            return Err(usage("trials must be ≥ 1"));
        }
        if let Some(t) = self.target {
            if !(t.is_finite() && t >= 0.0) {
                return Err(usage(format!("target must be ≥ 0, got {t}")));
            }
        }
        self.optimizer.validate(&self.sweep)
    }

    /// Minibatch sizes to run; `None` stands for a run without minibatches.
    pub fn batch_sizes(&self) -> Vec<Option<usize>> {
        if !self.sweep.b.is_empty() {
            self.sweep.b.iter().map(|&b| Some(b)).collect()
        } else {
            vec![self.optimizer.b]
        }
    }
}

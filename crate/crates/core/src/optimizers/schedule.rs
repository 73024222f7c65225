use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StepKind {
    Constant {
        eta: f64,
    },
    /// `η_t = η₀ (1 + γ t)^(-exponent)`, with `t` counted from 0.
    Polynomial {
        eta0: f64,
        gamma: f64,
        #[serde(default = "default_exponent")]
        exponent: f64,
    },
}

fn default_exponent() -> f64 {
    0.75
}

/// Step sizes and momentum for the unnormalized baselines.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepSchedule {
    pub kind: StepKind,
    #[serde(default)]
    pub momentum: f64,
}

impl StepSchedule {
    pub fn constant(eta: f64) -> Self {
        Self {
            kind: StepKind::Constant { eta },
            momentum: 0.0,
        }
    }

    pub fn polynomial(eta0: f64, gamma: f64) -> Self {
        Self {
            kind: StepKind::Polynomial {
                eta0,
                gamma,
                exponent: default_exponent(),
            },
            momentum: 0.0,
        }
    }

    pub fn with_momentum(mut self, momentum: f64) -> Self {
        self.momentum = momentum;
        self
    }

    /// Step size at zero-based step `t`.
    pub fn eta(&self, t: usize) -> f64 {
        match self.kind {
            StepKind::Constant { eta } => eta,
            StepKind::Polynomial {
                eta0,
                gamma,
                exponent,
            } => eta0 * (1.0 + gamma * t as f64).powf(-exponent),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        match self.kind {
            StepKind::Constant { eta } if !positive(eta) => {
                return Err(invalid("eta", format!("must be > 0, got {eta}")));
            }
            StepKind::Polynomial {
                eta0,
                gamma,
                exponent,
            } => {
                if !positive(eta0) {
                    return Err(invalid("eta0", format!("must be > 0, got {eta0}")));
                }
                if !(gamma.is_finite() && gamma >= 0.0) {
                    return Err(invalid("gamma", format!("must be ≥ 0, got {gamma}")));
                }
                if !(exponent.is_finite() && exponent >= 0.0) {
                    return Err(invalid("exponent", format!("must be ≥ 0, got {exponent}")));
                }
            }
            _ => {}
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(invalid(
                "momentum",
                format!("must lie in [0, 1), got {}", self.momentum),
            ));
        }
        Ok(())
    }
}

//! Normalized gradient methods and the unnormalized baselines they are
//! compared against.

mod baselines;
mod ngd;
mod schedule;

pub use baselines::{gd, msgd, nesterov, sgd};
pub use ngd::{ngd, ngd_with_oracle, sngd};
pub use schedule::{StepKind, StepSchedule};

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, invalid, Result};
use crate::point::Point;
use crate::region::FeasibleRegion;

/// Default threshold below which a search direction counts as vanished.
pub const DEFAULT_GRAD_TOL: f64 = 1e-12;

/// Inputs of a normalized-gradient run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NgdConfig {
    pub iterations: usize,
    pub eta: f64,
    pub x1: Point,
    #[serde(default)]
    pub region: Option<FeasibleRegion>,
    #[serde(default = "default_grad_tol")]
    pub grad_tol: f64,
}

fn default_grad_tol() -> f64 {
    DEFAULT_GRAD_TOL
}

impl NgdConfig {
    pub fn new(iterations: usize, eta: f64, x1: Point) -> Self {
        Self {
            iterations,
            eta,
            x1,
            region: None,
            grad_tol: DEFAULT_GRAD_TOL,
        }
    }

    pub fn with_region(mut self, region: FeasibleRegion) -> Self {
        self.region = Some(region);
        self
    }

    pub fn with_grad_tol(mut self, grad_tol: f64) -> Self {
        self.grad_tol = grad_tol;
        self
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if self.iterations == 0 {
            return Err(invalid("iterations", "must be ≥ 1"));
        }
        if !(self.eta.is_finite() && self.eta > 0.0) {
            return Err(invalid("eta", format!("must be > 0, got {}", self.eta)));
        }
        if !(self.grad_tol.is_finite() && self.grad_tol >= 0.0) {
            return Err(invalid(
                "grad_tol",
                format!("must be ≥ 0, got {}", self.grad_tol),
            ));
        }
        check_dim(dim, self.x1.dim())?;
        if let Some(r) = &self.region {
            check_dim(dim, r.dim())?;
        }
        Ok(())
    }

    /// Starting iterate, projected onto the region when one is set.
    pub(crate) fn start(&self) -> Result<Point> {
        match &self.region {
            Some(r) => r.project(&self.x1),
            None => Ok(self.x1.clone()),
        }
    }
}

/// [`NgdConfig`] plus a minibatch size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SngdConfig {
    #[serde(flatten)]
    pub ngd: NgdConfig,
    pub b: usize,
}

impl SngdConfig {
    pub fn new(ngd: NgdConfig, b: usize) -> Self {
        Self { ngd, b }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if self.b == 0 {
            return Err(invalid("b", "must be ≥ 1"));
        }
        self.ngd.validate(dim)
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, invalid, Result};
use crate::objective::Objective;
use crate::point::{dot, Point};
use crate::rng::Stream;

/// Sampling parameters shared by the local Lipschitz and smoothness checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalCheck {
    pub center: Point,
    pub radius: f64,
    /// The Lipschitz constant G or the smoothness constant β.
    pub constant: f64,
    pub trials: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalReport {
    pub holds: bool,
    pub trials: usize,
    /// Largest observed ratio of the left side to the allowed bound.
    pub worst_ratio: f64,
    pub counterexample: Option<(Point, Point)>,
}

impl LocalCheck {
    fn validate(&self, dim: usize) -> Result<()> {
        check_dim(dim, self.center.dim())?;
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(invalid(
                "radius",
                format!("must be > 0, got {}", self.radius),
            ));
        }
        if !(self.constant.is_finite() && self.constant >= 0.0) {
            return Err(invalid(
                "constant",
                format!("must be ≥ 0, got {}", self.constant),
            ));
        }
        Ok(())
    }

    /// Pairs in the ball. Every other pair uses the center as one endpoint,
    /// which probes kinks sitting exactly at the center.
    fn sample_pair(&self, trial: usize, stream: &mut Stream) -> (Point, Point) {
        let d = self.center.dim();
        let x = self.center.add_scaled(1.0, &stream.in_ball(d, self.radius));
        let y = if trial % 2 == 1 {
            self.center.clone()
        } else {
            self.center.add_scaled(1.0, &stream.in_ball(d, self.radius))
        };
        (x, y)
    }

    fn run(
        &self,
        dim: usize,
        stream: &mut Stream,
        mut measure: impl FnMut(&Point, &Point) -> (f64, f64, f64),
    ) -> Result<LocalReport> {
        self.validate(dim)?;
        let mut report = LocalReport {
            holds: true,
            trials: self.trials,
            worst_ratio: 0.0,
            counterexample: None,
        };
        for trial in 0..self.trials {
            let (x, y) = self.sample_pair(trial, stream);
            let (lhs, bound, slack) = measure(&x, &y);
            if bound > 0.0 {
                report.worst_ratio = report.worst_ratio.max(lhs / bound);
            } else if lhs > 0.0 {
                report.worst_ratio = f64::INFINITY;
            }
            if lhs > bound + slack && report.counterexample.is_none() {
                report.holds = false;
                report.counterexample = Some((x, y));
            }
        }
        Ok(report)
    }
}

/// Samples pairs in `B(center, radius)` and checks
/// `|f(x) − f(y)| ≤ G ‖x − y‖` up to a rounding slack of
/// `1e-12 · (|f(x)| + |f(y)|)`.
pub fn check_local_lipschitz<F: Objective + ?Sized>(
    f: &F,
    check: &LocalCheck,
    stream: &mut Stream,
) -> Result<LocalReport> {
    check.run(f.dim(), stream, |x, y| {
        let (fx, fy) = (f.value(x), f.value(y));
        let lhs = (fx - fy).abs();
        (
            lhs,
            check.constant * x.distance(y),
            1e-12 * (fx.abs() + fy.abs()),
        )
    })
}

/// Samples pairs in `B(center, radius)` and checks
/// `|f(x) − f(y) − ⟨∇f(y), x − y⟩| ≤ (β/2) ‖x − y‖²` up to a rounding slack.
pub fn check_local_smooth<F: Objective + ?Sized>(
    f: &F,
    check: &LocalCheck,
    stream: &mut Stream,
) -> Result<LocalReport> {
    check.run(f.dim(), stream, |x, y| {
        let (fx, fy) = (f.value(x), f.value(y));
        let lin = dot(&f.gradient(y), &x.sub(y));
        let lhs = (fx - fy - lin).abs();
        let slack = 1e-12 * (fx.abs() + fy.abs() + lin.abs());
        (lhs, 0.5 * check.constant * x.distance_sq(y), slack)
    })
}

/// SLQC parameters implied by strict quasi-convexity together with
/// G-Lipschitzness on `B(x*, ε/G)`: κ = G over a ball of radius ε/G.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlqcParams {
    pub eps: f64,
    pub kappa: f64,
    pub radius: f64,
}

pub fn derive_slqc_from_lipschitz(g: f64, eps: f64) -> Result<SlqcParams> {
    for (name, v) in [("G", g), ("eps", eps)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(invalid(name, format!("must be finite and > 0, got {v}")));
        }
    }
    Ok(SlqcParams {
        eps,
        kappa: g,
        radius: eps / g,
    })
}

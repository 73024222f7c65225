//! One-dimensional distribution on which SNGD with a small minibatch drifts
//! away from the optimum.
//!
//! ```text
//!   ψ(x) = -ε x / 2                      with probability 1 - ε
//!   ψ(x) = (1 - ε/2) · max(x + 3, 0)     with probability ε
//! ```

use crate::error::{invalid, Result};
use crate::objective::{Objective, StochasticObjective};
use crate::point::Point;
use crate::rng::{bernoulli_threshold, Stream};

pub const LOWER_BOUND_OPTIMUM: f64 = -3.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LowerBoundComponent {
    Linear { eps: f64 },
    Hinge { eps: f64 },
}

impl LowerBoundComponent {
    /// Derivative at `x`. The hinge kink at `-3` takes the left slope, 0.
    #[inline]
    pub fn slope(&self, x: f64) -> f64 {
        match *self {
            Self::Linear { eps } => -0.5 * eps,
            Self::Hinge { eps } => {
                if x > LOWER_BOUND_OPTIMUM {
                    1.0 - 0.5 * eps
                } else {
                    0.0
                }
            }
        }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Self::Linear { eps } => -0.5 * eps * x,
            Self::Hinge { eps } => (1.0 - 0.5 * eps) * (x - LOWER_BOUND_OPTIMUM).max(0.0),
        }
    }
}

impl Objective for LowerBoundComponent {
    fn dim(&self) -> usize {
        1
    }
    fn value(&self, x: &Point) -> f64 {
        self.eval(x[0])
    }
    fn gradient(&self, x: &Point) -> Vec<f64> {
        vec![self.slope(x[0])]
    }
}

/// `E[ψ](x)`: slope `-ε(1-ε)/2` left of `-3` and `ε/2` right of it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LowerBoundExpected {
    pub eps: f64,
}

impl LowerBoundExpected {
    pub fn eval(&self, x: f64) -> f64 {
        let e = self.eps;
        (1.0 - e) * (-0.5 * e * x) + e * (1.0 - 0.5 * e) * (x - LOWER_BOUND_OPTIMUM).max(0.0)
    }

    pub fn slope(&self, x: f64) -> f64 {
        let e = self.eps;
        let hinge = if x > LOWER_BOUND_OPTIMUM {
            1.0 - 0.5 * e
        } else {
            0.0
        };
        -(1.0 - e) * 0.5 * e + e * hinge
    }

    pub fn min_value(&self) -> f64 {
        self.eval(LOWER_BOUND_OPTIMUM)
    }

    /// Whether `x` is ε-optimal for the expected loss.
    pub fn is_eps_optimal(&self, x: f64) -> bool {
        self.eval(x) - self.min_value() <= self.eps
    }
}

impl Objective for LowerBoundExpected {
    fn dim(&self) -> usize {
        1
    }
    fn value(&self, x: &Point) -> f64 {
        self.eval(x[0])
    }
    fn gradient(&self, x: &Point) -> Vec<f64> {
        vec![self.slope(x[0])]
    }
}

#[derive(Clone, Debug)]
pub struct LowerBoundDistribution {
    eps: f64,
    hinge_threshold: u64,
    expected: LowerBoundExpected,
}

impl LowerBoundDistribution {
    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn expectation(&self) -> &LowerBoundExpected {
        &self.expected
    }

    #[inline]
    pub(crate) fn draw_component(&self, stream: &mut Stream) -> LowerBoundComponent {
        if stream.bernoulli(self.hinge_threshold) {
            LowerBoundComponent::Hinge { eps: self.eps }
        } else {
            LowerBoundComponent::Linear { eps: self.eps }
        }
    }
}

/// Requires `0 < eps ≤ 0.1`.
pub fn make_lower_bound_distribution(eps: f64) -> Result<LowerBoundDistribution> {
    if !(eps > 0.0 && eps <= 0.1) {
        return Err(invalid("eps", format!("must lie in (0, 0.1], got {eps}")));
    }
    Ok(LowerBoundDistribution {
        eps,
        hinge_threshold: bernoulli_threshold(eps),
        expected: LowerBoundExpected { eps },
    })
}

impl StochasticObjective for LowerBoundDistribution {
    type Component = LowerBoundComponent;

    fn dim(&self) -> usize {
        1
    }

    fn draw(&self, stream: &mut Stream) -> LowerBoundComponent {
        self.draw_component(stream)
    }

    /// The linear branch is unbounded on ℝ.
    fn bound_m(&self) -> f64 {
        f64::INFINITY
    }

    fn expected(&self) -> Option<&dyn Objective> {
        Some(&self.expected)
    }
}

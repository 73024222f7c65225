use crate::objective::Objective;
use crate::point::Point;
use crate::region::FeasibleRegion;

use super::{sigmoid, sigmoid_prime};

/// `g(x) = σ(x₁) + σ(x₂)` on the box `[-10, 10]²`.
///
/// Unimodal with its only minimum at the corner `(-10, -10)`, yet its
/// sublevel sets are not convex.
#[derive(Clone, Debug)]
pub struct SigmoidSum {
    domain: FeasibleRegion,
}

impl SigmoidSum {
    pub const BOUND: f64 = 10.0;

    pub fn minimizer() -> Point {
        Point::new(vec![-Self::BOUND, -Self::BOUND]).expect("finite")
    }

    pub fn min_value() -> f64 {
        2.0 * sigmoid(-Self::BOUND)
    }
}

pub fn make_g() -> SigmoidSum {
    SigmoidSum {
        domain: FeasibleRegion::cube(2, -SigmoidSum::BOUND, SigmoidSum::BOUND).expect("valid box"),
    }
}

impl Objective for SigmoidSum {
    fn dim(&self) -> usize {
        2
    }

    fn value(&self, x: &Point) -> f64 {
        sigmoid(x[0]) + sigmoid(x[1])
    }

    fn gradient(&self, x: &Point) -> Vec<f64> {
        vec![sigmoid_prime(x[0]), sigmoid_prime(x[1])]
    }

    fn domain(&self) -> Option<&FeasibleRegion> {
        Some(&self.domain)
    }
}

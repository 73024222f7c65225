//! Small reference objectives used by tests, the CLI and the property suites.

use crate::objective::Objective;
use crate::point::Point;

/// `‖x - c‖²`.
#[derive(Clone, Debug)]
pub struct Quadratic {
    pub center: Point,
}

impl Quadratic {
    pub fn new(center: Point) -> Self {
        Self { center }
    }

    pub fn centered(dim: usize) -> Self {
        Self::new(Point::zeros(dim))
    }
}

impl Objective for Quadratic {
    fn dim(&self) -> usize {
        self.center.dim()
    }
    fn value(&self, x: &Point) -> f64 {
        x.distance_sq(&self.center)
    }
    fn gradient(&self, x: &Point) -> Vec<f64> {
        x.sub(&self.center).into_iter().map(|d| 2.0 * d).collect()
    }
}

/// `‖x - c‖`, with the zero subgradient at the apex.
#[derive(Clone, Debug)]
pub struct Cone {
    pub center: Point,
}

impl Cone {
    pub fn new(center: Point) -> Self {
        Self { center }
    }

    pub fn centered(dim: usize) -> Self {
        Self::new(Point::zeros(dim))
    }
}

impl Objective for Cone {
    fn dim(&self) -> usize {
        self.center.dim()
    }
    fn value(&self, x: &Point) -> f64 {
        x.distance(&self.center)
    }
    fn gradient(&self, x: &Point) -> Vec<f64> {
        let d = x.sub(&self.center);
        let n = crate::point::norm(&d);
        if n == 0.0 {
            d
        } else {
            d.into_iter().map(|v| v / n).collect()
        }
    }
}

#[derive(Clone, Debug)]
pub struct Constant {
    pub dim: usize,
    pub level: f64,
}

impl Objective for Constant {
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, _x: &Point) -> f64 {
        self.level
    }
    fn gradient(&self, _x: &Point) -> Vec<f64> {
        vec![0.0; self.dim]
    }
}

/// Linear function `⟨a, x⟩ + c`.
#[derive(Clone, Debug)]
pub struct Affine {
    pub slope: Vec<f64>,
    pub offset: f64,
}

impl Objective for Affine {
    fn dim(&self) -> usize {
        self.slope.len()
    }
    fn value(&self, x: &Point) -> f64 {
        x.dot(&self.slope) + self.offset
    }
    fn gradient(&self, _x: &Point) -> Vec<f64> {
        self.slope.clone()
    }
}

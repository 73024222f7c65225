use crate::error::{invalid, Result};
use crate::objective::Objective;
use crate::point::Point;

/// Symmetric one-dimensional plateau/cliff function.
///
/// With `a = |x|` and `h = valley_width / 2`:
///
/// ```text
///   a ≤ h            valley_slope · a
///   h < a ≤ h + δ    valley_slope · h + cliff_slope · (a - h)
///   a > h + δ        valley_slope · h + cliff_height + plateau_slope · (a - h - δ)
/// ```
///
/// where `δ = cliff_height / cliff_slope`. Non-decreasing in `|x|`, so it is
/// quasi-convex, and its only minimum is `x = 0`. At kinks the slope of the
/// segment nearer the origin is used; at the origin the subgradient is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct CliffPlateau {
    pub valley_width: f64,
    pub cliff_height: f64,
    pub plateau_slope: f64,
    pub cliff_slope: f64,
    pub valley_slope: f64,
}

impl CliffPlateau {
    pub const DEFAULT_VALLEY_WIDTH: f64 = 0.5;
    pub const DEFAULT_CLIFF_HEIGHT: f64 = 10.0;
    pub const DEFAULT_PLATEAU_SLOPE: f64 = 1e-6;
    pub const DEFAULT_CLIFF_SLOPE: f64 = 1e3;
    pub const DEFAULT_VALLEY_SLOPE: f64 = 1.0;

    pub fn cliff_width(&self) -> f64 {
        self.cliff_height / self.cliff_slope
    }

    fn half_width(&self) -> f64 {
        self.valley_width / 2.0
    }

    /// `|x|` beyond which the plateau starts.
    pub fn plateau_start(&self) -> f64 {
        self.half_width() + self.cliff_width()
    }

    /// Slope of the piece containing `a = |x| ≥ 0`.
    fn slope_at(&self, a: f64) -> f64 {
        if a <= self.half_width() {
            self.valley_slope
        } else if a <= self.plateau_start() {
            self.cliff_slope
        } else {
            self.plateau_slope
        }
    }

    /// Distance from `x` to the valley `[-h, h]`.
    pub fn distance_to_valley(&self, x: f64) -> f64 {
        (x.abs() - self.half_width()).max(0.0)
    }
}

impl Default for CliffPlateau {
    fn default() -> Self {
        Self {
            valley_width: Self::DEFAULT_VALLEY_WIDTH,
            cliff_height: Self::DEFAULT_CLIFF_HEIGHT,
            plateau_slope: Self::DEFAULT_PLATEAU_SLOPE,
            cliff_slope: Self::DEFAULT_CLIFF_SLOPE,
            valley_slope: Self::DEFAULT_VALLEY_SLOPE,
        }
    }
}

pub fn make_cliff_plateau(
    valley_width: f64,
    cliff_height: f64,
    plateau_slope: f64,
) -> Result<CliffPlateau> {
    if !(valley_width.is_finite() && valley_width > 0.0) {
        return Err(invalid(
            "valley_width",
            format!("must be > 0, got {valley_width}"),
        ));
    }
    if !(cliff_height.is_finite() && cliff_height > 0.0) {
        return Err(invalid(
            "cliff_height",
            format!("must be > 0, got {cliff_height}"),
        ));
    }
    if !(plateau_slope.is_finite() && plateau_slope >= 0.0) {
        return Err(invalid(
            "plateau_slope",
            format!("must be ≥ 0, got {plateau_slope}"),
        ));
    }
    Ok(CliffPlateau {
        valley_width,
        cliff_height,
        plateau_slope,
        ..CliffPlateau::default()
    })
}

impl Objective for CliffPlateau {
    fn dim(&self) -> usize {
        1
    }

    fn value(&self, x: &Point) -> f64 {
        let a = x[0].abs();
        let h = self.half_width();
        if a <= h {
            self.valley_slope * a
        } else if a <= self.plateau_start() {
            self.valley_slope * h + self.cliff_slope * (a - h)
        } else {
            self.valley_slope * h
                + self.cliff_height
                + self.plateau_slope * (a - self.plateau_start())
        }
    }

    fn gradient(&self, x: &Point) -> Vec<f64> {
        let v = x[0];
        if v == 0.0 {
            return vec![0.0];
        }
        vec![v.signum() * self.slope_at(v.abs())]
    }
}

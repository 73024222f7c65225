use serde::{Deserialize, Serialize};

use crate::error::{check_dim, invalid, Result};
use crate::point::Point;

/// A closed convex set with a cheap Euclidean projection.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeasibleRegion {
    Ball { center: Point, radius: f64 },
    Box { lower: Point, upper: Point },
}

impl FeasibleRegion {
    pub fn ball(center: Point, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(invalid(
                "radius",
                format!("must be finite and > 0, got {radius}"),
            ));
        }
        Ok(Self::Ball { center, radius })
    }

    pub fn boxed(lower: Point, upper: Point) -> Result<Self> {
        check_dim(lower.dim(), upper.dim())?;
        if lower
            .coords()
            .iter()
            .zip(upper.coords())
            .any(|(l, u)| l > u)
        {
            return Err(invalid("box", "lower bound exceeds upper bound"));
        }
        Ok(Self::Box { lower, upper })
    }

    /// Axis-aligned cube `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::boxed(Point::new(vec![lo; dim])?, Point::new(vec![hi; dim])?)
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Ball { center, .. } => center.dim(),
            Self::Box { lower, .. } => lower.dim(),
        }
    }

    pub fn contains(&self, x: &Point) -> bool {
        if x.dim() != self.dim() {
            return false;
        }
        match self {
            Self::Ball { center, radius } => {
                within_radius(x.distance(center), *radius, radial_slack(center, *radius))
            }
            Self::Box { lower, upper } => x
                .coords()
                .iter()
                .zip(lower.coords().iter().zip(upper.coords()))
                .all(|(v, (l, u))| l <= v && v <= u),
        }
    }

    /// Euclidean projection onto the region. Members are returned unchanged.
    pub fn project(&self, x: &Point) -> Result<Point> {
        check_dim(self.dim(), x.dim())?;
        Ok(match self {
            Self::Ball { center, radius } => {
                let offset = x.sub(center);
                let dist = crate::point::norm(&offset);
                let slack = radial_slack(center, *radius);
                if within_radius(dist, *radius, slack) {
                    return Ok(x.clone());
                }
                let mut scale = radius / dist;
                let mut p = center.add_scaled(scale, &offset);
                // Rounding in `center + scale·offset` can overshoot when the
                // center is large next to the radius. Pull back until inside.
                while !within_radius(p.distance(center), *radius, slack) {
                    scale *= 1.0 - 4.0 * f64::EPSILON * (1.0 + center.norm() / radius);
                    p = center.add_scaled(scale, &offset);
                }
                p
            }
            Self::Box { lower, upper } => Point::from_vec_unchecked(
                x.coords()
                    .iter()
                    .zip(lower.coords().iter().zip(upper.coords()))
                    .map(|(v, (l, u))| v.clamp(*l, *u))
                    .collect(),
            ),
        })
    }
}

/// Ball membership with a few ulps of slack, so that a point produced by
/// radial projection counts as inside and projecting it again is a no-op.
fn within_radius(dist: f64, radius: f64, slack: f64) -> bool {
    dist <= radius + slack
}

/// Rounding error of `center + offset` is relative to both terms, so the
/// slack grows with the center's norm as well as the radius.
fn radial_slack(center: &Point, radius: f64) -> f64 {
    4.0 * f64::EPSILON * (radius + center.norm())
}

/// Free-function form of [`FeasibleRegion::project`].
pub fn project(region: &FeasibleRegion, x: &Point) -> Result<Point> {
    region.project(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn pt(v: &[f64]) -> Point {
        Point::new(v.to_vec()).unwrap()
    }

    #[test]
    fn ball_projection_is_radial() {
        let ball = FeasibleRegion::ball(pt(&[0.0, 0.0]), 1.0).unwrap();
        assert_eq!(project(&ball, &pt(&[2.0, 0.0])).unwrap(), pt(&[1.0, 0.0]));
    }

    #[test]
    fn small_ball_far_from_origin_contains_its_projections() {
        let ball = FeasibleRegion::ball(pt(&[-17.2230089494436]), 0.1).unwrap();
        let p = ball.project(&pt(&[0.0])).unwrap();
        assert!(ball.contains(&p));
        assert_eq!(ball.project(&p).unwrap(), p);
        assert!((p.coords()[0] + 17.1230089494436).abs() < 1e-12);
    }

    #[test]
    fn box_interior_point_is_fixed() {
        let cube = FeasibleRegion::cube(2, -10.0, 10.0).unwrap();
        assert_eq!(project(&cube, &pt(&[3.0, -4.0])).unwrap(), pt(&[3.0, -4.0]));
    }

    #[test]
    fn box_projection_clamps() {
        let unit = FeasibleRegion::cube(2, 0.0, 1.0).unwrap();
        assert_eq!(project(&unit, &pt(&[2.0, -1.0])).unwrap(), pt(&[1.0, 0.0]));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let unit = FeasibleRegion::cube(2, 0.0, 1.0).unwrap();
        assert!(matches!(
            project(&unit, &pt(&[0.5])),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 1
            })
        ));
    }

    #[test]
    fn invalid_regions_rejected() {
        assert!(FeasibleRegion::ball(pt(&[0.0]), 0.0).is_err());
        assert!(FeasibleRegion::boxed(pt(&[1.0]), pt(&[0.0])).is_err());
    }
}

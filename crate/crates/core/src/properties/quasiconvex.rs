use serde::{Deserialize, Serialize};

use crate::error::{check_dim, invalid, Result};
use crate::objective::Objective;
use crate::point::{dot, norm, Point};
use crate::region::FeasibleRegion;
use crate::rng::Stream;

/// Relative slack applied to comparisons of rounded quantities.
const REL_SLACK: f64 = 1e-10;

/// Whether the gradient form of quasi-convexity holds at the pair `(x, y)`:
/// `f(y) ≤ f(x)` must imply `⟨∇f(x), y − x⟩ ≤ 0`.
///
/// The inner product may exceed 0 by `1e-10 · ‖∇f(x)‖ ‖y − x‖` to absorb
/// rounding when `f(y)` and `f(x)` tie.
pub fn check_quasiconvex_grad<F: Objective + ?Sized>(f: &F, x: &Point, y: &Point) -> bool {
    if f.value(y) > f.value(x) {
        return true;
    }
    let g = f.gradient(x);
    let d = y.sub(x);
    dot(&g, &d) <= REL_SLACK * norm(&g) * norm(&d)
}

/// Uniform point in a ball or box.
pub fn sample_in(region: &FeasibleRegion, stream: &mut Stream) -> Point {
    match region {
        FeasibleRegion::Ball { center, radius } => {
            center.add_scaled(1.0, &stream.in_ball(center.dim(), *radius))
        }
        FeasibleRegion::Box { lower, upper } => Point::new(
            lower
                .coords()
                .iter()
                .zip(upper.coords())
                .map(|(&lo, &hi)| stream.uniform_range(lo, hi))
                .collect(),
        )
        .expect("finite box"),
    }
}

/// Random search for a pair violating [`check_quasiconvex_grad`].
pub fn search_quasiconvex_violation<F: Objective + ?Sized>(
    f: &F,
    region: &FeasibleRegion,
    trials: usize,
    stream: &mut Stream,
) -> Result<Option<(Point, Point)>> {
    check_dim(f.dim(), region.dim())?;
    for _ in 0..trials {
        let x = sample_in(region, stream);
        let y = sample_in(region, stream);
        if !check_quasiconvex_grad(f, &x, &y) {
            return Ok(Some((x, y)));
        }
    }
    Ok(None)
}

/// Settings for [`check_sublevel_convex`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SublevelCheck {
    pub alpha: f64,
    /// Region points are drawn from; only those in the sublevel set are kept.
    pub region: FeasibleRegion,
    /// Number of sampled pairs.
    pub trials: usize,
    /// Pairs tested before any sampling (midpoint and quartiles).
    #[serde(default)]
    pub seed_pairs: Vec<(Point, Point)>,
}

/// A convex combination that leaves the sublevel set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SublevelViolation {
    pub x: Point,
    pub y: Point,
    pub lambda: f64,
    pub point: Point,
    pub value: f64,
    pub alpha: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SublevelReport {
    pub convex: bool,
    pub alpha: f64,
    /// Pairs with both endpoints inside the sublevel set that were tested.
    pub pairs_tested: usize,
    pub points_sampled: usize,
    pub counterexample: Option<SublevelViolation>,
}

/// Looks for `x, y` with `f(x), f(y) ≤ α` and a convex combination above α.
///
/// Seed pairs are tested first at λ ∈ {1/2, 1/4, 3/4}. Sampled points are
/// drawn from `region`, kept if they lie in the sublevel set, and consecutive
/// kept points form a pair tested at the midpoint and at a random λ. A
/// combination counts as outside only if its value exceeds α by more than
/// `1e-10 · max(1, |α|)`. An empty sublevel set is vacuously convex.
pub fn check_sublevel_convex<F: Objective + ?Sized>(
    f: &F,
    check: &SublevelCheck,
    stream: &mut Stream,
) -> Result<SublevelReport> {
    let alpha = check.alpha;
    if !alpha.is_finite() {
        return Err(invalid("alpha", "must be finite"));
    }
    check_dim(f.dim(), check.region.dim())?;
    let limit = alpha + REL_SLACK * alpha.abs().max(1.0);
    let inside = |p: &Point| f.value(p) <= alpha;
    let violation = |x: &Point, y: &Point, lambda: f64| {
        let point = x.lerp(y, lambda);
        let value = f.value(&point);
        (value > limit).then(|| SublevelViolation {
            x: x.clone(),
            y: y.clone(),
            lambda,
            point,
            value,
            alpha,
        })
    };

    let mut report = SublevelReport {
        convex: true,
        alpha,
        pairs_tested: 0,
        points_sampled: 0,
        counterexample: None,
    };
    for (x, y) in &check.seed_pairs {
        check_dim(f.dim(), x.dim())?;
        check_dim(f.dim(), y.dim())?;
        if !(inside(x) && inside(y)) {
            continue;
        }
        report.pairs_tested += 1;
        if let Some(v) = [0.5, 0.25, 0.75]
            .into_iter()
            .find_map(|l| violation(x, y, l))
        {
            report.convex = false;
            report.counterexample = Some(v);
            return Ok(report);
        }
    }

    let mut pending: Option<Point> = None;
    // Each pair needs two kept points; cap total draws so an almost empty
    // sublevel set cannot stall the search.
    let max_draws = check.trials.saturating_mul(20).max(check.trials);
    while report.pairs_tested < check.trials + check.seed_pairs.len()
        && report.points_sampled < max_draws
    {
        let p = sample_in(&check.region, stream);
        report.points_sampled += 1;
        if !inside(&p) {
            continue;
        }
        let Some(x) = pending.take() else {
            pending = Some(p);
            continue;
        };
        report.pairs_tested += 1;
        let lambda = stream.uniform();
        if let Some(v) = violation(&x, &p, 0.5).or_else(|| violation(&x, &p, lambda)) {
            report.convex = false;
            report.counterexample = Some(v);
            return Ok(report);
        }
    }
    Ok(report)
}

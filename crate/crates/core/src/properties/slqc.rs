use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, invalid, Result};
use crate::objective::Objective;
use crate::optimizers::DEFAULT_GRAD_TOL;
use crate::point::{norm, Point};

/// One strict-local-quasi-convexity question: is `f` (ε, κ, z)-SLQC at `x`?
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlqcQuery {
    pub eps: f64,
    pub kappa: f64,
    pub z: Point,
    pub x: Point,
    /// Use the direction oracle in place of the gradient.
    #[serde(default)]
    pub use_oracle: bool,
}

impl SlqcQuery {
    pub fn new(eps: f64, kappa: f64, z: Point, x: Point) -> Self {
        Self {
            eps,
            kappa,
            z,
            x,
            use_oracle: false,
        }
    }

    pub fn with_oracle(mut self) -> Self {
        self.use_oracle = true;
        self
    }

    fn validate(&self, dim: usize) -> Result<()> {
        for (name, v) in [("eps", self.eps), ("kappa", self.kappa)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(name, format!("must be finite and > 0, got {v}")));
            }
        }
        check_dim(dim, self.z.dim())?;
        check_dim(dim, self.x.dim())
    }
}

/// Which clause certified the point. Serialized as `1` or `2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum SlqcClause {
    /// `f(x) − f(z) ≤ ε`.
    NearOptimal,
    /// The direction is nonzero and points away from the whole ball `B(z, ε/κ)`.
    Direction,
}

impl From<SlqcClause> for u8 {
    fn from(c: SlqcClause) -> u8 {
        match c {
            SlqcClause::NearOptimal => 1,
            SlqcClause::Direction => 2,
        }
    }
}

impl TryFrom<u8> for SlqcClause {
    type Error = String;
    fn try_from(v: u8) -> Result<Self, String> {
        match v {
            1 => Ok(Self::NearOptimal),
            2 => Ok(Self::Direction),
            _ => Err(format!("SLQC clause must be 1 or 2, got {v}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlqcReport {
    pub holds: bool,
    pub clause: Option<SlqcClause>,
    /// Slack of the certifying clause. On failure, the larger (less violated)
    /// of the two clause margins; the direction margin only counts when the
    /// direction is nonzero.
    pub margin: f64,
    pub grad_norm: f64,
}

/// Decides SLQC at `q.x` exactly.
///
/// The direction clause asks that `⟨g, y − x⟩ ≤ 0` for every `y` in the ball
/// `B(z, ε/κ)`. The maximum of this linear function over the ball is
/// `⟨g, z − x⟩ + (ε/κ)‖g‖`, so the clause holds iff `‖g‖ > grad_tol` and that
/// number is ≤ 0.
pub fn check_slqc<F: Objective + ?Sized>(f: &F, q: &SlqcQuery) -> Result<SlqcReport> {
    q.validate(f.dim())?;
    let g = if q.use_oracle {
        f.direction(&q.x)
    } else {
        f.gradient(&q.x)
    };
    Ok(decide(f.value(&q.x) - f.value(&q.z), &g, q))
}

/// [`check_slqc`] against the direction oracle.
pub fn check_slqc_oracle<F: Objective + ?Sized>(f: &F, q: &SlqcQuery) -> Result<SlqcReport> {
    if !f.has_direction_oracle() {
        return Err(invalid("f", "objective has no direction oracle"));
    }
    check_slqc(f, &q.clone().with_oracle())
}

fn decide(gap: f64, g: &[f64], q: &SlqcQuery) -> SlqcReport {
    let grad_norm = norm(g);
    let near = q.eps - gap;
    if near >= 0.0 {
        return SlqcReport {
            holds: true,
            clause: Some(SlqcClause::NearOptimal),
            margin: near,
            grad_norm,
        };
    }
    let ball_max = crate::point::dot(g, &q.z.sub(&q.x)) + (q.eps / q.kappa) * grad_norm;
    let direction = -ball_max;
    if grad_norm > DEFAULT_GRAD_TOL && direction >= 0.0 {
        return SlqcReport {
            holds: true,
            clause: Some(SlqcClause::Direction),
            margin: direction,
            grad_norm,
        };
    }
    let margin = if grad_norm > DEFAULT_GRAD_TOL {
        near.max(direction)
    } else {
        near
    };
    SlqcReport {
        holds: false,
        clause: None,
        margin,
        grad_norm,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlqcBatchEntry {
    pub query: SlqcQuery,
    pub report: SlqcReport,
}

/// Results of many SLQC queries against one objective.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlqcBatch {
    pub entries: Vec<SlqcBatchEntry>,
    pub passed: usize,
    pub failed: usize,
}

impl SlqcBatch {
    pub fn all_hold(&self) -> bool {
        self.failed == 0
    }

    pub fn counterexamples(&self) -> impl Iterator<Item = &SlqcBatchEntry> {
        self.entries.iter().filter(|e| !e.report.holds)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Runs every query (in parallel) and collects the reports in input order.
pub fn check_slqc_batch<F: Objective + ?Sized>(
    f: &F,
    queries: Vec<SlqcQuery>,
) -> Result<SlqcBatch> {
    let entries = queries
        .into_par_iter()
        .map(|query| {
            let report = check_slqc(f, &query)?;
            Ok(SlqcBatchEntry { query, report })
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = entries.iter().filter(|e| e.report.holds).count();
    Ok(SlqcBatch {
        failed: entries.len() - passed,
        passed,
        entries,
    })
}

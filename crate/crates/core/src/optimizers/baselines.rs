//! Unnormalized first-order baselines.
//!
//! A non-finite value or gradient ends the run with
//! [`TraceStatus::NonFinite`] instead of an error: divergence of a baseline is
//! an outcome worth recording.

use crate::error::{check_dim, invalid, Result};
use crate::objective::{Objective, StochasticObjective};
use crate::point::{norm, Point};
use crate::rng::Stream;
use crate::trace::{OptTrace, TraceBuilder, TraceStatus};

use super::StepSchedule;

/// Gradient descent with optional heavy-ball momentum.
pub fn gd<F: Objective + ?Sized>(
    f: &F,
    schedule: &StepSchedule,
    iterations: usize,
    x1: &Point,
) -> Result<OptTrace> {
    validate(schedule, iterations, f.dim(), x1, 1)?;
    run(schedule, iterations, x1, |x, _| {
        let g = f.gradient(x);
        (f.value(x), g, None)
    })
}

/// Minibatch SGD with optional heavy-ball momentum:
/// `v ← μ v − η_t ∇f_t(x)`, `x ← x + v`.
pub fn msgd<F: StochasticObjective + ?Sized>(
    dist: &F,
    schedule: &StepSchedule,
    iterations: usize,
    x1: &Point,
    b: usize,
    stream: &mut Stream,
) -> Result<OptTrace> {
    validate(schedule, iterations, dist.dim(), x1, b)?;
    run(schedule, iterations, x1, |x, _| {
        let batch = dist.sample_minibatch(stream, b);
        (batch.value(x), batch.gradient(x), Some(batch.origin.word))
    })
}

/// [`msgd`] with single-sample minibatches.
pub fn sgd<F: StochasticObjective + ?Sized>(
    dist: &F,
    schedule: &StepSchedule,
    iterations: usize,
    x1: &Point,
    stream: &mut Stream,
) -> Result<OptTrace> {
    msgd(dist, schedule, iterations, x1, 1, stream)
}

/// Stochastic Nesterov momentum in look-ahead form:
/// `v ← μ v − η_t ∇f_t(x + μ v)`, `x ← x + v`.
///
/// The recorded value is `f_t(x)`; the recorded gradient norm is taken at the
/// look-ahead point.
pub fn nesterov<F: StochasticObjective + ?Sized>(
    dist: &F,
    schedule: &StepSchedule,
    iterations: usize,
    x1: &Point,
    b: usize,
    stream: &mut Stream,
) -> Result<OptTrace> {
    validate(schedule, iterations, dist.dim(), x1, b)?;
    let mu = schedule.momentum;
    run(schedule, iterations, x1, |x, velocity| {
        let batch = dist.sample_minibatch(stream, b);
        let ahead = x.add_scaled(mu, velocity);
        (
            batch.value(x),
            batch.gradient(&ahead),
            Some(batch.origin.word),
        )
    })
}

fn validate(
    schedule: &StepSchedule,
    iterations: usize,
    dim: usize,
    x1: &Point,
    b: usize,
) -> Result<()> {
    schedule.validate()?;
    if iterations == 0 {
        return Err(invalid("iterations", "must be ≥ 1"));
    }
    if b == 0 {
        return Err(invalid("b", "must be ≥ 1"));
    }
    check_dim(dim, x1.dim())
}

/// Shared momentum loop. `oracle(x, v)` returns the recorded value, the
/// gradient to step along, and the minibatch id.
fn run(
    schedule: &StepSchedule,
    iterations: usize,
    x1: &Point,
    mut oracle: impl FnMut(&Point, &[f64]) -> (f64, Vec<f64>, Option<u64>),
) -> Result<OptTrace> {
    let mu = schedule.momentum;
    let mut x = x1.clone();
    let mut velocity = vec![0.0; x.dim()];
    let mut trace = TraceBuilder::with_capacity(iterations);
    for t in 1..=iterations {
        let (value, g, id) = oracle(&x, &velocity);
        let gn = norm(&g);
        let what = if !value.is_finite() {
            Some("value")
        } else if !gn.is_finite() || !x.is_finite() {
            Some("gradient")
        } else {
            None
        };
        if let Some(what) = what {
            let status = TraceStatus::NonFinite {
                iteration: t,
                what: what.to_string(),
            };
            return Ok(trace.finish(status, &x));
        }
        trace.push(x.clone(), value, gn, id);
        let eta = schedule.eta(t - 1);
        for (v, gi) in velocity.iter_mut().zip(&g) {
            *v = mu * *v - eta * gi;
        }
        x = x.add_scaled(1.0, &velocity);
    }
    Ok(trace.finish(TraceStatus::Completed, &x))
}

use crate::error::{invalid, Error, Result};
use crate::objective::{Objective, StochasticObjective};
use crate::point::{norm, Point};
use crate::rng::Stream;
use crate::trace::{OptTrace, TraceBuilder, TraceStatus};

use super::{NgdConfig, SngdConfig};

/// Normalized gradient descent, `x ← x − η g/‖g‖`.
///
/// Runs `cfg.iterations` steps and returns the first iterate with the lowest
/// recorded value. A deterministic run whose gradient falls to `grad_tol`
/// cannot move again, so it stops there with
/// [`TraceStatus::VanishingGradient`].
pub fn ngd<F: Objective + ?Sized>(f: &F, cfg: &NgdConfig) -> Result<OptTrace> {
    run_deterministic(f, cfg, false)
}

/// [`ngd`] driven by the objective's direction oracle instead of its
/// gradient.
pub fn ngd_with_oracle<F: Objective + ?Sized>(f: &F, cfg: &NgdConfig) -> Result<OptTrace> {
    if !f.has_direction_oracle() {
        return Err(invalid("f", "objective has no direction oracle"));
    }
    run_deterministic(f, cfg, true)
}

fn run_deterministic<F: Objective + ?Sized>(
    f: &F,
    cfg: &NgdConfig,
    oracle: bool,
) -> Result<OptTrace> {
    cfg.validate(f.dim())?;
    let mut x = cfg.start()?;
    let mut trace = TraceBuilder::with_capacity(cfg.iterations);
    for t in 1..=cfg.iterations {
        let value = f.value(&x);
        let g = if oracle {
            f.direction(&x)
        } else {
            f.gradient(&x)
        };
        let gn = norm(&g);
        check_finite(t, value, gn, &trace, &x)?;
        trace.push(x.clone(), value, gn, None);
        if gn <= cfg.grad_tol {
            let fallback = x.clone();
            return Ok(trace.finish(TraceStatus::VanishingGradient { iteration: t }, &fallback));
        }
        x = step(&x, cfg, &g, gn)?;
    }
    let fallback = x.clone();
    Ok(trace.finish(TraceStatus::Completed, &fallback))
}

/// Stochastic normalized gradient descent.
///
/// Each iteration draws a fresh minibatch `f_t` from `stream` and steps along
/// the normalized gradient of `f_t` (or its direction oracle, when the
/// components carry one). `values` holds `f_t(x_t)` and the returned point
/// minimizes those minibatch values. A vanishing minibatch gradient skips the
/// update but the run continues with the next draw.
pub fn sngd<F: StochasticObjective + ?Sized>(
    dist: &F,
    cfg: &SngdConfig,
    stream: &mut Stream,
) -> Result<OptTrace> {
    cfg.validate(dist.dim())?;
    let ngd = &cfg.ngd;
    let mut x = ngd.start()?;
    let mut trace = TraceBuilder::with_capacity(ngd.iterations);
    for t in 1..=ngd.iterations {
        let batch = dist.sample_minibatch(stream, cfg.b);
        let value = batch.value(&x);
        let g = batch.direction(&x);
        let gn = norm(&g);
        check_finite(t, value, gn, &trace, &x)?;
        trace.push(x.clone(), value, gn, Some(batch.origin.word));
        if gn > ngd.grad_tol {
            x = step(&x, ngd, &g, gn)?;
        }
    }
    let fallback = x.clone();
    Ok(trace.finish(TraceStatus::Completed, &fallback))
}

fn step(x: &Point, cfg: &NgdConfig, g: &[f64], gn: f64) -> Result<Point> {
    let next = x.add_scaled(-cfg.eta / gn, g);
    match &cfg.region {
        Some(r) => r.project(&next),
        None => Ok(next),
    }
}

fn check_finite(t: usize, value: f64, gn: f64, trace: &TraceBuilder, x: &Point) -> Result<()> {
    let what = if !value.is_finite() {
        "value"
    } else if !gn.is_finite() {
        "gradient"
    } else {
        return Ok(());
    };
    let partial = trace.clone().finish(
        TraceStatus::NonFinite {
            iteration: t,
            what: what.to_string(),
        },
        x,
    );
    Err(Error::Aborted {
        iteration: t,
        what,
        trace: Box::new(partial),
    })
}

//! Monte-Carlo certificate that SNGD with minibatch `⌈0.2/ε⌉` fails on the
//! lower-bound distribution.
//!
//! Right of the optimum a batch-mean gradient is negative whenever every
//! component in the batch is linear, so the iterate steps away from the
//! optimum with probability at least `(1 − ε)^b`. Reaching the ε-optimal set
//! from `x₁ = 0` then needs a rare excursion of `1/η − 1` net steps against
//! that drift.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::optimizers::DEFAULT_GRAD_TOL;
use crate::point::norm;
use crate::problems::{make_lower_bound_distribution, LowerBoundDistribution, LOWER_BOUND_OPTIMUM};
use crate::rng::Stream;

use super::markov::{absorb_probability, ChainSpec, McEstimate};

/// Largest hit fraction a run may show and still pass.
pub const MAX_HIT_FRACTION: f64 = 1e-4;

/// Minibatch size `⌈0.2/ε⌉` used by the experiment.
pub fn lower_bound_minibatch(eps: f64) -> u64 {
    super::ceil_count(0.2 / eps).expect("eps validated")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundReport {
    pub eps: f64,
    pub b: u64,
    pub eta: f64,
    pub iterations: u64,
    pub trials: u64,
    /// Frequency of a nonnegative batch-mean gradient over batches drawn
    /// right of the optimum.
    pub p_hat: f64,
    pub p_hat_se: f64,
    pub batches_observed: u64,
    /// `1 − p̂`: frequency of a step away from the optimum.
    pub negative_mean_fraction: f64,
    /// `(1 − ε)^b`.
    pub negative_mean_bound: f64,
    pub hits: u64,
    pub hit_fraction: f64,
    pub hit_fraction_se: f64,
    /// Absorb probability with `p = 0.2` from `1/η − 1` steps away.
    pub analytic_ceiling: f64,
    /// The same with `p = p̂`.
    pub empirical_ceiling: f64,
    pub max_hit_fraction: f64,
    pub p_hat_ok: bool,
    pub negative_mean_ok: bool,
    pub hit_fraction_ok: bool,
    pub passed: bool,
}

impl LowerBoundReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// What one simulated run saw.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TrialOutcome {
    /// One-based iteration at which the ε-optimal set was first entered.
    pub first_hit: Option<u64>,
    pub batches_right: u64,
    pub nonneg_right: u64,
}

/// One SNGD run on the lower-bound distribution from `x₁ = 0`.
///
/// Performs the same draws and floating-point operations as
/// [`crate::optimizers::sngd`] on this distribution, without building a
/// trace. With `stop_on_hit` the run ends at the first ε-optimal iterate.
/// `path`, when given, receives every iterate.
pub fn simulate_lower_bound_trial(
    dist: &LowerBoundDistribution,
    b: u64,
    eta: f64,
    iterations: u64,
    stream: &mut Stream,
    stop_on_hit: bool,
    mut path: Option<&mut Vec<f64>>,
) -> TrialOutcome {
    let expected = dist.expectation();
    // The hit test is slightly generous so that rounding at the boundary of
    // the ε-optimal set can only add hits.
    let hit_gap = dist.eps() * (1.0 + 1e-9);
    let floor = expected.min_value();
    let mut out = TrialOutcome::default();
    let mut x = 0.0f64;
    for t in 1..=iterations {
        if let Some(p) = path.as_deref_mut() {
            p.push(x);
        }
        if out.first_hit.is_none() && expected.eval(x) - floor <= hit_gap {
            out.first_hit = Some(t);
            if stop_on_hit {
                break;
            }
        }
        let mut g = 0.0f64;
        for k in 0..b {
            let slope = dist.draw_component(stream).slope(x);
            g += (slope - g) / (k + 1) as f64;
        }
        if x > LOWER_BOUND_OPTIMUM {
            out.batches_right += 1;
            out.nonneg_right += u64::from(g >= 0.0);
        }
        let gn = norm(&[g]);
        if gn > DEFAULT_GRAD_TOL {
            x += (-eta / gn) * g;
        }
    }
    out
}

/// Runs `trials` independent SNGD runs with `b = ⌈0.2/ε⌉`, `η = ε`,
/// `x₁ = 0` for `iterations` steps each. Trial `k` uses `stream.substream(k)`.
pub fn lower_bound_experiment(
    eps: f64,
    trials: u64,
    iterations: u64,
    stream: &Stream,
) -> Result<LowerBoundReport> {
    let dist = make_lower_bound_distribution(eps)?;
    if trials == 0 {
        return Err(invalid("trials", "must be ≥ 1"));
    }
    if iterations == 0 {
        return Err(invalid("iterations", "must be ≥ 1"));
    }
    let b = lower_bound_minibatch(eps);
    let eta = eps;
    let (hits, batches, nonneg) = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut s = stream.substream(k);
            let o = simulate_lower_bound_trial(&dist, b, eta, iterations, &mut s, true, None);
            (
                u64::from(o.first_hit.is_some()),
                o.batches_right,
                o.nonneg_right,
            )
        })
        .reduce(|| (0, 0, 0), |a, c| (a.0 + c.0, a.1 + c.1, a.2 + c.2));

    let p = McEstimate::from_counts(nonneg, batches.max(1));
    let hit = McEstimate::from_counts(hits, trials);
    let steps = (1.0 / eta).round() as u64 - 1;
    let analytic_ceiling = absorb_probability(&ChainSpec::new(0.2, steps, 1))?;
    let empirical_ceiling = if p.estimate > 0.0 {
        absorb_probability(&ChainSpec::new(p.estimate.min(0.5), steps, 1))?
    } else {
        0.0
    };
    let negative_mean_bound = (1.0 - eps).powi(b as i32);
    let p_hat_ok = p.estimate <= 0.2 + 3.0 * p.standard_error;
    let negative_mean_ok = 1.0 - p.estimate >= negative_mean_bound - 3.0 * p.standard_error;
    let hit_fraction_ok = hit.estimate <= MAX_HIT_FRACTION;
    Ok(LowerBoundReport {
        eps,
        b,
        eta,
        iterations,
        trials,
        p_hat: p.estimate,
        p_hat_se: p.standard_error,
        batches_observed: batches,
        negative_mean_fraction: 1.0 - p.estimate,
        negative_mean_bound,
        hits,
        hit_fraction: hit.estimate,
        hit_fraction_se: hit.standard_error,
        analytic_ceiling,
        empirical_ceiling,
        max_hit_fraction: MAX_HIT_FRACTION,
        p_hat_ok,
        negative_mean_ok,
        hit_fraction_ok,
        passed: p_hat_ok && negative_mean_ok && hit_fraction_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizers::{sngd, NgdConfig, SngdConfig};
    use crate::point::Point;
    use crate::rng::seeded_stream;

    #[test]
    fn fast_loop_matches_generic_sngd_bit_for_bit() {
        for (eps, seed) in [(0.1, 1u64), (0.05, 2), (0.1, 3)] {
            let dist = make_lower_bound_distribution(eps).unwrap();
            let b = lower_bound_minibatch(eps);
            let cfg = SngdConfig::new(NgdConfig::new(3000, eps, Point::zeros(1)), b as usize);
            let root = seeded_stream(seed);
            let trace = sngd(&dist, &cfg, &mut root.substream(7)).unwrap();
            let mut path = Vec::new();
            simulate_lower_bound_trial(
                &dist,
                b,
                eps,
                3000,
                &mut root.substream(7),
                false,
                Some(&mut path),
            );
            let generic: Vec<f64> = trace.iterates.iter().map(|x| x[0]).collect();
            assert_eq!(path.len(), generic.len());
            assert!(path
                .iter()
                .zip(&generic)
                .all(|(a, b)| a.to_bits() == b.to_bits()));
        }
    }

    #[test]
    fn short_run_from_origin_stays_right() {
        let dist = make_lower_bound_distribution(0.1).unwrap();
        let mut s = seeded_stream(5);
        let o = simulate_lower_bound_trial(&dist, 2, 0.1, 10, &mut s, true, None);
        assert_eq!(o.first_hit, None);
        assert_eq!(o.batches_right, 10);
    }

    #[test]
    fn small_experiment_passes() {
        let r = lower_bound_experiment(0.1, 2000, 2000, &seeded_stream(6)).unwrap();
        assert_eq!(r.b, 2);
        assert!(r.passed, "{r:?}");
        assert!((r.analytic_ceiling - 0.25f64.powi(9)).abs() < 1e-18);
        assert!(r.negative_mean_fraction > 0.79);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(lower_bound_experiment(0.2, 10, 10, &seeded_stream(1)).is_err());
        assert!(lower_bound_experiment(0.1, 0, 10, &seeded_stream(1)).is_err());
    }

    #[test]
    fn minibatch_sizes() {
        assert_eq!(lower_bound_minibatch(0.1), 2);
        assert_eq!(lower_bound_minibatch(0.05), 4);
        assert_eq!(lower_bound_minibatch(0.03), 7);
    }
}

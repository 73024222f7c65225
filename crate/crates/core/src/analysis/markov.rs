//! Biased random walk on {0, 1, 2, ...} absorbed at 0.
//!
//! From state `i ≥ 1` the walk moves to `i − 1` with probability `p` and to
//! `i + 1` otherwise. For `p < 1/2` the absorb probability from `i` is
//! `(p/(1 − p))^i`; for `p ≥ 1/2` absorption is certain.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::rng::{bernoulli_threshold, Stream};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    /// Probability of a step toward the absorbing state.
    pub p: f64,
    pub start: u64,
    /// Monte-Carlo truncation: walks still alive after this many steps count
    /// as never absorbed.
    pub max_steps: u64,
}

impl ChainSpec {
    pub fn new(p: f64, start: u64, max_steps: u64) -> Self {
        Self {
            p,
            start,
            max_steps,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(invalid("p", format!("must lie in (0, 1), got {}", self.p)));
        }
        Ok(())
    }
}

/// Exact absorb probability.
pub fn absorb_probability(spec: &ChainSpec) -> Result<f64> {
    spec.validate()?;
    if spec.start == 0 || spec.p >= 0.5 {
        return Ok(1.0);
    }
    let ratio = spec.p / (1.0 - spec.p);
    Ok(ratio.powf(spec.start as f64))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub standard_error: f64,
    pub hits: u64,
    pub trials: u64,
}

impl McEstimate {
    pub(crate) fn from_counts(hits: u64, trials: u64) -> Self {
        let n = trials as f64;
        let p = hits as f64 / n;
        Self {
            estimate: p,
            standard_error: (p * (1.0 - p) / n).sqrt(),
            hits,
            trials,
        }
    }

    /// Whether `value` lies within `k` standard errors of the estimate. With
    /// no observed variance the comparison uses one count's worth of
    /// resolution, `1/trials`.
    pub fn within(&self, value: f64, k: f64) -> bool {
        let se = self.standard_error.max(1.0 / self.trials as f64);
        (self.estimate - value).abs() <= k * se
    }
}

/// Fraction of simulated walks absorbed within `max_steps` steps.
///
/// Trial `k` draws from `stream.substream(k)`, so the estimate does not depend
/// on how trials are scheduled across threads. Truncation can only lose
/// absorptions, so the estimate is biased downward.
pub fn absorb_probability_mc(spec: &ChainSpec, trials: u64, stream: &Stream) -> Result<McEstimate> {
    spec.validate()?;
    if spec.max_steps == 0 {
        return Err(invalid("max_steps", "must be ≥ 1"));
    }
    if trials == 0 {
        return Err(invalid("trials", "must be ≥ 1"));
    }
    let down = bernoulli_threshold(spec.p);
    let hits = (0..trials)
        .into_par_iter()
        .filter(|&k| {
            let mut s = stream.substream(k);
            walk_absorbed(spec.start, spec.max_steps, down, &mut s)
        })
        .count() as u64;
    Ok(McEstimate::from_counts(hits, trials))
}

fn walk_absorbed(start: u64, max_steps: u64, down: u64, stream: &mut Stream) -> bool {
    let mut state = start;
    for _ in 0..max_steps {
        if state == 0 {
            return true;
        }
        if stream.bernoulli(down) {
            state -= 1;
        } else {
            state += 1;
        }
    }
    state == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded_stream;

    #[test]
    fn analytic_values() {
        let a = |p, i| absorb_probability(&ChainSpec::new(p, i, 1)).unwrap();
        assert_eq!(a(0.2, 1), 0.25);
        assert!((a(0.2, 9) - 0.25f64.powi(9)).abs() < 1e-20);
        assert!((a(0.2, 9) - 3.81e-6).abs() < 1e-8);
        assert_eq!(a(0.3, 0), 1.0);
        assert_eq!(a(0.5, 7), 1.0);
        assert_eq!(a(0.7, 3), 1.0);
        assert!(absorb_probability(&ChainSpec::new(1.0, 1, 1)).is_err());
    }

    #[test]
    fn start_at_zero_is_absorbed() {
        let e = absorb_probability_mc(&ChainSpec::new(0.2, 0, 10), 100, &seeded_stream(1)).unwrap();
        assert_eq!(e.hits, 100);
    }

    #[test]
    fn monte_carlo_agrees_on_small_case() {
        let spec = ChainSpec::new(0.2, 1, 1000);
        let e = absorb_probability_mc(&spec, 100_000, &seeded_stream(2)).unwrap();
        assert!(e.within(0.25, 3.0), "{e:?}");
    }

    #[test]
    fn truncation_biases_downward() {
        // Near-fair walks need long excursions; a short horizon misses most.
        let spec = ChainSpec::new(0.5 - 1e-9, 1, 10);
        let e = absorb_probability_mc(&spec, 20_000, &seeded_stream(3)).unwrap();
        assert!(e.estimate < 0.9);
        assert!(absorb_probability(&spec).unwrap() > 0.999_999);
    }

    #[test]
    fn estimate_is_schedule_independent() {
        let spec = ChainSpec::new(0.3, 2, 200);
        let s = seeded_stream(4);
        let a = absorb_probability_mc(&spec, 5000, &s).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(3)
            .build()
            .unwrap();
        let b = pool.install(|| absorb_probability_mc(&spec, 5000, &s).unwrap());
        assert_eq!(a, b);
    }
}

//! Sigmoid regression: the idealized (realizable) and noisy settings.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::objective::{Objective, StochasticObjective};
use crate::point::Point;
use crate::region::FeasibleRegion;
use crate::rng::Stream;

use super::{sigmoid, sigmoid_prime};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlmSample {
    pub x: Vec<f64>,
    pub y: f64,
}

/// Samples `(xᵢ, yᵢ)` with `yᵢ ∈ [0, 1]`, plus the planted predictor if known.
///
/// Generated datasets also keep `‖xᵢ‖ ≤ 1`; [`make_nonqc_counterexample`] is
/// the one place that does not, since its textbook points have norm `log 4`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlmDataset {
    pub samples: Vec<GlmSample>,
    /// Radius bound `W` on the planted predictor.
    pub w_radius: f64,
    pub planted: Option<Point>,
    pub seed: Option<u64>,
}

impl GlmDataset {
    pub fn m(&self) -> usize {
        self.samples.len()
    }

    pub fn dim(&self) -> usize {
        self.samples.first().map_or(0, |s| s.x.len())
    }

    /// Checks dimensions, label range and finiteness.
    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        if d == 0 {
            return Err(invalid("samples", "dataset is empty"));
        }
        if !(self.w_radius.is_finite() && self.w_radius > 0.0) {
            return Err(invalid("w_radius", "must be finite and > 0"));
        }
        for s in &self.samples {
            crate::error::check_dim(d, s.x.len())?;
            if !s.x.iter().all(|v| v.is_finite()) {
                return Err(crate::Error::NonFinite { what: "feature" });
            }
            if !(0.0..=1.0).contains(&s.y) {
                return Err(invalid("y", format!("label {} outside [0, 1]", s.y)));
            }
        }
        if let Some(w) = &self.planted {
            crate::error::check_dim(d, w.dim())?;
        }
        Ok(())
    }

    /// Whether every `yᵢ = σ⟨w*, xᵢ⟩` to within `tol`.
    pub fn is_realizable(&self, tol: f64) -> bool {
        match &self.planted {
            Some(w) => self
                .samples
                .iter()
                .all(|s| (s.y - sigmoid(w.dot(&s.x))).abs() <= tol),
            None => false,
        }
    }

    pub fn objective(&self) -> GlmObjective {
        GlmObjective {
            xs: self.samples.iter().map(|s| s.x.clone()).collect(),
            ys: self.samples.iter().map(|s| s.y).collect(),
            dim: self.dim(),
            domain: None,
        }
    }
}

/// Empirical squared error `(1/m) Σ (yᵢ - σ⟨w, xᵢ⟩)²`.
#[derive(Clone, Debug)]
pub struct GlmObjective {
    xs: Vec<Vec<f64>>,
    ys: Vec<f64>,
    dim: usize,
    domain: Option<FeasibleRegion>,
}

impl GlmObjective {
    pub fn with_domain(mut self, domain: FeasibleRegion) -> Self {
        self.domain = Some(domain);
        self
    }
}

impl Objective for GlmObjective {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, w: &Point) -> f64 {
        let m = self.ys.len() as f64;
        self.xs
            .iter()
            .zip(&self.ys)
            .map(|(x, y)| {
                let r = y - sigmoid(w.dot(x));
                r * r
            })
            .sum::<f64>()
            / m
    }

    fn gradient(&self, w: &Point) -> Vec<f64> {
        let m = self.ys.len() as f64;
        let mut g = vec![0.0; self.dim];
        for (x, y) in self.xs.iter().zip(&self.ys) {
            let z = w.dot(x);
            let coef = 2.0 * sigmoid_prime(z) * (sigmoid(z) - y) / m;
            g.iter_mut().zip(x).for_each(|(gi, xi)| *gi += coef * xi);
        }
        g
    }

    fn domain(&self) -> Option<&FeasibleRegion> {
        self.domain.as_ref()
    }
}

fn check_sizes(d: usize, w_radius: f64) -> Result<()> {
    if d == 0 {
        return Err(invalid("d", "must be ≥ 1"));
    }
    if !(w_radius.is_finite() && w_radius > 0.0) {
        return Err(invalid("W", format!("must be > 0, got {w_radius}")));
    }
    Ok(())
}

/// Realizable sigmoid regression: `xᵢ` uniform in the unit ball, `w*` uniform
/// in `B(0, W)`, `yᵢ = σ⟨w*, xᵢ⟩`. The objective's domain is `B(0, W)`.
pub fn make_idealized_glm(
    stream: &mut Stream,
    d: usize,
    m: usize,
    w_radius: f64,
) -> Result<(GlmDataset, GlmObjective)> {
    check_sizes(d, w_radius)?;
    if m == 0 {
        return Err(invalid("m", "must be ≥ 1"));
    }
    let seed = stream.seed();
    let w_star = Point::new(stream.in_ball(d, w_radius))?;
    let samples = (0..m)
        .map(|_| {
            let x = stream.in_ball(d, 1.0);
            let y = sigmoid(w_star.dot(&x));
            GlmSample { x, y }
        })
        .collect();
    let data = GlmDataset {
        samples,
        w_radius,
        planted: Some(w_star),
        seed: Some(seed),
    };
    let obj = data
        .objective()
        .with_domain(FeasibleRegion::ball(Point::zeros(d), w_radius)?);
    Ok((data, obj))
}

/// Two-sample realizable problem whose error is not quasi-convex:
/// `x₁ = (0, -log 4)`, `x₂ = (-log 4, 0)`, `y₁ = y₂ = 1/5`, `w* = (1, 1)`.
pub fn make_nonqc_counterexample() -> (GlmDataset, GlmObjective) {
    let l4 = 4f64.ln();
    let data = GlmDataset {
        samples: vec![
            GlmSample {
                x: vec![0.0, -l4],
                y: 0.2,
            },
            GlmSample {
                x: vec![-l4, 0.0],
                y: 0.2,
            },
        ],
        w_radius: std::f64::consts::SQRT_2,
        planted: Some(Point::new(vec![1.0, 1.0]).expect("finite")),
        seed: None,
    };
    let obj = data.objective();
    (data, obj)
}

/// Witness pair `w₁ = (3, 1)`, `w₂ = (1, 3)` whose midpoint leaves the
/// sublevel set of the counterexample.
pub fn counterexample_witnesses() -> (Point, Point) {
    (
        Point::new(vec![3.0, 1.0]).expect("finite"),
        Point::new(vec![1.0, 3.0]).expect("finite"),
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoisyGlmConfig {
    pub dim: usize,
    /// `W`: the planted predictor is drawn uniformly in `B(0, W)`.
    pub w_radius: f64,
    /// Noise amplitude in `[0, 1]`; see [`make_noisy_glm`].
    pub noise_level: f64,
    /// Number of feature vectors in the population.
    pub pool_size: usize,
}

impl Default for NoisyGlmConfig {
    fn default() -> Self {
        Self {
            dim: 5,
            w_radius: 2.0,
            noise_level: 1.0,
            pool_size: 4096,
        }
    }
}

/// One component `ψ(w) = (y - σ⟨w, x⟩)²`.
#[derive(Clone, Debug)]
pub struct GlmComponent {
    pub x: Arc<[f64]>,
    pub y: f64,
}

impl Objective for GlmComponent {
    fn dim(&self) -> usize {
        self.x.len()
    }

    fn value(&self, w: &Point) -> f64 {
        let r = self.y - sigmoid(w.dot(&self.x));
        r * r
    }

    fn gradient(&self, w: &Point) -> Vec<f64> {
        let z = w.dot(&self.x);
        let coef = 2.0 * sigmoid_prime(z) * (sigmoid(z) - self.y);
        self.x.iter().map(|xi| coef * xi).collect()
    }
}

/// Exact expected error of the noisy GLM population.
#[derive(Clone, Debug)]
pub struct NoisyGlmExpected {
    pool: Vec<Arc<[f64]>>,
    means: Vec<f64>,
    noise_variance: f64,
}

impl NoisyGlmExpected {
    /// `E[ξ²]` averaged over the population; the value of `ℰ(w*)`.
    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }
}

impl Objective for NoisyGlmExpected {
    fn dim(&self) -> usize {
        self.pool[0].len()
    }

    fn value(&self, w: &Point) -> f64 {
        let n = self.means.len() as f64;
        let fit: f64 = self
            .pool
            .iter()
            .zip(&self.means)
            .map(|(x, mu)| {
                let r = mu - sigmoid(w.dot(x));
                r * r
            })
            .sum();
        fit / n + self.noise_variance
    }

    fn gradient(&self, w: &Point) -> Vec<f64> {
        let n = self.means.len() as f64;
        let mut g = vec![0.0; self.dim()];
        for (x, mu) in self.pool.iter().zip(&self.means) {
            let z = w.dot(x);
            let coef = 2.0 * sigmoid_prime(z) * (sigmoid(z) - mu) / n;
            g.iter_mut()
                .zip(x.iter())
                .for_each(|(gi, xi)| *gi += coef * xi);
        }
        g
    }
}

/// Noisy sigmoid regression.
///
/// `x` is uniform over a fixed population of `pool_size` points drawn
/// uniformly in the unit ball. Given the population index `i`, the label is
/// `y = μᵢ + ξ` with `μᵢ = σ⟨w*, xᵢ⟩` and `ξ` uniform on `[-aᵢ, aᵢ]`,
/// `aᵢ = noise_level · min(μᵢ, 1 - μᵢ)`, so `E[y | x] = μᵢ` and `y ∈ [0, 1]`.
/// The expected error is then exactly
/// `ℰ(w) = (1/N) Σ (μᵢ - σ⟨w, xᵢ⟩)² + (1/N) Σ aᵢ²/3`.
#[derive(Clone, Debug)]
pub struct NoisyGlm {
    config: NoisyGlmConfig,
    w_star: Point,
    amplitudes: Vec<f64>,
    expected: NoisyGlmExpected,
}

impl NoisyGlm {
    pub fn planted(&self) -> &Point {
        &self.w_star
    }

    pub fn config(&self) -> &NoisyGlmConfig {
        &self.config
    }

    pub fn expected_error(&self) -> &NoisyGlmExpected {
        &self.expected
    }

    /// `ℰ(w) - ℰ(w*)`.
    pub fn excess_risk(&self, w: &Point) -> f64 {
        self.expected.value(w) - self.expected.value(&self.w_star)
    }
}

pub fn make_noisy_glm(stream: &mut Stream, config: NoisyGlmConfig) -> Result<NoisyGlm> {
    check_sizes(config.dim, config.w_radius)?;
    if !(0.0..=1.0).contains(&config.noise_level) {
        return Err(invalid("noise_level", "must lie in [0, 1]"));
    }
    if config.pool_size == 0 {
        return Err(invalid("pool_size", "must be ≥ 1"));
    }
    let d = config.dim;
    let w_star = Point::new(stream.in_ball(d, config.w_radius))?;
    let pool: Vec<Arc<[f64]>> = (0..config.pool_size)
        .map(|_| Arc::from(stream.in_ball(d, 1.0)))
        .collect();
    let means: Vec<f64> = pool.iter().map(|x| sigmoid(w_star.dot(x))).collect();
    let amplitudes: Vec<f64> = means
        .iter()
        .map(|mu| config.noise_level * mu.min(1.0 - mu))
        .collect();
    let noise_variance =
        amplitudes.iter().map(|a| a * a / 3.0).sum::<f64>() / config.pool_size as f64;
    Ok(NoisyGlm {
        config,
        w_star,
        amplitudes,
        expected: NoisyGlmExpected {
            pool,
            means,
            noise_variance,
        },
    })
}

impl StochasticObjective for NoisyGlm {
    type Component = GlmComponent;

    fn dim(&self) -> usize {
        self.config.dim
    }

    fn draw(&self, stream: &mut Stream) -> GlmComponent {
        let i = stream.index(self.expected.pool.len());
        let a = self.amplitudes[i];
        let noise = if a > 0.0 {
            stream.uniform_range(-a, a)
        } else {
            0.0
        };
        GlmComponent {
            x: self.expected.pool[i].clone(),
            y: (self.expected.means[i] + noise).clamp(0.0, 1.0),
        }
    }

    /// `y, σ ∈ [0, 1]` so `|ψ| ≤ 1`.
    fn bound_m(&self) -> f64 {
        1.0
    }

    fn expected(&self) -> Option<&dyn Objective> {
        Some(&self.expected)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded_stream;

    /// Independent re-implementation of the empirical error.
    fn err_oracle(data: &GlmDataset, w: &[f64]) -> f64 {
        let mut total = 0.0;
        for s in &data.samples {
            let mut z = 0.0;
            for (wk, xk) in w.iter().zip(&s.x) {
                z += wk * xk;
            }
            let p = 1.0 / (1.0 + (-z).exp());
            total += (s.y - p).powi(2);
        }
        total / data.samples.len() as f64
    }

    #[test]
    fn idealized_planted_point_is_a_zero() {
        let mut s = seeded_stream(5);
        let (data, f) = make_idealized_glm(&mut s, 3, 50, 2.0).unwrap();
        let w = data.planted.clone().unwrap();
        assert!(w.norm() <= 2.0);
        assert!(data.samples.iter().all(|s| crate::point::norm(&s.x) <= 1.0));
        assert!(data.is_realizable(0.0));
        assert_eq!(f.value(&w), 0.0);
        assert!(f.gradient(&w).iter().all(|g| *g == 0.0));
    }

    #[test]
    fn idealized_error_matches_summation_oracle() {
        let mut s = seeded_stream(9);
        let (data, f) = make_idealized_glm(&mut s, 3, 50, 2.0).unwrap();
        let zero = Point::zeros(3);
        assert!((f.value(&zero) - err_oracle(&data, &[0.0; 3])).abs() < 1e-12);
        let w = Point::new(vec![0.3, -1.2, 0.8]).unwrap();
        assert!((f.value(&w) - err_oracle(&data, w.coords())).abs() < 1e-12);
    }

    #[test]
    fn counterexample_values() {
        let (_, f) = make_nonqc_counterexample();
        let (w1, w2) = counterexample_witnesses();
        let wstar = Point::new(vec![1.0, 1.0]).unwrap();
        assert!(f.value(&wstar).abs() <= 1e-12);
        assert!(f.value(&w1) <= 0.018);
        assert!(f.value(&w2) <= 0.018);
        assert!(f.value(&w1.lerp(&w2, 0.5)) >= 0.019);
    }

    #[test]
    fn noisy_components_are_bounded() {
        let mut s = seeded_stream(3);
        let glm = make_noisy_glm(&mut s, NoisyGlmConfig::default()).unwrap();
        assert_eq!(glm.bound_m(), 1.0);
        let w = Point::new(vec![5.0, -5.0, 1.0, 0.0, 2.0]).unwrap();
        for _ in 0..2000 {
            let c = glm.draw(&mut s);
            assert!((0.0..=1.0).contains(&c.y));
            let v = c.value(&w);
            assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn minibatch_value_is_component_mean() {
        let mut s = seeded_stream(4);
        let glm = make_noisy_glm(&mut s, NoisyGlmConfig::default()).unwrap();
        let w = Point::new(vec![0.1, 0.2, -0.3, 0.4, 0.0]).unwrap();
        let mb = glm.sample_minibatch(&mut s, 37);
        let direct: f64 = mb.components.iter().map(|c| c.value(&w)).sum::<f64>() / 37.0;
        assert!((mb.value(&w) - direct).abs() < 1e-12);
    }

    #[test]
    fn zero_noise_components_vanish_at_planted_point() {
        let mut s = seeded_stream(6);
        let cfg = NoisyGlmConfig {
            noise_level: 0.0,
            ..NoisyGlmConfig::default()
        };
        let glm = make_noisy_glm(&mut s, cfg).unwrap();
        let w = glm.planted().clone();
        for _ in 0..100 {
            assert_eq!(glm.draw(&mut s).value(&w), 0.0);
        }
        assert_eq!(glm.expected_error().noise_variance(), 0.0);
    }

    #[test]
    fn expected_error_matches_monte_carlo() {
        let mut s = seeded_stream(8);
        let glm = make_noisy_glm(&mut s, NoisyGlmConfig::default()).unwrap();
        let w = Point::new(vec![0.5, 0.5, -0.5, 0.0, 1.0]).unwrap();
        let n = 200_000;
        let vals: Vec<f64> = (0..n).map(|_| glm.draw(&mut s).value(&w)).collect();
        let mean = vals.iter().sum::<f64>() / n as f64;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();
        let exact = glm.expected_error().value(&w);
        assert!(
            (mean - exact).abs() <= 4.0 * se,
            "{mean} vs {exact} (se {se})"
        );
        assert!(glm.excess_risk(glm.planted()).abs() < 1e-15);
        assert!(glm.excess_risk(&w) > 0.0);
    }
}

//! γ-margin Perceptron with the zero-one squared error and its direction
//! oracle `𝒢(w) = (1/m) Σ (φ⟨w, xᵢ⟩ - yᵢ) xᵢ`, `φ(z) = 1{z ≥ 0}`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::objective::Objective;
use crate::point::Point;
use crate::rng::Stream;

use super::glm::GlmSample;

/// Labels are in `{0, 1}`. The margin is read with signed labels:
/// `(2yᵢ - 1)⟨w*, xᵢ⟩ ≥ γ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerceptronDataset {
    pub samples: Vec<GlmSample>,
    pub gamma: f64,
    pub planted: Point,
    pub seed: Option<u64>,
}

impl PerceptronDataset {
    pub fn m(&self) -> usize {
        self.samples.len()
    }

    pub fn dim(&self) -> usize {
        self.planted.dim()
    }

    /// Smallest signed margin of the planted separator.
    pub fn planted_margin(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| (2.0 * s.y - 1.0) * self.planted.dot(&s.x))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples.is_empty() {
            return Err(invalid("samples", "dataset is empty"));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(invalid("gamma", "must lie in (0, 1)"));
        }
        for s in &self.samples {
            crate::error::check_dim(self.dim(), s.x.len())?;
            if s.y != 0.0 && s.y != 1.0 {
                return Err(invalid("y", format!("label {} is not 0 or 1", s.y)));
            }
        }
        if self.planted_margin() < self.gamma {
            return Err(invalid("planted", "margin condition violated"));
        }
        Ok(())
    }

    pub fn objective(&self) -> PerceptronObjective {
        PerceptronObjective {
            xs: self.samples.iter().map(|s| s.x.clone()).collect(),
            ys: self.samples.iter().map(|s| s.y).collect(),
            dim: self.dim(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PerceptronObjective {
    xs: Vec<Vec<f64>>,
    ys: Vec<f64>,
    dim: usize,
}

impl PerceptronObjective {
    pub fn from_samples(samples: &[GlmSample]) -> Result<Self> {
        let dim = samples
            .first()
            .map(|s| s.x.len())
            .ok_or_else(|| invalid("samples", "dataset is empty"))?;
        Ok(Self {
            xs: samples.iter().map(|s| s.x.clone()).collect(),
            ys: samples.iter().map(|s| s.y).collect(),
            dim,
        })
    }
}

#[inline]
fn step(z: f64) -> f64 {
    if z >= 0.0 {
        1.0
    } else {
        0.0
    }
}

impl Objective for PerceptronObjective {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, w: &Point) -> f64 {
        let wrong = self
            .xs
            .iter()
            .zip(&self.ys)
            .filter(|(x, y)| step(w.dot(x)) != **y)
            .count();
        wrong as f64 / self.ys.len() as f64
    }

    /// Zero almost everywhere.
    fn gradient(&self, _w: &Point) -> Vec<f64> {
        vec![0.0; self.dim]
    }

    fn direction(&self, w: &Point) -> Vec<f64> {
        let m = self.ys.len() as f64;
        let mut g = vec![0.0; self.dim];
        for (x, y) in self.xs.iter().zip(&self.ys) {
            let r = step(w.dot(x)) - y;
            if r != 0.0 {
                g.iter_mut().zip(x).for_each(|(gi, xi)| *gi += r * xi);
            }
        }
        g.iter_mut().for_each(|gi| *gi /= m);
        g
    }

    fn has_direction_oracle(&self) -> bool {
        true
    }
}

/// Draws a unit-norm separator `w*` and rejection-samples `xᵢ` uniform in the
/// unit ball with `|⟨w*, xᵢ⟩| ≥ γ`, labelled `yᵢ = 1{⟨w*, xᵢ⟩ ≥ 0}`.
pub fn make_perceptron(
    stream: &mut Stream,
    d: usize,
    m: usize,
    gamma: f64,
) -> Result<(PerceptronDataset, PerceptronObjective)> {
    if d == 0 || m == 0 {
        return Err(invalid("d/m", "must be ≥ 1"));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(invalid("gamma", format!("must lie in (0, 1), got {gamma}")));
    }
    let seed = stream.seed();
    let w_star = Point::new(stream.on_sphere(d))?;
    let budget = m.saturating_mul(1000);
    let mut attempts = 0;
    let mut samples = Vec::with_capacity(m);
    while samples.len() < m {
        if attempts == budget {
            return Err(Error::RejectionBudget { attempts });
        }
        attempts += 1;
        let x = stream.in_ball(d, 1.0);
        let z = w_star.dot(&x);
        if z.abs() >= gamma {
            samples.push(GlmSample { x, y: step(z) });
        }
    }
    let data = PerceptronDataset {
        samples,
        gamma,
        planted: w_star,
        seed: Some(seed),
    };
    let obj = data.objective();
    Ok((data, obj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded_stream;

    #[test]
    fn planted_separator_is_exact() {
        let mut s = seeded_stream(21);
        let (data, f) = make_perceptron(&mut s, 5, 200, 0.2).unwrap();
        data.validate().unwrap();
        assert!(data.planted_margin() >= 0.2);
        assert_eq!(f.value(&data.planted), 0.0);
        assert!(f.direction(&data.planted).iter().all(|g| *g == 0.0));
    }

    #[test]
    fn values_are_fractions() {
        let mut s = seeded_stream(22);
        let (_, f) = make_perceptron(&mut s, 4, 50, 0.1).unwrap();
        for _ in 0..100 {
            let w = Point::new(s.in_ball(4, 3.0)).unwrap();
            let v = f.value(&w);
            assert!((0.0..=1.0).contains(&v));
            assert!(((v * 50.0).round() - v * 50.0).abs() < 1e-9);
        }
    }

    #[test]
    fn all_zero_labels_oracle_is_mean_of_misclassified() {
        let samples = vec![
            GlmSample {
                x: vec![0.5, 0.0],
                y: 0.0,
            },
            GlmSample {
                x: vec![-0.5, 0.2],
                y: 0.0,
            },
            GlmSample {
                x: vec![0.1, 0.3],
                y: 0.0,
            },
        ];
        let f = PerceptronObjective::from_samples(&samples).unwrap();
        let w = Point::new(vec![1.0, 0.0]).unwrap();
        // Points 0 and 2 have ⟨w, x⟩ ≥ 0, so they are misclassified.
        let g = f.direction(&w);
        assert!((g[0] - 0.6 / 3.0).abs() < 1e-15);
        assert!((g[1] - 0.3 / 3.0).abs() < 1e-15);
        assert!((f.value(&w) - 2.0 / 3.0).abs() < 1e-15);
        let good = Point::new(vec![-1.0, -10.0]).unwrap();
        assert_eq!(f.value(&good), 0.0);
    }

    #[test]
    fn impossible_margin_exhausts_budget() {
        let mut s = seeded_stream(23);
        assert!(matches!(
            make_perceptron(&mut s, 50, 5, 0.99),
            Err(Error::RejectionBudget { .. })
        ));
    }
}

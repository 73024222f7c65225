//! Deterministic and stochastic objective abstractions.

use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::point::Point;
use crate::region::FeasibleRegion;
use crate::rng::{Stream, StreamPosition};

/// A differentiable function `ℝᵈ → ℝ`.
///
/// Implementations must be deterministic for a fixed point. `direction`
/// defaults to the gradient; objectives whose gradient is uninformative (the
/// zero-one Perceptron loss) override it with a direction oracle.
pub trait Objective: Send + Sync {
    fn dim(&self) -> usize;

    fn value(&self, x: &Point) -> f64;

    fn gradient(&self, x: &Point) -> Vec<f64>;

    fn direction(&self, x: &Point) -> Vec<f64> {
        self.gradient(x)
    }

    fn has_direction_oracle(&self) -> bool {
        false
    }

    /// Region the objective is meant to be optimized over, if any.
    fn domain(&self) -> Option<&FeasibleRegion> {
        None
    }
}

impl<T: Objective + ?Sized> Objective for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: &Point) -> f64 {
        (**self).value(x)
    }
    fn gradient(&self, x: &Point) -> Vec<f64> {
        (**self).gradient(x)
    }
    fn direction(&self, x: &Point) -> Vec<f64> {
        (**self).direction(x)
    }
    fn has_direction_oracle(&self) -> bool {
        (**self).has_direction_oracle()
    }
    fn domain(&self) -> Option<&FeasibleRegion> {
        (**self).domain()
    }
}

impl<T: Objective + ?Sized> Objective for Arc<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: &Point) -> f64 {
        (**self).value(x)
    }
    fn gradient(&self, x: &Point) -> Vec<f64> {
        (**self).gradient(x)
    }
    fn direction(&self, x: &Point) -> Vec<f64> {
        (**self).direction(x)
    }
    fn has_direction_oracle(&self) -> bool {
        (**self).has_direction_oracle()
    }
    fn domain(&self) -> Option<&FeasibleRegion> {
        (**self).domain()
    }
}

/// A distribution over component functions ψ, sampled in minibatches.
pub trait StochasticObjective: Send + Sync {
    type Component: Objective + Clone;

    fn dim(&self) -> usize;

    /// Draws one component ψ ∼ D.
    fn draw(&self, stream: &mut Stream) -> Self::Component;

    /// Uniform bound M on |ψ(x)|; infinite when the components are unbounded.
    fn bound_m(&self) -> f64;

    /// Closed-form `E[ψ]` when known.
    fn expected(&self) -> Option<&dyn Objective> {
        None
    }

    /// Mean of `b` independent draws.
    fn sample_minibatch(&self, stream: &mut Stream, b: usize) -> MinibatchFn<Self::Component> {
        let origin = stream.position();
        let components = (0..b).map(|_| self.draw(stream)).collect();
        MinibatchFn { components, origin }
    }
}

/// `f_t(x) = (1/b) Σ ψᵢ(x)` for one drawn minibatch.
///
/// Means are accumulated as running means, `m += (v - m) / k`. This equals the
/// arithmetic mean up to rounding and returns a component's own value bit for
/// bit when all components agree.
#[derive(Clone, Debug)]
pub struct MinibatchFn<C> {
    pub components: Vec<C>,
    pub origin: StreamPosition,
}

impl<C> MinibatchFn<C> {
    pub fn size(&self) -> usize {
        self.components.len()
    }
}

impl<C: Objective> MinibatchFn<C> {
    fn mean_vec(&self, x: &Point, each: impl Fn(&C, &Point) -> Vec<f64>) -> Vec<f64> {
        let mut mean = vec![0.0; x.dim()];
        for (k, c) in self.components.iter().enumerate() {
            let g = each(c, x);
            let k = (k + 1) as f64;
            for (m, gi) in mean.iter_mut().zip(g) {
                *m += (gi - *m) / k;
            }
        }
        mean
    }
}

impl<C: Objective> Objective for MinibatchFn<C> {
    fn dim(&self) -> usize {
        self.components.first().map_or(0, |c| c.dim())
    }

    fn value(&self, x: &Point) -> f64 {
        running_mean(self.components.iter().map(|c| c.value(x)))
    }

    fn gradient(&self, x: &Point) -> Vec<f64> {
        self.mean_vec(x, |c, x| c.gradient(x))
    }

    fn direction(&self, x: &Point) -> Vec<f64> {
        self.mean_vec(x, |c, x| c.direction(x))
    }

    fn has_direction_oracle(&self) -> bool {
        self.components
            .first()
            .is_some_and(|c| c.has_direction_oracle())
    }
}

pub(crate) fn running_mean(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut mean = 0.0;
    for (k, v) in values.into_iter().enumerate() {
        mean += (v - mean) / (k + 1) as f64;
    }
    mean
}

/// Central-difference gradient, `(f(x + h eᵢ) - f(x - h eᵢ)) / 2h`.
pub fn finite_diff_gradient<F: Objective + ?Sized>(f: &F, x: &Point, h: f64) -> Result<Vec<f64>> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(invalid("h", format!("must be > 0, got {h}")));
    }
    let mut grad = Vec::with_capacity(x.dim());
    let mut probe = x.coords().to_vec();
    for i in 0..x.dim() {
        let orig = probe[i];
        probe[i] = orig + h;
        let up = f.value(&Point::from_vec_unchecked(probe.clone()));
        probe[i] = orig - h;
        let down = f.value(&Point::from_vec_unchecked(probe.clone()));
        probe[i] = orig;
        if !(up.is_finite() && down.is_finite()) {
            return Err(Error::NonFinite {
                what: "function value",
            });
        }
        grad.push((up - down) / (2.0 * h));
    }
    Ok(grad)
}

/// `c · f` for a constant `c > 0`.
#[derive(Clone, Debug)]
pub struct Scaled<F> {
    pub inner: F,
    pub factor: f64,
}

impl<F: Objective> Objective for Scaled<F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn value(&self, x: &Point) -> f64 {
        self.factor * self.inner.value(x)
    }
    fn gradient(&self, x: &Point) -> Vec<f64> {
        self.inner
            .gradient(x)
            .into_iter()
            .map(|g| self.factor * g)
            .collect()
    }
    fn direction(&self, x: &Point) -> Vec<f64> {
        self.inner
            .direction(x)
            .into_iter()
            .map(|g| self.factor * g)
            .collect()
    }
    fn has_direction_oracle(&self) -> bool {
        self.inner.has_direction_oracle()
    }
    fn domain(&self) -> Option<&FeasibleRegion> {
        self.inner.domain()
    }
}

/// Zero-variance distribution: every draw is the same function.
#[derive(Clone, Debug)]
pub struct Degenerate<O> {
    pub component: O,
    pub bound: f64,
}

impl<O: Objective + Clone> Degenerate<O> {
    pub fn new(component: O) -> Self {
        Self {
            component,
            bound: f64::INFINITY,
        }
    }
}

impl<O: Objective + Clone> StochasticObjective for Degenerate<O> {
    type Component = O;

    fn dim(&self) -> usize {
        self.component.dim()
    }

    fn draw(&self, _stream: &mut Stream) -> O {
        self.component.clone()
    }

    fn bound_m(&self) -> f64 {
        self.bound
    }

    fn expected(&self) -> Option<&dyn Objective> {
        Some(&self.component)
    }
}

/// How [`FiniteSum`] fills a minibatch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampling {
    /// Independent uniform draws.
    WithReplacement,
    /// Distinct components from a fresh random permutation (`b ≤ n`).
    WithoutReplacement,
}

/// Uniform distribution over a finite list of components.
#[derive(Clone, Debug)]
pub struct FiniteSum<O> {
    components: Vec<O>,
    pub sampling: Sampling,
    pub bound: f64,
}

impl<O: Objective + Clone> FiniteSum<O> {
    pub fn new(components: Vec<O>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(invalid("components", "at least one component is required"));
        };
        let d = first.dim();
        if let Some(bad) = components.iter().find(|c| c.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bad.dim(),
            });
        }
        Ok(Self {
            components,
            sampling: Sampling::WithReplacement,
            bound: f64::INFINITY,
        })
    }

    pub fn with_sampling(mut self, sampling: Sampling) -> Self {
        self.sampling = sampling;
        self
    }

    pub fn components(&self) -> &[O] {
        &self.components
    }

    /// The full-sum objective `(1/n) Σ ψᵢ`.
    pub fn mean(&self) -> MinibatchFn<O> {
        MinibatchFn {
            components: self.components.clone(),
            origin: StreamPosition {
                seed: 0,
                stream: 0,
                word: 0,
            },
        }
    }
}

impl<O: Objective + Clone> StochasticObjective for FiniteSum<O> {
    type Component = O;

    fn dim(&self) -> usize {
        self.components[0].dim()
    }

    fn draw(&self, stream: &mut Stream) -> O {
        self.components[stream.index(self.components.len())].clone()
    }

    fn bound_m(&self) -> f64 {
        self.bound
    }

    fn sample_minibatch(&self, stream: &mut Stream, b: usize) -> MinibatchFn<O> {
        let origin = stream.position();
        let components = match self.sampling {
            Sampling::WithReplacement => (0..b).map(|_| self.draw(stream)).collect(),
            Sampling::WithoutReplacement => {
                let n = self.components.len();
                assert!(
                    b <= n,
                    "minibatch of {b} without replacement from {n} components"
                );
                let mut idx: Vec<usize> = (0..n).collect();
                // Partial Fisher-Yates.
                for i in 0..b {
                    let j = i + stream.index(n - i);
                    idx.swap(i, j);
                }
                idx[..b]
                    .iter()
                    .map(|&i| self.components[i].clone())
                    .collect()
            }
        };
        MinibatchFn { components, origin }
    }
}

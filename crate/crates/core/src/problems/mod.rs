//! Concrete objectives and distributions.

mod cliff;
pub mod dataset;
mod g;
mod glm;
mod lower_bound;
mod perceptron;
pub mod simple;

pub use cliff::{make_cliff_plateau, CliffPlateau};
pub use g::{make_g, SigmoidSum};
pub use glm::{
    counterexample_witnesses, make_idealized_glm, make_noisy_glm, make_nonqc_counterexample,
    GlmComponent, GlmDataset, GlmObjective, GlmSample, NoisyGlm, NoisyGlmConfig, NoisyGlmExpected,
};
pub use lower_bound::{
    make_lower_bound_distribution, LowerBoundComponent, LowerBoundDistribution, LowerBoundExpected,
    LOWER_BOUND_OPTIMUM,
};
pub use perceptron::{make_perceptron, PerceptronDataset, PerceptronObjective};

/// Logistic sigmoid, evaluated without overflow for any finite argument.
#[inline]
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Derivative of [`sigmoid`], `e^{-|z|} / (1 + e^{-|z|})²`.
#[inline]
pub fn sigmoid_prime(z: f64) -> f64 {
    let e = (-z.abs()).exp();
    e / ((1.0 + e) * (1.0 + e))
}

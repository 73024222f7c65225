//! Executable theory: iteration and minibatch budgets, the absorb-probability
//! oracle with its Monte-Carlo counterpart, and the minibatch lower-bound
//! experiment.

mod budgets;
mod lower_bound;
mod markov;

pub use budgets::{
    ceil_count, descent_probability_bound, glm_minibatch_b0, glm_sample_bound, ngd_budget,
    ngd_smooth_budget, sngd_budget, sngd_minibatch_bound, Budget, Provenance,
};
pub use lower_bound::{
    lower_bound_experiment, lower_bound_minibatch, simulate_lower_bound_trial, LowerBoundReport,
    TrialOutcome, MAX_HIT_FRACTION,
};
pub use markov::{absorb_probability, absorb_probability_mc, ChainSpec, McEstimate};

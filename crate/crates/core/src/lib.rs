//! Normalized gradient methods for strictly-locally-quasi-convex objectives.
//!
//! - [`optimizers`]: NGD, projected and direction-oracle NGD, SNGD, and the
//!   GD / MSGD / Nesterov baselines.
//! - [`problems`]: sigmoid sums, cliff/plateau functions, idealized and
//!   noisy GLM regression, the Perceptron margin problem, and the
//!   minibatch lower-bound distribution.
//! - [`properties`]: SLQC, quasi-convexity, sublevel-set and local
//!   Lipschitz/smoothness checkers.
//! - [`analysis`]: theorem budgets, absorb probabilities, and the
//!   lower-bound experiment.
//!
//! All randomness flows through [`rng::Stream`], a seeded ChaCha8 stream
//! whose substreams depend only on the parent seed and an index.

pub mod analysis;
pub mod error;
pub mod objective;
pub mod optimizers;
pub mod point;
pub mod problems;
pub mod properties;
pub mod region;
pub mod rng;
pub mod trace;

pub use error::{Error, Result};
pub use objective::{Objective, StochasticObjective};
pub use point::Point;
pub use region::FeasibleRegion;
pub use rng::{seeded_stream, Stream};
pub use trace::{OptTrace, TraceStatus};

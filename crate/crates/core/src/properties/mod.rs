//! Numerical checkers for the definitional properties behind the guarantees.
//!
//! The SLQC check is exact at the queried point. The sampling checkers report
//! "no counterexample in N trials", which is evidence rather than proof.

mod local;
mod quasiconvex;
mod slqc;

pub use local::{
    check_local_lipschitz, check_local_smooth, derive_slqc_from_lipschitz, LocalCheck, LocalReport,
    SlqcParams,
};
pub use quasiconvex::{
    check_quasiconvex_grad, check_sublevel_convex, sample_in, search_quasiconvex_violation,
    SublevelCheck, SublevelReport, SublevelViolation,
};
pub use slqc::{
    check_slqc, check_slqc_batch, check_slqc_oracle, SlqcBatch, SlqcBatchEntry, SlqcClause,
    SlqcQuery, SlqcReport,
};

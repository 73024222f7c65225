//! Worked scenarios for the optimizers and the analysis oracles.

mod common;

use common::*;
use slqc::analysis::{absorb_probability, absorb_probability_mc, ngd_budget, ChainSpec};
use slqc::optimizers::{gd, ngd, ngd_with_oracle, sngd, NgdConfig, SngdConfig, StepSchedule};
use slqc::problems::{
    make_cliff_plateau, make_lower_bound_distribution, make_perceptron, CliffPlateau,
};
use slqc::{seeded_stream, TraceStatus};

#[test]
fn ngd_crosses_the_cliff_that_stalls_gd() {
    let f = make_cliff_plateau(0.5, 10.0, 1e-6).unwrap();
    let eps = 0.1;
    let x1 = pt(&[10.0]);
    let tr = ngd(&f, &NgdConfig::new(6400, 1.0 / 8.0, x1.clone())).unwrap();
    assert!(tr.returned_value().unwrap() <= eps);

    let plain = gd(&f, &StepSchedule::constant(1e-3), 6400, &x1).unwrap();
    assert!(plain.returned_value().unwrap() > eps);
}

#[test]
fn gd_from_the_plateau_never_reaches_the_valley() {
    let f = CliffPlateau::default();
    let tr = gd(&f, &StepSchedule::constant(1e-3), 10_000, &pt(&[10.0])).unwrap();
    let last = tr.iterates.last().unwrap()[0];
    assert!(f.distance_to_valley(last) > f.valley_width);
}

#[test]
fn perceptron_training_with_the_direction_oracle() {
    let mut s = seeded_stream(2024);
    let (data, f) = make_perceptron(&mut s, 5, 200, 0.2).unwrap();
    let (eps, kappa) = (0.1, 2.0 / 0.2);
    let x1 = pt(&[0.0; 5]);
    let budget = ngd_budget(eps, kappa, x1.distance(&data.planted)).unwrap();
    assert_eq!(budget.iterations, 10_000);
    let tr = ngd_with_oracle(
        &f,
        &NgdConfig::new(budget.iterations as usize, budget.eta, x1),
    )
    .unwrap();
    assert!(tr.returned_value().unwrap() <= eps);

    // At the separator the oracle vanishes and the run stops at once.
    let at_opt = ngd_with_oracle(&f, &NgdConfig::new(50, 0.01, data.planted.clone())).unwrap();
    assert_eq!(
        at_opt.status,
        TraceStatus::VanishingGradient { iteration: 1 }
    );
    assert_eq!(at_opt.len(), 1);
    assert_eq!(at_opt.returned_value(), Some(0.0));
}

#[test]
fn small_minibatches_never_reach_the_optimal_segment() {
    let eps = 0.1;
    let dist = make_lower_bound_distribution(eps).unwrap();
    let cfg = SngdConfig::new(NgdConfig::new(10_000, eps, pt(&[0.0])), 2);
    let root = seeded_stream(31);
    for k in 0..1000 {
        let tr = sngd(&dist, &cfg, &mut root.substream(k)).unwrap();
        assert!(
            tr.iterates.iter().all(|x| !(-5.0..=-1.0).contains(&x[0])),
            "seed {k} entered the optimal segment"
        );
    }
}

#[test]
fn rare_absorption_matches_poisson_count() {
    let spec = ChainSpec::new(0.2, 9, 200);
    let exact = absorb_probability(&spec).unwrap();
    assert!((exact - 0.25f64.powi(9)).abs() < 1e-18);
    let trials = 1_000_000u64;
    let mc = absorb_probability_mc(&spec, trials, &seeded_stream(5)).unwrap();
    let mean = exact * trials as f64;
    assert!(
        (mc.hits as f64 - mean).abs() <= 4.0 * mean.sqrt() + 1.0,
        "hits {} vs {mean}",
        mc.hits
    );
}

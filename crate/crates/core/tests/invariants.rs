//! Property-based checks of the library's invariants.

mod common;

use common::*;
use proptest::prelude::*;
use slqc::analysis::{
    absorb_probability, descent_probability_bound, glm_sample_bound, ngd_budget, ngd_smooth_budget,
    sngd_minibatch_bound, ChainSpec,
};
use slqc::objective::{Degenerate, Scaled};
use slqc::optimizers::{ngd, sngd, NgdConfig, SngdConfig};
use slqc::problems::simple::{Affine, Cone, Quadratic};
use slqc::problems::{make_g, make_perceptron, SigmoidSum};
use slqc::properties::*;
use slqc::rng::bernoulli_threshold;
use slqc::trace::OptTrace;
use slqc::{seeded_stream, FeasibleRegion, Objective, Point};

fn vec_in(dim: usize, r: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-r..r, dim)
}

fn point_pair(r: f64) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..5).prop_flat_map(move |d| (vec_in(d, r), vec_in(d, r)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_lands_inside_and_is_idempotent(
        (x, c) in point_pair(20.0),
        radius in 0.1f64..5.0,
    ) {
        let ball = FeasibleRegion::ball(pt(&c), radius).unwrap();
        let p = ball.project(&pt(&x)).unwrap();
        prop_assert!(ball.contains(&p));
        prop_assert_eq!(ball.project(&p).unwrap(), p.clone());
        if ball.contains(&pt(&x)) {
            prop_assert_eq!(p, pt(&x));
        }
        let lo: Vec<f64> = c.iter().map(|v| v - radius).collect();
        let hi: Vec<f64> = c.iter().map(|v| v + radius).collect();
        let bx = FeasibleRegion::boxed(pt(&lo), pt(&hi)).unwrap();
        let q = bx.project(&pt(&x)).unwrap();
        prop_assert!(bx.contains(&q));
        prop_assert_eq!(bx.project(&q).unwrap(), q);
    }

    #[test]
    fn projection_is_nonexpansive((x, y) in point_pair(10.0), radius in 0.1f64..3.0) {
        let d = x.len();
        let ball = FeasibleRegion::ball(Point::zeros(d), radius).unwrap();
        let (px, py) = (ball.project(&pt(&x)).unwrap(), ball.project(&pt(&y)).unwrap());
        prop_assert!(px.distance(&py) <= pt(&x).distance(&pt(&y)) * (1.0 + 1e-12));
    }

    #[test]
    fn normalized_steps_have_length_eta(
        (c, x1) in point_pair(5.0),
        eta in 0.001f64..0.5,
    ) {
        let f = Quadratic::new(pt(&c));
        let tr = ngd(&f, &NgdConfig::new(200, eta, pt(&x1))).unwrap();
        for w in tr.iterates.windows(2) {
            prop_assert!((w[0].distance(&w[1]) - eta).abs() <= 1e-12 * eta.max(w[0].norm()));
        }
    }

    #[test]
    fn sngd_steps_have_length_eta(seed in any::<u64>(), eta in 0.01f64..0.3) {
        let mut s = seeded_stream(seed);
        let noisy = slqc::problems::make_noisy_glm(
            &mut s,
            slqc::problems::NoisyGlmConfig { dim: 3, pool_size: 64, ..Default::default() },
        ).unwrap();
        let cfg = SngdConfig::new(NgdConfig::new(100, eta, pt(&[1.0, -1.0, 0.5])), 3);
        let tr = sngd(&noisy, &cfg, &mut s).unwrap();
        for (k, w) in tr.iterates.windows(2).enumerate() {
            if tr.grad_norms[k] > 1e-12 {
                prop_assert!((w[0].distance(&w[1]) - eta).abs() <= 1e-12);
            }
        }
    }

    /// Weighted cones `‖diag(a)(x − c)‖` are (ε, max a, c)-SLQC. Every step
    /// from an iterate more than ε above the optimum shrinks the squared
    /// distance to `c` by at least ε²/κ².
    #[test]
    fn potential_decreases_on_slqc_runs(
        weights in prop::collection::vec(0.5f64..3.0, 1..4),
        seed in any::<u64>(),
        eps in 0.05f64..0.5,
    ) {
        let d = weights.len();
        let mut s = seeded_stream(seed);
        let center = s.in_ball(d, 2.0);
        let f = WeightedCone { weights: weights.clone(), center: center.clone() };
        let kappa = weights.iter().cloned().fold(0.0, f64::max);
        let x1 = pt(&center).add_scaled(1.0, &s.in_ball(d, 6.0));
        let c = pt(&center);
        let budget = ngd_budget(eps, kappa, x1.distance(&c)).unwrap();
        let tr = ngd(&f, &NgdConfig::new(budget.iterations as usize, budget.eta, x1)).unwrap();
        let mut consecutive = 0u64;
        for w in tr.iterates.windows(2) {
            if f.value(&w[0]) > eps {
                consecutive += 1;
                let drop = w[0].distance_sq(&c) - w[1].distance_sq(&c);
                prop_assert!(drop >= eps * eps / (kappa * kappa) * (1.0 - 1e-9));
            } else {
                consecutive = 0;
            }
            prop_assert!(consecutive <= budget.iterations);
        }
        prop_assert!(tr.returned_value().unwrap() <= eps);
    }

    #[test]
    fn zero_variance_sngd_is_ngd((c, x1) in point_pair(4.0), eta in 0.01f64..0.3, b in 1usize..6, seed in any::<u64>()) {
        let f = Quadratic::new(pt(&c));
        let cfg = NgdConfig::new(150, eta, pt(&x1));
        let exact = ngd(&f, &cfg).unwrap();
        // Deterministic runs stop at an exact zero gradient; compare the
        // common prefix in that case.
        let stoch = sngd(&Degenerate::new(f), &SngdConfig::new(cfg, b), &mut seeded_stream(seed)).unwrap();
        let n = exact.len();
        prop_assert_eq!(&exact.iterates[..], &stoch.iterates[..n]);
        prop_assert_eq!(&exact.values[..], &stoch.values[..n]);
    }

    #[test]
    fn power_of_two_scaling_leaves_ngd_unchanged((c, x1) in point_pair(4.0), k in -20i32..20) {
        let factor = 2f64.powi(k);
        let cfg = NgdConfig::new(100, 0.07, pt(&x1));
        let a = ngd(&Cone::new(pt(&c)), &cfg).unwrap();
        let b = ngd(&Scaled { inner: Cone::new(pt(&c)), factor }, &cfg).unwrap();
        prop_assert_eq!(a.iterates, b.iterates);
    }

    #[test]
    fn decimal_scaling_moves_iterates_by_rounding_only((c, x1) in point_pair(4.0), big in any::<bool>()) {
        let factor = if big { 100.0 } else { 0.01 };
        let cfg = NgdConfig::new(100, 0.07, pt(&x1));
        let a = ngd(&Quadratic::new(pt(&c)), &cfg).unwrap();
        let b = ngd(&Scaled { inner: Quadratic::new(pt(&c)), factor }, &cfg).unwrap();
        for (x, y) in a.iterates.iter().zip(&b.iterates) {
            prop_assert!(x.distance(y) <= 1e-12 * x.norm().max(1.0));
        }
    }

    #[test]
    fn clause_two_closed_form_bounds_sampled_maximum(
        (g, z) in point_pair(3.0),
        seed in any::<u64>(),
        eps in 0.01f64..1.0,
        kappa in 0.5f64..4.0,
    ) {
        let d = g.len();
        let mut s = seeded_stream(seed);
        let x = s.in_ball(d, 5.0);
        let r = eps / kappa;
        let gn = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        let inner = |y: &[f64]| (0..d).map(|i| g[i] * (y[i] - x[i])).sum::<f64>();
        let closed = inner(&z) + r * gn;
        let mut sampled = f64::NEG_INFINITY;
        for _ in 0..10_000 {
            let off = s.in_ball(d, r);
            let y: Vec<f64> = (0..d).map(|i| z[i] + off[i]).collect();
            sampled = sampled.max(inner(&y));
        }
        prop_assert!(sampled <= closed + 1e-12 * (1.0 + closed.abs()));
        if d <= 2 {
            prop_assert!(closed - sampled <= 0.05 * r * gn + 1e-12);
        }

        // The library verdict agrees with the closed form on an affine f.
        let f = Affine { slope: g.clone(), offset: 0.0 };
        let q = SlqcQuery::new(eps, kappa, pt(&z), pt(&x));
        let rep = check_slqc(&f, &q).unwrap();
        let gap = f.value(&pt(&x)) - f.value(&pt(&z));
        let want = gap <= eps || (gn > 1e-12 && closed <= 0.0);
        prop_assert_eq!(rep.holds, want);
        if rep.holds {
            prop_assert!(rep.margin >= 0.0);
        }
    }

    #[test]
    fn lipschitz_cone_is_slqc_everywhere(
        (c, x) in point_pair(5.0),
        eps in 0.001f64..2.0,
    ) {
        let q = SlqcQuery::new(eps, 1.0, pt(&c), pt(&x));
        prop_assert!(check_slqc(&Cone::new(pt(&c)), &q).unwrap().holds);
    }

    #[test]
    fn g_is_slqc_on_its_box(a in -10.0f64..=10.0, b in -10.0f64..=10.0, eps in 0.001f64..=1.0) {
        let q = SlqcQuery::new(eps, 1.0, SigmoidSum::minimizer(), pt(&[a, b]));
        prop_assert!(check_slqc(&make_g(), &q).unwrap().holds);
    }

    #[test]
    fn g_is_locally_lipschitz_and_smooth(a in -12.0f64..12.0, b in -12.0f64..12.0, seed in any::<u64>()) {
        let g = make_g();
        let mut s = seeded_stream(seed);
        let lip = LocalCheck { center: pt(&[a, b]), radius: 2.0, constant: 1.0, trials: 500 };
        prop_assert!(check_local_lipschitz(&g, &lip, &mut s).unwrap().holds);
        let smooth = LocalCheck { center: pt(&[a, b]), radius: 0.5, constant: 1.0, trials: 500 };
        prop_assert!(check_local_smooth(&g, &smooth, &mut s).unwrap().holds);
    }

    #[test]
    fn convex_functions_pass_gradient_quasiconvexity((x, y) in point_pair(5.0), c in prop::collection::vec(-2.0f64..2.0, 4)) {
        let d = x.len();
        let q = Quadratic::new(pt(&c[..d]));
        let cone = Cone::new(pt(&c[..d]));
        prop_assert!(check_quasiconvex_grad(&q, &pt(&x), &pt(&y)));
        prop_assert!(check_quasiconvex_grad(&cone, &pt(&x), &pt(&y)));
        let flat = slqc::problems::simple::Constant { dim: d, level: 3.0 };
        prop_assert!(check_quasiconvex_grad(&flat, &pt(&x), &pt(&y)));
    }

    #[test]
    fn substreams_ignore_parent_progress(seed in any::<u64>(), idx in any::<u64>(), skip in 0usize..50) {
        let a = seeded_stream(seed);
        let mut b = seeded_stream(seed);
        for _ in 0..skip {
            b.uniform();
        }
        let (mut sa, mut sb) = (a.substream(idx), b.substream(idx));
        for _ in 0..8 {
            prop_assert_eq!(sa.uniform().to_bits(), sb.uniform().to_bits());
        }
    }

    #[test]
    fn bernoulli_threshold_is_monotone(p in 0.0f64..1.0, q in 0.0f64..1.0) {
        let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
        prop_assert!(bernoulli_threshold(lo) <= bernoulli_threshold(hi));
    }

    #[test]
    fn trace_csv_round_trips_exactly((c, x1) in point_pair(3.0)) {
        let tr = ngd(&Quadratic::new(pt(&c)), &NgdConfig::new(20, 0.37, pt(&x1))).unwrap();
        let csv = tr.to_csv_string();
        let mut lines = csv.lines();
        let header = lines.next().unwrap();
        prop_assert!(header.starts_with("t,value,grad_norm,x0"));
        for (k, line) in lines.enumerate() {
            let cells: Vec<&str> = line.split(',').collect();
            prop_assert_eq!(cells[0].parse::<usize>().unwrap(), k + 1);
            prop_assert_eq!(cells[1].parse::<f64>().unwrap().to_bits(), tr.values[k].to_bits());
            prop_assert_eq!(cells[2].parse::<f64>().unwrap().to_bits(), tr.grad_norms[k].to_bits());
            for (i, cell) in cells[3..].iter().enumerate() {
                prop_assert_eq!(cell.parse::<f64>().unwrap().to_bits(), tr.iterates[k][i].to_bits());
            }
        }
        prop_assert!(!csv.contains('\r'));
        let mut json = Vec::new();
        tr.write_json(&mut json).unwrap();
        let back: OptTrace = serde_json::from_slice(&json).unwrap();
        prop_assert_eq!(back, tr);
    }

    #[test]
    fn budget_scaling(eps in 0.01f64..1.0, kappa in 0.1f64..10.0, dist in 0.1f64..10.0) {
        let t1 = ngd_budget(eps, kappa, dist).unwrap().iterations;
        let t2 = ngd_budget(eps, 2.0 * kappa, dist).unwrap().iterations;
        prop_assert!(t2 <= 4 * t1 && t2 + 4 >= 4 * t1);
        // Smooth budget is no larger whenever βε/2 ≤ G².
        let beta = 2.0 * kappa * kappa / eps;
        prop_assert!(ngd_smooth_budget(eps, beta, dist).unwrap().iterations <= t1);
    }

    #[test]
    fn minibatch_bound_scaling(eps in 0.01f64..0.2, t in 1u64..1_000_000, delta in 0.001f64..0.5) {
        let b1 = sngd_minibatch_bound(eps, delta, t, 1.0).unwrap();
        let b4 = sngd_minibatch_bound(4.0 * eps, delta, t, 1.0).unwrap();
        prop_assert!(b4 * 16 >= b1 && b4 * 16 <= b1 + 16);
        prop_assert_eq!(b1 as f64, hoeffding_b(eps, delta, t as f64, 1.0));
    }

    #[test]
    fn glm_bound_monotone(eps in 0.05f64..1.0, delta in 0.01f64..0.9, w in 0.0f64..3.0) {
        let base = glm_sample_bound(eps, delta, w).unwrap();
        prop_assert!(glm_sample_bound(eps, delta, w + 0.5).unwrap() >= base);
        prop_assert!(glm_sample_bound(eps * 1.5, delta, w).unwrap() <= base);
        prop_assert!(glm_sample_bound(eps, (delta * 1.05).min(1.0), w).unwrap() <= base);
    }

    #[test]
    fn absorb_probability_is_a_decreasing_power(p in 0.01f64..0.49, i in 1u64..30) {
        let a = absorb_probability(&ChainSpec::new(p, i, 1)).unwrap();
        let next = absorb_probability(&ChainSpec::new(p, i + 1, 1)).unwrap();
        prop_assert!(a > 0.0 && a < 1.0 && next < a);
        prop_assert!((a - (p / (1.0 - p)).powi(i as i32)).abs() <= 1e-14 * a.max(1e-300) + 1e-300);
    }

    /// Direction-oracle inequality behind the Perceptron guarantee.
    #[test]
    fn perceptron_oracle_points_away_from_optimum_ball(seed in any::<u64>(), eps in 0.05f64..0.9) {
        let mut s = seeded_stream(seed);
        let (data, f) = make_perceptron(&mut s, 4, 80, 0.2).unwrap();
        for _ in 0..20 {
            let w = Point::new(s.in_ball(4, 4.0)).unwrap();
            if f.value(&w) < eps {
                continue;
            }
            let v = data.planted.add_scaled(1.0, &s.in_ball(4, data.gamma * eps / 2.0));
            let g = f.direction(&w);
            prop_assert!(slqc::point::dot(&g, &w.sub(&v)) > 0.0);
        }
    }
}

#[test]
fn descent_probability_is_decreasing() {
    let grid: Vec<f64> = (1..=100).map(|k| k as f64 / 101.0).collect();
    let values: Vec<f64> = grid.iter().map(|&e| descent_probability_bound(e)).collect();
    assert!(values.windows(2).all(|w| w[1] < w[0]));
    assert!(descent_probability_bound(0.1) >= 0.8);
    assert!((descent_probability_bound(0.1) - 0.81).abs() < 1e-12);
}

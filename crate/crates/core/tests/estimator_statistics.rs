//! Statistical behaviour of the estimators against the linear-SDE oracle.

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use infoflow::dynamics::{preset, simulate, stationary_covariance, theoretical_budget, LinearSDE};
use infoflow::estimator::{
    fit_from_covariances, fit_linear_model, flow_bivariate, flow_from_fit, flow_multivariate, flow_panel,
    normalize_flows, self_contribution, self_from_fit,
};
use infoflow::moments::{CovarianceDivisor, SampleMoments};
use infoflow::{all_pairs, AnalysisOptions, PanelPairs, TimeSeriesSet};

fn ou2() -> LinearSDE {
    preset("ou2").unwrap().sde().unwrap()
}

fn ou2_set(n: usize, seed: u64) -> TimeSeriesSet {
    simulate(&ou2(), &[0.0, 0.0], n, 0.01, seed, Some(10_000))
        .unwrap()
        .into_series_set()
        .unwrap()
}

fn white_noise(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

#[test]
fn ou2_long_run_coefficients_budget_and_normalization() {
    let set = ou2_set(1_000_000, 3);
    let fit = fit_linear_model(&set, 0, 1).unwrap();
    for (j, truth) in [(0usize, -1.0), (1, 0.5)] {
        let z = (fit.coeffs[j] - truth).abs() / fit.coeff_se(j);
        assert!(z <= 3.0, "a_1{j} = {} is {z:.2} se from {truth}", fit.coeffs[j]);
    }

    // the self term of a linear system is a_ii; the oracle budget confirms it
    let budget = theoretical_budget(&ou2(), 0).unwrap();
    let flows_in: f64 = budget.flows.iter().map(|(_, t)| t).sum();
    assert!((budget.self_term + flows_in + budget.noise_term).abs() < 1e-12);
    let me = self_from_fit(&fit);
    assert!((me.value - budget.self_term).abs() <= 3.0 * me.std_err);

    // g = 1, sigma_11 = 0.5625: tau_{2->1} = (1/9) / (1/9 + 1 + 8/9)
    assert!((fit.g_hat - 1.0).abs() < 0.01, "g_hat {}", fit.g_hat);
    let f21 = flow_from_fit(&fit, 1).unwrap();
    let b = normalize_flows(&[f21], &me, &fit).unwrap();
    let tau = b.tau(1).unwrap();
    let expect: f64 = (1.0 / 9.0) / (1.0 / 9.0 + 1.0 + 8.0 / 9.0);
    assert!((expect - 0.0556).abs() < 1e-4);
    assert!((tau - expect).abs() <= 0.1 * expect, "tau {tau} vs {expect}");
}

#[test]
fn lag_k_keeps_noise_intensity_per_unit_time() {
    let set = ou2_set(400_000, 8);
    for k in [1, 2, 4] {
        let fit = fit_linear_model(&set, 1, k).unwrap();
        assert!((fit.g_hat - 1.0).abs() < 0.05 * k as f64, "k={k}: g_hat {}", fit.g_hat);
    }
}

#[test]
fn independent_white_noise_pair_is_rarely_significant() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let trials = 1000;
    let quiet = (0..trials)
        .filter(|_| {
            let x1 = white_noise(10_000, &mut rng);
            let x2 = white_noise(10_000, &mut rng);
            flow_bivariate(&x1, &x2, 1.0, 1).unwrap().p_value >= 0.05
        })
        .count();
    assert!(quiet as f64 >= 0.88 * trials as f64, "{quiet}/{trials} not significant");
}

#[test]
fn random_walk_self_contribution_is_near_zero() {
    // A row = 0: the target is a random walk; its self term vanishes
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let trials = 1000;
    let within = (0..trials)
        .filter(|_| {
            let steps = white_noise(10_000, &mut rng);
            let walk: Vec<f64> = steps
                .iter()
                .scan(0.0, |s, e| {
                    *s += e;
                    Some(*s)
                })
                .collect();
            let set = TimeSeriesSet::from_rows(vec![walk], 1.0).unwrap();
            let me = self_contribution(&set, 0, 1).unwrap();
            me.value.abs() <= 3.0 * me.std_err
        })
        .count();
    assert!(within as f64 >= 0.95 * trials as f64, "{within}/{trials} within 3 se");
}

#[test]
fn uncoupled_direction_interval_coverage() {
    let sde = ou2();
    let trials = 1000;
    let covered = (0..trials)
        .filter(|&seed| {
            let set = simulate(&sde, &[0.0, 0.0], 20_000, 0.05, 7_000 + seed, None)
                .unwrap()
                .into_series_set()
                .unwrap();
            let f = flow_multivariate(&set, 0, 1, 1).unwrap();
            f.ci95.0 <= 0.0 && 0.0 <= f.ci95.1
        })
        .count();
    let rate = covered as f64 / trials as f64;
    assert!((0.93..=0.97).contains(&rate), "coverage {rate}");
}

#[test]
fn covariance_divisor_cancels() {
    let set = ou2_set(50_000, 4);
    let step = set.dt();
    for target in 0..2 {
        let unbiased = SampleMoments::compute_with(&set, 1, CovarianceDivisor::Unbiased).unwrap();
        let population = SampleMoments::compute_with(&set, 1, CovarianceDivisor::Population).unwrap();
        let a = fit_from_covariances(unbiased.for_target(target), step).unwrap();
        let b = fit_from_covariances(population.for_target(target), step).unwrap();
        let source = 1 - target;
        let (fa, fb) = (flow_from_fit(&a, source).unwrap(), flow_from_fit(&b, source).unwrap());
        assert!((fa.value - fb.value).abs() <= 1e-12 * fa.value.abs());
        let (sa, sb) = (self_from_fit(&a).value, self_from_fit(&b).value);
        assert!((sa - sb).abs() <= 1e-12 * sa.abs());
    }
}

#[test]
fn panel_from_series_matches_series_estimate() {
    let set = ou2_set(100_000, 5);
    let panel = PanelPairs::from_series(&set).unwrap();
    for (s, t) in [(1, 0), (0, 1)] {
        let a = flow_panel(&panel, s, t).unwrap();
        let b = flow_multivariate(&set, s, t, 1).unwrap();
        let bound = 1.0 / panel.len() as f64;
        assert!((a.value - b.value).abs() <= bound * b.value.abs().max(1e-3));
    }
}

#[test]
fn independent_panel_recovers_theoretical_flow() {
    // stationary initial states, one Euler step of length gap each
    let sde = ou2();
    let sigma = stationary_covariance(&sde).unwrap().sigma;
    let chol = sigma.cholesky().unwrap().l();
    let gap = 0.01;
    let m = 1_000_000;
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut x0: Vec<Vec<f64>> = (0..2).map(|_| Vec::with_capacity(m)).collect();
    let mut x1: Vec<Vec<f64>> = (0..2).map(|_| Vec::with_capacity(m)).collect();
    let a = sde.drift();
    for _ in 0..m {
        let z = DVector::from_fn(2, |_, _| StandardNormal.sample(&mut rng));
        let x = &chol * z;
        let e = DVector::from_fn(2, |_, _| StandardNormal.sample(&mut rng));
        let y = &x + (a * &x) * gap + e * gap.sqrt();
        for i in 0..2 {
            x0[i].push(x[i]);
            x1[i].push(y[i]);
        }
    }
    let pairs = PanelPairs::new(vec!["x1".into(), "x2".into()], x0, x1, gap).unwrap();
    let t21 = flow_panel(&pairs, 1, 0).unwrap();
    assert!((t21.value - 1.0 / 9.0).abs() <= 0.1 / 9.0, "{}", t21.value);
    let t12 = flow_panel(&pairs, 0, 1).unwrap();
    assert!(t12.value.abs() <= 3.0 * t12.std_err);
}

#[test]
fn identities_hold_up_to_ten_variables() {
    for d in 2..=10usize {
        let mut a = DMatrix::from_fn(d, d, |i, j| if i == j { -1.0 } else { 0.3 * (((i * 7 + j * 3) % 5) as f64 - 2.0) / 2.0 });
        let abscissa = a.complex_eigenvalues().iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
        for i in 0..d {
            a[(i, i)] -= abscissa.max(0.0) + 0.2;
        }
        let sde = LinearSDE::with_drift_and_noise(a, DMatrix::identity(d, d)).unwrap();
        let set = simulate(&sde, &vec![0.0; d], 3000, 0.1, d as u64, Some(300))
            .unwrap()
            .into_series_set()
            .unwrap();
        for target in 0..d {
            let fit = fit_linear_model(&set, target, 1).unwrap();
            let det = fit.covariances.c.clone().lu().determinant();
            for j in 0..d {
                let cof: f64 = (0..d)
                    .map(|m| infoflow::linalg::cofactor(&fit.covariances.c, j, m) * fit.covariances.cd[m])
                    .sum::<f64>()
                    / det;
                let rel = (cof - fit.coeffs[j]).abs() / cof.abs().max(fit.coeffs[j].abs());
                assert!(rel <= 1e-9, "d={d} target={target} j={j}: {rel:e}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn per_component_affine_maps_leave_flows(
        scales in prop::collection::vec(prop::sample::select(vec![-1e3, -1.0, 1e-3, 1.0, 1e3]), 3),
        shifts in prop::collection::vec(-10.0f64..10.0, 3),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let rows: Vec<Vec<f64>> = {
            let base = white_noise(3000, &mut rng);
            let other = white_noise(3000, &mut rng);
            let third: Vec<f64> = (0..3000usize).map(|t| 0.5 * base[t.saturating_sub(1)] + other[t]).collect();
            vec![base, other, third]
        };
        let set = TimeSeriesSet::from_rows(rows.clone(), 1.0).unwrap();
        let mapped_rows: Vec<Vec<f64>> = rows
            .iter()
            .enumerate()
            .map(|(m, r)| r.iter().map(|v| scales[m] * v + shifts[m]).collect())
            .collect();
        let mapped = TimeSeriesSet::from_rows(mapped_rows, 1.0).unwrap();
        let opts = AnalysisOptions { workers: 1, ..Default::default() };
        let a = all_pairs(&set, &opts).unwrap();
        let b = all_pairs(&mapped, &opts).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let (x, y) = (a.t[i][j], b.t[i][j]);
                prop_assert!((x - y).abs() <= 1e-10 * x.abs().max(y.abs()), "T[{}][{}] {} vs {}", i, j, x, y);
                let (x, y) = (a.tau.as_ref().unwrap()[i][j], b.tau.as_ref().unwrap()[i][j]);
                prop_assert!((x - y).abs() <= 1e-10 * x.abs().max(y.abs()));
            }
        }
    }
}

mod common;

use common::{homogeneous_basket, reference_basket, reference_curve, uniform};
use ftd_basket::engine::{
    convergence_report, run_simulation, run_with_checkpoints, substream_normals, PathGenerator, SimulationConfig,
};
use ftd_basket::pricing::{analytic_independent_spread, DiscountCurve, PricingReport};
use ftd_basket::Error;

#[test]
fn reports_are_identical_across_worker_counts() {
    let basket = reference_basket();
    let sigma = uniform(5, 0.1);
    let reports: Vec<PricingReport> = [1, 2, 3, 8]
        .iter()
        .map(|&w| {
            let config = SimulationConfig::new(50_001, 1200).with_workers(w);
            run_simulation(&basket, &sigma, &reference_curve(), &config).unwrap().report
        })
        .collect();
    for r in &reports[1..] {
        assert_eq!(r, &reports[0]);
        assert_eq!(r.spread_paper.to_bits(), reports[0].spread_paper.to_bits());
        assert_eq!(r.spread_standard.to_bits(), reports[0].spread_standard.to_bits());
    }
}

#[test]
fn substreams_are_deterministic() {
    assert_eq!(substream_normals(7, 3, 5), substream_normals(7, 3, 5));
    assert_ne!(substream_normals(7, 3, 5), substream_normals(7, 4, 5));
    assert_ne!(substream_normals(7, 3, 5), substream_normals(8, 3, 5));
    // a longer draw extends a shorter one
    assert_eq!(substream_normals(7, 3, 5)[..], substream_normals(7, 3, 9)[..5]);
}

#[test]
fn pooled_substream_draws_have_standard_moments() {
    let draws: Vec<f64> = (0..200_000u64).flat_map(|i| substream_normals(42, i, 5)).collect();
    let n = draws.len() as f64;
    assert_eq!(draws.len(), 1_000_000);
    let mean = draws.iter().sum::<f64>() / n;
    let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    assert!(mean.abs() <= 4.0 / n.sqrt(), "mean {mean}");
    assert!((var - 1.0).abs() <= 0.01, "variance {var}");
}

#[test]
fn neighbouring_substreams_are_uncorrelated() {
    let n = 100_000u64;
    let a: Vec<f64> = (0..n).map(|i| substream_normals(9, 2 * i, 1)[0]).collect();
    let b: Vec<f64> = (0..n).map(|i| substream_normals(9, 2 * i + 1, 1)[0]).collect();
    let r = common::sample_correlation(&a, &b);
    assert!(r.abs() <= 4.0 / (n as f64).sqrt(), "correlation {r}");
}

#[test]
fn convergence_rows_equal_fresh_runs() {
    let basket = reference_basket();
    let sigma = uniform(5, 0.1);
    let curve = reference_curve();
    let config = SimulationConfig::new(10_000, 1200);
    let (full, rows) = run_with_checkpoints(&basket, &sigma, &curve, &config, &[100, 1000, 10_000]).unwrap();
    assert_eq!(rows.len(), 3);
    for row in &rows {
        let fresh = run_simulation(&basket, &sigma, &curve, &SimulationConfig::new(row.n_paths, 1200)).unwrap();
        assert_eq!(*row, (&fresh.report).into());
    }
    assert_eq!(rows[2], (&full.report).into());
    let ratio = rows[0].se_paper / rows[2].se_paper;
    assert!((5.0..=20.0).contains(&ratio), "SE ratio {ratio}");
}

#[test]
fn convergence_rejects_bad_checkpoints() {
    let generator = PathGenerator::new(&reference_basket(), &uniform(5, 0.1), reference_curve(), 1).unwrap();
    let legs = generator.legs_for(100, 1);
    assert!(convergence_report(&legs, &[50, 20], 1, 10).is_err());
    assert!(convergence_report(&legs, &[0], 1, 10).is_err());
    assert!(convergence_report(&legs, &[101], 1, 10).is_err());
    assert!(convergence_report(&legs, &[], 1, 10).unwrap().is_empty());
}

#[test]
fn single_path_report_matches_hand_valuation() {
    let basket = reference_basket();
    let sigma = uniform(5, 0.1);
    let curve = reference_curve();
    let (seed, outcome) = (0..)
        .map(|s| (s, PathGenerator::new(&basket, &sigma, curve, s).unwrap().outcome(0)))
        .find(|(_, o)| o.premium_pv > 0.0)
        .unwrap();
    let t = outcome.first_time;
    let premium: f64 = (1..=10)
        .map(|k| 0.5 * f64::from(k))
        .filter(|&tk| tk < t)
        .map(|tk| (-0.05 * tk).exp())
        .sum();
    let protection = if t < 5.0 { 0.8 * (-0.05 * t).exp() } else { 0.0 };
    assert!((outcome.premium_pv - premium).abs() <= 1e-14);
    assert!((outcome.protection_pv - protection).abs() <= 1e-15);

    let report = run_simulation(&basket, &sigma, &curve, &SimulationConfig::new(1, seed)).unwrap().report;
    assert_eq!(report.n_paths, 1);
    assert_eq!(report.spread_paper, outcome.protection_pv / outcome.premium_pv);
    assert_eq!(report.spread_standard, report.spread_paper);
    assert_eq!(report.se_paper, 0.0);
    assert_eq!(report.se_standard, None);
    assert_eq!(report.mean_premium_pv, outcome.premium_pv);
}

#[test]
fn zero_rate_legs_count_payments() {
    let basket = reference_basket();
    let curve = DiscountCurve::flat(0.0).unwrap();
    let generator = PathGenerator::new(&basket, &uniform(5, 0.1), curve, 4).unwrap();
    for i in 0..100 {
        let o = generator.outcome(i);
        let t = o.times.as_slice().iter().copied().fold(f64::INFINITY, f64::min);
        let count = (1..=10).filter(|&k| 0.5 * f64::from(k) < t).count();
        assert_eq!(o.premium_pv, count as f64, "path {i}");
        assert_eq!(o.protection_pv, if t < 5.0 { 0.8 } else { 0.0 }, "path {i}");
        assert_eq!(o.first_time, t);
        assert_eq!(o.times.as_slice()[o.first_index], t);
    }
}

#[test]
fn legs_respect_bounds_and_times_are_interior() {
    let basket = reference_basket();
    let curve = reference_curve();
    let max_premium: f64 = (1..=10).map(|k| (-0.025 * f64::from(k)).exp()).sum();
    for rho in [0.0, 0.1, 0.9, 0.999] {
        let generator = PathGenerator::new(&basket, &uniform(5, rho), curve, 8).unwrap();
        for o in generator.outcomes_for(0..20_000, 4) {
            assert!((0.0..=0.8).contains(&o.protection_pv));
            assert!(o.premium_pv >= 0.0 && o.premium_pv <= max_premium + 1e-12);
            assert!(o.times.as_slice().iter().all(|t| t.is_finite() && *t > 0.0));
        }
    }
}

#[test]
fn mean_of_ratios_is_below_ratio_of_means() {
    let run = run_simulation(
        &reference_basket(),
        &uniform(5, 0.1),
        &reference_curve(),
        &SimulationConfig::new(100_000, 1200),
    )
    .unwrap();
    let r = run.report;
    assert!(r.spread_paper < r.spread_standard);
    assert_eq!(r.estimator_gap, r.spread_standard - r.spread_paper);
    assert!(r.zero_premium_paths > 0);
}

#[test]
fn single_name_converges_to_closed_form() {
    let basket = homogeneous_basket(1, 0.2, 0.2, 5.0, 0.5);
    let curve = reference_curve();
    let oracle = analytic_independent_spread(1, 0.2, 0.2, 0.05, basket.schedule(), 5.0).unwrap();
    assert!((oracle - 0.08521500996276884).abs() < 1e-15);
    let r = run_simulation(&basket, &uniform(1, 0.0), &curve, &SimulationConfig::new(1_000_000, 5))
        .unwrap()
        .report;
    let se = r.se_standard.unwrap();
    assert!((r.spread_standard - oracle).abs() <= 3.0 * se, "{} vs {oracle} (se {se})", r.spread_standard);
}

#[test]
fn invalid_configurations_are_rejected() {
    let basket = reference_basket();
    let curve = reference_curve();
    let sigma = uniform(5, 0.1);
    let zero = SimulationConfig::new(0, 1);
    assert!(matches!(run_simulation(&basket, &sigma, &curve, &zero), Err(Error::InvalidInput(_))));
    let no_workers = SimulationConfig::new(10, 1).with_workers(0);
    assert!(run_simulation(&basket, &sigma, &curve, &no_workers).is_err());
    assert!(matches!(
        run_simulation(&basket, &uniform(4, 0.1), &curve, &SimulationConfig::new(10, 1)),
        Err(Error::DimensionMismatch { expected: 5, found: 4 })
    ));
}

mod common;

use common::*;
use nctorus::experiments::*;
use nctorus::ExperimentConfig;
use nctorus_core::{critical_exponent, ThetaMatrix};

fn small(alpha: f64) -> ExperimentConfig {
    ExperimentConfig {
        n_grid: vec![1, 2, 3],
        alpha1: alpha,
        alpha2: alpha,
        ..ExperimentConfig::default()
    }
}

#[test]
fn suite_passes_commutative_and_irrational() {
    for theta in [
        ThetaMatrix::zero(2).unwrap(),
        ThetaMatrix::planar(std::f64::consts::FRAC_1_SQRT_2).unwrap(),
        random_theta_matrix(&mut rng(3), 3),
    ] {
        let report = run_property_suite(42, &theta).unwrap();
        assert!(
            report.passed(),
            "{:?}",
            report
                .checks
                .iter()
                .filter(|c| !c.passed)
                .collect::<Vec<_>>()
        );
        assert_eq!(report.checks.len(), 14);
    }
}

#[test]
fn corrupted_cocycle_is_caught() {
    let theta = ThetaMatrix::planar(0.3).unwrap();
    let report = run_property_suite_with(42, &theta, CocycleFault::SignFlip).unwrap();
    let failed: Vec<_> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    assert_eq!(failed, ["cocycle_identity"]);
}

#[test]
fn scan_records_are_sorted_and_consistent() {
    let cfg = ExperimentConfig {
        r_grid: vec![2.0, 0.5, 1.0],
        ..small(1.0)
    };
    let report = run_theorem_scan(&cfg).unwrap();
    assert!(all_passed(&report.checks));
    assert_eq!(report.records.len(), 9);
    let keys: Vec<(u32, f64)> = report.records.iter().map(|r| (r.n, r.r)).collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    assert_eq!(keys, sorted);
    let r_star = critical_exponent(2, 1.0, 1.0).unwrap();
    assert!(report
        .records
        .iter()
        .all(|r| r.r_star.to_bits() == r_star.to_bits()));
    assert_eq!(report.records[0].regime, Regime::Below);
    assert_eq!(report.records[1].regime, Regime::Above);
    assert_eq!(report.stabilization.len(), 3);
    assert_eq!(
        (report.stabilization[0].n_from, report.stabilization[0].n_to),
        (2, 3)
    );
}

#[test]
fn scan_flags_the_threshold_without_asserting() {
    let r_star = critical_exponent(2, 1.0, 1.0).unwrap();
    let cfg = ExperimentConfig {
        r_grid: vec![r_star],
        ..small(1.0)
    };
    let report = run_theorem_scan(&cfg).unwrap();
    assert!(report
        .records
        .iter()
        .all(|r| r.regime == Regime::AtThreshold));
    assert!(all_passed(&report.checks));
}

#[test]
fn untwisted_orders_give_hilbert_schmidt_records() {
    let cfg = ExperimentConfig {
        r_grid: vec![2.0],
        ..small(0.0)
    };
    for rec in run_theorem_scan(&cfg).unwrap().records {
        assert!((rec.s_r_norm - rec.sobolev_norm).abs() <= 1e-12 * rec.sobolev_norm);
    }
}

#[test]
fn scan_is_deterministic_and_nondecreasing() {
    let cfg = small(0.5);
    let strip = |r: &ScanReport| {
        r.records
            .iter()
            .map(|x| {
                (
                    x.n,
                    x.r.to_bits(),
                    x.s_r_norm.to_bits(),
                    x.weak_r_norm.to_bits(),
                    x.sobolev_norm.to_bits(),
                )
            })
            .collect::<Vec<_>>()
    };
    let a = run_theorem_scan(&cfg).unwrap();
    let b = run_theorem_scan(&cfg).unwrap();
    assert_eq!(strip(&a), strip(&b));
    let other = run_theorem_scan(&ExperimentConfig { seed: 43, ..cfg }).unwrap();
    assert_ne!(strip(&a), strip(&other));
    for r in 0..3 {
        let norms: Vec<f64> = a
            .records
            .iter()
            .skip(r)
            .step_by(3)
            .map(|x| x.s_r_norm)
            .collect();
        assert!(norms.windows(2).all(|w| w[1] >= w[0]), "{norms:?}");
    }
}

#[test]
fn scan_refuses_oversized_boxes() {
    let cfg = ExperimentConfig {
        n_grid: vec![10, 40],
        ..ExperimentConfig::default()
    };
    let err = run_theorem_scan(&cfg).unwrap_err().to_string();
    assert!(err.contains("6561"), "{err}");
}

#[test]
fn factorization_is_verbatim_without_lift() {
    let cfg = ExperimentConfig {
        n_grid: vec![2, 3],
        ..small(0.0)
    };
    let report = run_factorization_check(&cfg).unwrap();
    assert!(report.records.iter().all(|r| r.factorization_error == 0.0));
    let cfg = ExperimentConfig {
        n_grid: vec![6],
        alpha1: 1.5,
        alpha2: 0.7,
        ..ExperimentConfig::default()
    };
    let report = run_factorization_check(&cfg).unwrap();
    assert!(all_passed(&report.checks));
    assert!(report.records[0].factorization_error <= 1e-12);
}

#[test]
fn schwartz_defaults_and_precondition() {
    let cfg = small(1.0);
    let report = run_schwartz_bound(&cfg, None).unwrap();
    assert!(report
        .records
        .iter()
        .all(|r| r.s0 == 3.0 && r.worst_ratio <= 1.0));
    assert!(all_passed(&report.checks));
    assert!(run_schwartz_bound(&cfg, Some(2.0)).is_err());
    assert!(run_schwartz_bound(&cfg, Some(2.5)).is_ok());
}

#[test]
fn potential_decay_cases() {
    let report = run_potential_decay(2, 1.0, &[20, 40]).unwrap();
    assert!(all_passed(&report.checks));
    assert_eq!(report.records[0].p, 2.0);
    // at α = d the S_1 sum grows like log N while the weak norm stays put
    let report = run_potential_decay(2, 2.0, &[10, 20, 40]).unwrap();
    let sums: Vec<f64> = report.records.iter().map(|r| r.s_p_norm).collect();
    assert!(
        sums[1] - sums[0] > 2.0 && sums[2] - sums[1] > 2.0,
        "{sums:?}"
    );
    assert!(all_passed(&report.checks));
    assert!(run_potential_decay(2, 0.0, &[4]).is_err());
    assert!(run_potential_decay(2, 1.0, &[4, 4]).is_err());
}

#[test]
fn thread_count_comes_from_the_environment() {
    // Only reads; never sets, so parallel tests are unaffected.
    let expected = std::env::var("NCTORUS_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(0);
    assert_eq!(worker_threads(), expected);
}

use rflcs::bounds::Regime;
use rflcs::experiments::*;
use rflcs::RngStream;

fn config(regime: Regime, k_list: Vec<usize>, estimator: Estimator, trials: usize) -> SweepConfig {
    SweepConfig {
        regime,
        k_list,
        rho: 1.0,
        xi: 1.0,
        trials,
        estimator,
        n_override: None,
        master_seed: 42,
        workers: 0,
    }
}

#[test]
fn small_regime_bracket_is_ordered() {
    let mut c = config(Regime::Small, vec![400], Estimator::Bracket, 20);
    c.n_override = Some(800);
    c.xi = 0.5;
    let rep = run_regime_sweep(&c).unwrap();
    let row = &rep.rows[0];
    assert_eq!((row.k, row.n, row.theory_target), (400, 800, 80.0));
    assert!(row.per_trial.iter().all(|t| t.lower <= t.upper && t.exact.is_none()));
    assert!(row.lower <= row.upper);
}

#[test]
fn bracket_contains_exact() {
    let c = config(Regime::Middle, vec![6, 10], Estimator::Bracket, 40);
    for row in run_regime_sweep(&c).unwrap().rows {
        for t in &row.per_trial {
            let e = t.exact.unwrap();
            assert!(t.lower <= e && e <= t.upper && t.upper <= row.k);
        }
    }
}

#[test]
fn worker_count_does_not_change_reports() {
    let mut c = config(Regime::Middle, vec![5, 9, 14], Estimator::Bracket, 25);
    c.workers = 1;
    let one = run_regime_sweep(&c).unwrap();
    c.workers = 8;
    let eight = run_regime_sweep(&c).unwrap();
    assert_eq!(one.to_csv(), eight.to_csv());
    assert_eq!(one.to_json(), eight.to_json());
}

#[test]
fn large_regime_fraction_reported() {
    let rep = run_regime_sweep(&config(Regime::Large, vec![12], Estimator::Exact, 30)).unwrap();
    let row = &rep.rows[0];
    assert_eq!(row.n, 155);
    let f = row.fraction_at_k();
    assert!((0.0..=1.0).contains(&f));
    assert!((row.tail_value - 2.0 / 12.0).abs() < 1e-12);
}

#[test]
fn middle_regime_trend_in_rho() {
    let rhos = [0.5, 1.0, 2.0, 4.0];
    let rows: Vec<_> = rhos
        .iter()
        .map(|&rho| {
            let mut c = config(Regime::Middle, vec![12], Estimator::Exact, 100);
            c.rho = rho;
            run_regime_sweep(&c).unwrap().rows.remove(0)
        })
        .collect();
    for w in rows.windows(2) {
        let slack = 3.0 * (w[0].stderr.powi(2) + w[1].stderr.powi(2)).sqrt();
        assert!(w[1].mean_r / 12.0 >= w[0].mean_r / 12.0 - slack / 12.0, "{} then {}", w[0].mean_r, w[1].mean_r);
    }
}

#[test]
fn saturation_examples() {
    let rng = RngStream::new(42, 0);
    assert_eq!(run_fixed_k_saturation(1, 9, 20, &rng).unwrap().mean, 1.0);
    assert_eq!(run_fixed_k_saturation(5, 0, 20, &rng).unwrap().mean, 0.0);
    assert!(run_fixed_k_saturation(4, 500, 200, &rng).unwrap().mean >= 3.99);
}

#[test]
fn uniformity_examples() {
    let r = uniformity_test_exhaustive(3, 2).unwrap();
    assert_eq!(r.pairs, 64);
    let one = &r.classes[1];
    assert_eq!(one.counts.len(), 2);
    assert_eq!(one.counts[0].1, one.counts[1].1);
    assert!(r.uniform);

    let r = uniformity_test_exhaustive(2, 2).unwrap();
    assert_eq!(r.classes[2].subsets, 1);
    assert!(r.classes[2].uniform && r.classes[2].instances > 0);

    let r = uniformity_test_exhaustive(3, 3).unwrap();
    assert_eq!(r.pairs, 729);
    for l in 1..=3 {
        let c = &r.classes[l];
        assert!(c.instances > 0 && c.uniform, "l={l}");
        assert_eq!(c.counts.len() as u128, c.subsets);
    }
    assert!(uniformity_test_exhaustive(5, 6).unwrap_err().is_capacity());
}

#[test]
fn tailbound_suite_reference_seed() {
    let rep = run_tailbound_suite(&RngStream::new(42, 0)).unwrap();
    for item in &rep.items {
        assert!(item.passed, "{} measured {} bound {} slack {}", item.name, item.measured, item.bound, item.slack);
    }
    let coupon = rep.items.iter().find(|i| i.name == "coupon-collector").unwrap();
    assert!(coupon.measured <= 0.02);
    assert!(rep.items.iter().any(|i| i.name == "small-regime-tail"));
}

mod common;

use common::*;
use proptest::prelude::*;
use rflcs::bounds::lambda_empty;
use rflcs::stats::Summary;
use rflcs::urns::*;
use rflcs::RngStream;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(p, q)| (p - q).abs() <= tol)
}

#[test]
fn classical_sample_examples() {
    let mut rng = RngStream::new(1, 0);
    assert_eq!(classical_urn_sample(1, 5, &mut rng).unwrap().empty_count, 0);
    assert_eq!(classical_urn_sample(5, 0, &mut rng).unwrap().empty_count, 5);
    assert!(classical_urn_sample(0, 3, &mut rng).is_err());
}

#[test]
fn classical_sample_mean() {
    let trials = 100_000;
    let values = (0..trials).map(|t| {
        let mut rng = RngStream::new(10, t);
        classical_urn_sample(10, 10, &mut rng).unwrap().empty_count as f64
    });
    let s = Summary::of(values);
    assert!((s.mean - lambda_empty(10, 10)).abs() <= 4.0 * s.stderr, "mean {}", s.mean);
}

#[test]
fn grouped_sample_examples() {
    let mut rng = RngStream::new(2, 0);
    let full = GroupedUrnSpec::new(7, vec![7]).unwrap();
    assert_eq!(grouped_urn_sample(&full, &mut rng).empty_count, 0);
    assert!(GroupedUrnSpec::new(3, vec![4]).is_err());
    for t in 0..200 {
        let spec = GroupedUrnSpec::new(9, vec![2, 3]).unwrap();
        let x = grouped_urn_sample(&spec, &mut RngStream::new(t, 1)).empty_count;
        assert!((4..=6).contains(&x));
    }
}

/// Two-sample chi-square homogeneity test over bins with enough mass.
fn homogeneous(a: &[u64], b: &[u64], alpha: f64) -> bool {
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    let mut stat = 0.0;
    let mut bins = 0;
    for (&ca, &cb) in a.iter().zip(b) {
        let total = (ca + cb) as f64;
        if total < 10.0 {
            continue;
        }
        let ea = total * na / (na + nb);
        let eb = total * nb / (na + nb);
        stat += (ca as f64 - ea).powi(2) / ea + (cb as f64 - eb).powi(2) / eb;
        bins += 1;
    }
    bins < 2 || stat < ChiSquared::new((bins - 1) as f64).unwrap().inverse_cdf(1.0 - alpha)
}

#[test]
fn unit_groups_match_classical_in_distribution() {
    let (k, s, trials) = (8, 6, 100_000);
    let spec = GroupedUrnSpec::unit_groups(k, s).unwrap();
    let hx = grouped_histogram(&spec, trials, 31);
    let hy = classical_histogram(k, s, trials, 32).unwrap();
    assert!(homogeneous(&hx, &hy, 1e-3));
    assert!(close(&grouped_urn_exact(&spec).unwrap(), &classical_urn_exact(k, s).unwrap(), 1e-12));
}

#[test]
fn grouped_sample_total_variation() {
    let spec = GroupedUrnSpec::new(6, vec![2, 2, 3]).unwrap();
    let trials = 100_000;
    let hist = grouped_histogram(&spec, trials, 5);
    let exact = grouped_urn_exact(&spec).unwrap();
    let tv: f64 = hist.iter().zip(&exact).map(|(&c, p)| (c as f64 / trials as f64 - p).abs()).sum::<f64>() / 2.0;
    assert!(tv <= 0.02, "tv {tv}");
}

#[test]
fn histograms_are_deterministic() {
    let spec = GroupedUrnSpec::new(20, vec![3, 5, 7]).unwrap();
    assert_eq!(grouped_histogram(&spec, 9000, 4), grouped_histogram(&spec, 9000, 4));
    assert_eq!(classical_histogram(20, 9, 9000, 4).unwrap(), classical_histogram(20, 9, 9000, 4).unwrap());
}

#[test]
fn classical_exact_examples() {
    assert_eq!(classical_urn_exact(2, 1).unwrap(), vec![0.0, 1.0, 0.0]);
    assert_eq!(classical_urn_exact(2, 2).unwrap(), vec![0.5, 0.5, 0.0]);
    assert!(classical_urn_exact(31, 3).unwrap_err().is_capacity());
    assert!(classical_urn_exact(5, 201).unwrap_err().is_capacity());
}

#[test]
fn classical_exact_matches_markov_chain() {
    for k in 1..=30 {
        for s in (0..=200).step_by(7) {
            let pmf = classical_urn_exact(k, s).unwrap();
            assert!(close(&pmf, &classical_markov(k, s), 1e-12), "k={k} s={s}");
            assert!((pmf.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        }
    }
}

#[test]
fn classical_exact_mean_is_lambda() {
    for k in 1..=20 {
        for s in 0..=100 {
            let m = mean(&classical_urn_exact(k, s).unwrap());
            assert!((m - lambda_empty(k, s)).abs() <= 1e-9, "k={k} s={s}");
        }
    }
}

#[test]
fn grouped_exact_examples() {
    let full = grouped_urn_exact(&GroupedUrnSpec::new(4, vec![4]).unwrap()).unwrap();
    assert_eq!(full, vec![1.0, 0.0, 0.0, 0.0, 0.0]);
    let one = grouped_urn_exact(&GroupedUrnSpec::new(3, vec![1]).unwrap()).unwrap();
    assert_eq!(one, vec![0.0, 0.0, 1.0, 0.0]);
    let big = GroupedUrnSpec::new(40, vec![20, 20]).unwrap();
    assert!(grouped_urn_exact(&big).unwrap_err().is_capacity());
}

#[test]
fn grouped_exact_dominated_by_classical() {
    let spec = GroupedUrnSpec::new(6, vec![2, 2, 3]).unwrap();
    let sx = survival(&grouped_urn_exact(&spec).unwrap());
    let sy = survival(&classical_urn_exact(6, 7).unwrap());
    assert!(sx.iter().zip(&sy).all(|(x, y)| x <= y));
    let rep = dominance_check(&spec, 1, &RngStream::new(0, 0)).unwrap();
    assert!(rep.exact && !rep.violated && rep.max_margin <= 0.0);
}

#[test]
fn dominance_unit_groups_exact_margin_zero() {
    let spec = GroupedUrnSpec::unit_groups(5, 4).unwrap();
    let rep = dominance_check(&spec, 1, &RngStream::new(0, 0)).unwrap();
    assert!(rep.exact && !rep.violated);
    assert_eq!(rep.max_margin, 0.0);
}

#[test]
fn dominance_unit_groups_monte_carlo() {
    let spec = GroupedUrnSpec::unit_groups(50, 40).unwrap();
    let rep = dominance_check(&spec, 100_000, &RngStream::new(6, 0)).unwrap();
    assert!(!rep.exact && !rep.violated);
    for t in 0..=50 {
        let d = (rep.survival_grouped[t] - rep.survival_classical[t]).abs();
        assert!(d <= 4.0 * rep.stderr[t] + 1e-12, "t={t} d={d}");
    }
}

#[test]
fn dominance_monte_carlo_groups_of_ten() {
    let spec = GroupedUrnSpec::new(50, vec![10; 5]).unwrap();
    let rep = dominance_check(&spec, 100_000, &RngStream::new(7, 0)).unwrap();
    assert!(!rep.exact && !rep.violated, "margin {}", rep.max_margin);
}

#[test]
fn survival_csv() {
    let pmf = classical_urn_exact(2, 2).unwrap();
    let table = SurvivalTable::from_pmf(UrnModel::Classical, 2, vec![2], &pmf);
    assert_eq!(
        table.to_csv(),
        "model,k,s_vec,t,survival,stderr\nclassical,2,2,0,1,0\nclassical,2,2,1,0.5,0\nclassical,2,2,2,0,0\n"
    );
    let hist = grouped_histogram(&GroupedUrnSpec::new(3, vec![1, 2]).unwrap(), 100, 1);
    let csv = SurvivalTable::from_histogram(UrnModel::Grouped, 3, vec![1, 2], &hist).to_csv();
    assert!(csv.lines().nth(1).unwrap().starts_with("grouped,3,1;2,0,1,"));
}

fn small_spec() -> impl Strategy<Value = GroupedUrnSpec> {
    (1usize..=7).prop_flat_map(|k| {
        proptest::collection::vec(0..=k, 0..=4).prop_map(move |v| GroupedUrnSpec::new(k, v).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn grouped_exact_matches_hypergeometric(spec in small_spec()) {
        let pmf = grouped_urn_exact(&spec).unwrap();
        prop_assert!(close(&pmf, &grouped_hypergeometric(spec.k(), spec.s_vec()), 1e-12));
    }

    #[test]
    fn dominance_holds_exactly(spec in small_spec()) {
        let rep = dominance_check(&spec, 1, &RngStream::new(0, 0)).unwrap();
        prop_assert!(rep.exact);
        prop_assert!(!rep.violated);
        prop_assert!(rep.max_margin <= 0.0);
    }

    #[test]
    fn occupancy_invariants(seed in any::<u64>(), k in 1usize..30, s in 0usize..60) {
        let y = classical_urn_sample(k, s, &mut RngStream::new(seed, 0)).unwrap().empty_count;
        prop_assert!(y <= k && y >= k.saturating_sub(s));
    }
}

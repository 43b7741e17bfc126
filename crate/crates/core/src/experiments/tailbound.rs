use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    bernstein_tail, claim_inequality_gap, coupon_tail, lambda_empty, occupancy_tail, regime_target, Regime,
};
use crate::error::Result;
use crate::generators::gen_uniform_pair;
use crate::rng::RngStream;
use crate::solvers::{heuristic_segment_size, segment_merge_heuristic, Leftover, PerSegment, SegmentPlan};
use crate::stats::proportion_stderr;
use crate::urns::{classical_histogram, dominance_check, mean, GroupedUrnSpec};

/// One comparison: the item passes when `measured <= bound + slack`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub bound: f64,
    pub slack: f64,
    pub detail: String,
}

impl CheckItem {
    fn new(name: impl Into<String>, measured: f64, bound: f64, slack: f64, detail: String) -> Self {
        CheckItem {
            name: name.into(),
            passed: measured <= bound + slack,
            measured,
            bound,
            slack,
            detail,
        }
    }

    /// `bound + slack - measured`; negative on failure.
    pub fn margin(&self) -> f64 {
        self.bound + self.slack - self.measured
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailboundReport {
    pub master_seed: u64,
    pub items: Vec<CheckItem>,
}

impl TailboundReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

const URN_TRIALS: usize = 100_000;
const REGIME1_TRIALS: usize = 400;

fn frequency(hist: &[u64], pred: impl Fn(usize) -> bool) -> f64 {
    let total: u64 = hist.iter().sum();
    let hits: u64 = hist.iter().enumerate().filter(|&(m, _)| pred(m)).map(|(_, c)| c).sum();
    hits as f64 / total as f64
}

fn eq_lambda(seed: u64) -> Result<CheckItem> {
    let (k, s) = (10, 10);
    let hist = classical_histogram(k, s, URN_TRIALS, seed)?;
    let total = URN_TRIALS as f64;
    let pmf: Vec<f64> = hist.iter().map(|&c| c as f64 / total).collect();
    let m = mean(&pmf);
    let var = pmf.iter().enumerate().map(|(v, p)| p * (v as f64 - m).powi(2)).sum::<f64>() * total / (total - 1.0);
    let se = (var / total).sqrt();
    let lambda = lambda_empty(k, s);
    Ok(CheckItem::new(
        "mean-empty-urns",
        (m - lambda).abs(),
        0.0,
        4.0 * se,
        format!("k={k} s={s} trials={URN_TRIALS} mean={m} lambda={lambda}"),
    ))
}

fn bernstein_items(seed: u64) -> Result<Vec<CheckItem>> {
    let (k, s) = (50, 50);
    let hist = classical_histogram(k, s, URN_TRIALS, seed)?;
    let lambda = lambda_empty(k, s);
    [2.0, 4.0, 6.0]
        .into_iter()
        .map(|a| {
            let p = frequency(&hist, |m| m as f64 >= lambda + a);
            let bound = bernstein_tail(k, s, a)?.value();
            Ok(CheckItem::new(
                format!("upper-tail-a{a}"),
                p,
                bound,
                3.0 * proportion_stderr(p, URN_TRIALS),
                format!("k={k} s={s} trials={URN_TRIALS} P(Y >= lambda + {a})"),
            ))
        })
        .collect()
}

fn coupon_item(seed: u64) -> Result<CheckItem> {
    let k = 100;
    let c = coupon_tail(k, 1.0)?;
    let hist = classical_histogram(k, c.s, URN_TRIALS, seed)?;
    let p = frequency(&hist, |m| m != 0);
    Ok(CheckItem::new(
        "coupon-collector",
        p,
        0.02,
        0.0,
        format!("k={k} xi=1 s={} trials={URN_TRIALS} bound={} P(Y != 0)", c.s, c.bound),
    ))
}

fn collision_item(seed: u64) -> Result<CheckItem> {
    let (k, s, a) = (10_000, 50, 10.0);
    let hist = classical_histogram(k, s, URN_TRIALS, seed)?;
    let p = frequency(&hist, |m| (k - m) as f64 <= s as f64 - a);
    Ok(CheckItem::new(
        "few-collisions",
        p,
        occupancy_tail(k, s, a)?.value(),
        3.0 * proportion_stderr(p, URN_TRIALS),
        format!("k={k} s={s} a={a} trials={URN_TRIALS} P(k - Y <= s - a)"),
    ))
}

fn dominance_items(seed: u64) -> Result<Vec<CheckItem>> {
    let exact = dominance_check(&GroupedUrnSpec::new(6, vec![2, 2, 3])?, 1, &RngStream::new(seed, 0))?;
    let mc = dominance_check(&GroupedUrnSpec::new(50, vec![10; 5])?, URN_TRIALS, &RngStream::new(seed, 1))?;
    let worst_se = mc.stderr[mc.worst_t];
    Ok(vec![
        CheckItem::new(
            "dominance-exact",
            exact.max_margin,
            0.0,
            0.0,
            format!("k=6 s=[2,2,3] worst_t={} violated={}", exact.worst_t, exact.violated),
        ),
        CheckItem {
            passed: !mc.violated,
            ..CheckItem::new(
                "dominance-monte-carlo",
                mc.max_margin,
                0.0,
                4.0 * worst_se,
                format!("k=50 s=[10;5] trials={URN_TRIALS} worst_t={} violated={}", mc.worst_t, mc.violated),
            )
        },
    ])
}

fn claim_item() -> Result<CheckItem> {
    let mut worst = f64::NEG_INFINITY;
    for rho in [0.1, 1.0, 5.0] {
        for i in 0..=100 {
            worst = worst.max(claim_inequality_gap(i as f64 / 100.0, rho)?);
        }
    }
    Ok(CheckItem::new(
        "claim-grid",
        worst,
        0.0,
        1e-12,
        "x in {0, 0.01, .., 1}, rho in {0.1, 1, 5}".to_string(),
    ))
}

fn small_regime_item(seed: u64) -> Result<CheckItem> {
    let (k, n, xi) = (400, 800, 0.5);
    let target = regime_target(Regime::Small, k, 0.0, xi, Some(n))?;
    let threshold = (1.0 - xi) * target.target;
    let plan = SegmentPlan::for_length(n, heuristic_segment_size(k), Leftover::FoldIntoLast)?;
    let below = (0..REGIME1_TRIALS)
        .into_par_iter()
        .map(|t| {
            let inst = gen_uniform_pair(n, k, &mut RngStream::new(seed, t as u64))?;
            let lower = segment_merge_heuristic(&inst, &plan, PerSegment::Auto)?.length;
            Ok(lower as f64 <= threshold)
        })
        .collect::<Result<Vec<bool>>>()?;
    let p = below.iter().filter(|&&b| b).count() as f64 / REGIME1_TRIALS as f64;
    Ok(CheckItem::new(
        "small-regime-tail",
        p,
        target.tail(xi),
        3.0 * proportion_stderr(p, REGIME1_TRIALS),
        format!("k={k} n={n} xi={xi} trials={REGIME1_TRIALS} P(R_lower <= {threshold})"),
    ))
}

/// The fixed battery of Monte Carlo estimates against their closed-form bounds. Each item
/// draws from its own master seed forked from `rng`.
pub fn run_tailbound_suite(rng: &RngStream) -> Result<TailboundReport> {
    let seed = |i: u64| rng.fork(i).master_seed();
    let mut items = vec![eq_lambda(seed(1))?];
    items.extend(bernstein_items(seed(2))?);
    items.push(coupon_item(seed(3))?);
    items.push(collision_item(seed(4))?);
    items.extend(dominance_items(seed(5))?);
    items.push(claim_item()?);
    items.push(small_regime_item(seed(6))?);
    Ok(TailboundReport {
        master_seed: rng.master_seed(),
        items,
    })
}

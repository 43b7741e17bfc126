//! Urn occupancy models.
//!
//! In the classical `(k, s)` model `s` balls land independently and uniformly in `k` urns; in
//! the grouped `(k, s_vec)` model group `i` puts one ball into each urn of a uniformly random
//! `s_i`-subset. Both report the number of urns left empty (`Y` and `X` respectively). The
//! grouped count is stochastically dominated by the classical one with `s = sum(s_vec)`:
//! `P(X >= t) <= P(Y >= t)` for every `t`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::stats::{proportion_stderr, survival_from_counts};

/// Inclusion-exclusion envelope for [`classical_urn_exact`].
pub const CLASSICAL_EXACT_MAX_K: usize = 30;
pub const CLASSICAL_EXACT_MAX_S: usize = 200;
/// Enumeration envelope for [`grouped_urn_exact`]: product of `C(k, s_i)`.
pub const GROUPED_EXACT_MAX_COMBINATIONS: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UrnModel {
    Grouped,
    Classical,
}

impl UrnModel {
    pub fn as_str(self) -> &'static str {
        match self {
            UrnModel::Grouped => "grouped",
            UrnModel::Classical => "classical",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OccupancySample {
    pub empty_count: usize,
    pub model: UrnModel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupedUrnSpec {
    k: usize,
    s_vec: Vec<usize>,
}

impl GroupedUrnSpec {
    pub fn new(k: usize, s_vec: Vec<usize>) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("number of urns k must be at least 1"));
        }
        if let Some(s) = s_vec.iter().find(|&&s| s > k) {
            return Err(Error::invalid(format!("group size {s} exceeds k={k}")));
        }
        Ok(GroupedUrnSpec { k, s_vec })
    }

    /// `s` groups of size one: the classical model in grouped form.
    pub fn unit_groups(k: usize, s: usize) -> Result<Self> {
        GroupedUrnSpec::new(k, vec![1; s])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn s_vec(&self) -> &[usize] {
        &self.s_vec
    }

    /// Total number of balls.
    pub fn s(&self) -> usize {
        self.s_vec.iter().sum()
    }

    /// `s_vec` joined with `;`, as written in CSV output.
    pub fn s_vec_label(&self) -> String {
        join_sizes(&self.s_vec)
    }
}

fn join_sizes(v: &[usize]) -> String {
    v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(";")
}

/// Reusable scratch space so repeated sampling does not reallocate per trial.
#[derive(Debug, Default)]
pub struct UrnSampler {
    stamp: Vec<u32>,
    generation: u32,
    pool: Vec<usize>,
}

impl UrnSampler {
    pub fn new() -> Self {
        Self::default()
    }

    fn reset(&mut self, k: usize) {
        if self.stamp.len() != k || self.generation == u32::MAX {
            self.stamp = vec![0; k];
            self.pool = (0..k).collect();
            self.generation = 0;
        }
        self.generation += 1;
    }

    /// Marks urn `u` hit; returns whether it was empty before.
    fn hit(&mut self, u: usize) -> bool {
        std::mem::replace(&mut self.stamp[u], self.generation) != self.generation
    }

    pub fn classical(&mut self, k: usize, s: usize, rng: &mut RngStream) -> usize {
        assert!(k > 0, "classical urn model needs k >= 1");
        self.reset(k);
        let mut occupied = 0;
        for _ in 0..s {
            let u = rng.below_usize(k);
            if self.hit(u) {
                occupied += 1;
            }
        }
        k - occupied
    }

    pub fn grouped(&mut self, spec: &GroupedUrnSpec, rng: &mut RngStream) -> usize {
        let k = spec.k;
        self.reset(k);
        let mut occupied = 0;
        for &size in &spec.s_vec {
            rng.partial_shuffle(&mut self.pool, size);
            for idx in 0..size {
                let u = self.pool[idx];
                if self.hit(u) {
                    occupied += 1;
                }
            }
        }
        k - occupied
    }
}

/// One draw of the classical `(k, s)` model.
pub fn classical_urn_sample(k: usize, s: usize, rng: &mut RngStream) -> Result<OccupancySample> {
    if k == 0 {
        return Err(Error::invalid("number of urns k must be at least 1"));
    }
    Ok(OccupancySample {
        empty_count: UrnSampler::new().classical(k, s, rng),
        model: UrnModel::Classical,
    })
}

/// One draw of the grouped `(k, s_vec)` model.
pub fn grouped_urn_sample(spec: &GroupedUrnSpec, rng: &mut RngStream) -> OccupancySample {
    OccupancySample {
        empty_count: UrnSampler::new().grouped(spec, rng),
        model: UrnModel::Grouped,
    }
}

const CHUNK: usize = 4096;

/// Histogram of empty-urn counts over `trials` draws; trial `t` uses stream `t` of `master_seed`.
/// Chunks run in parallel; the histogram does not depend on the worker count.
fn histogram(k: usize, trials: usize, master_seed: u64, draw: impl Fn(&mut UrnSampler, &mut RngStream) -> usize + Sync) -> Vec<u64> {
    let chunks = trials.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut hist = vec![0u64; k + 1];
            let mut sampler = UrnSampler::new();
            for t in c * CHUNK..((c + 1) * CHUNK).min(trials) {
                let mut rng = RngStream::new(master_seed, t as u64);
                hist[draw(&mut sampler, &mut rng)] += 1;
            }
            hist
        })
        .reduce(
            || vec![0u64; k + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

/// Histogram of `trials` classical draws, indexed by empty count `0..=k`.
pub fn classical_histogram(k: usize, s: usize, trials: usize, master_seed: u64) -> Result<Vec<u64>> {
    if k == 0 {
        return Err(Error::invalid("number of urns k must be at least 1"));
    }
    Ok(histogram(k, trials, master_seed, |smp, rng| smp.classical(k, s, rng)))
}

/// Histogram of `trials` grouped draws, indexed by empty count `0..=k`.
pub fn grouped_histogram(spec: &GroupedUrnSpec, trials: usize, master_seed: u64) -> Vec<u64> {
    histogram(spec.k, trials, master_seed, |smp, rng| smp.grouped(spec, rng))
}

fn binomial(n: usize, r: usize) -> BigInt {
    if r > n {
        return BigInt::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigInt::one();
    for i in 0..r {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Exact counts of the `k^s` equally likely placements by number of empty urns, and `k^s`.
fn classical_exact_counts(k: usize, s: usize) -> Result<(Vec<BigInt>, BigInt)> {
    if k == 0 {
        return Err(Error::invalid("number of urns k must be at least 1"));
    }
    if k > CLASSICAL_EXACT_MAX_K {
        return Err(Error::capacity("urns for exact classical distribution", k as u64, CLASSICAL_EXACT_MAX_K as u64));
    }
    if s > CLASSICAL_EXACT_MAX_S {
        return Err(Error::capacity("balls for exact classical distribution", s as u64, CLASSICAL_EXACT_MAX_S as u64));
    }
    let counts = (0..=k)
        .map(|m| {
            // C(k, m) * sum_j (-1)^j C(k-m, j) (k-m-j)^s
            let free = k - m;
            let mut sum = BigInt::zero();
            for j in 0..=free {
                let term = binomial(free, j) * BigInt::from(free - j).pow(s as u32);
                if j % 2 == 0 {
                    sum += term;
                } else {
                    sum -= term;
                }
            }
            binomial(k, m) * sum
        })
        .collect();
    Ok((counts, BigInt::from(k).pow(s as u32)))
}

fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    BigRational::new(num.clone(), den.clone())
        .to_f64()
        .expect("probability is representable")
}

/// Exact distribution of the classical empty-urn count `Y`, indexed `0..=k`.
///
/// The inclusion-exclusion sum is carried out in exact integer arithmetic and only the final
/// ratio is rounded, so each entry is the correctly rounded probability.
pub fn classical_urn_exact(k: usize, s: usize) -> Result<Vec<f64>> {
    let (counts, total) = classical_exact_counts(k, s)?;
    Ok(counts.iter().map(|c| ratio_to_f64(c, &total)).collect())
}

/// Number of subset combinations [`grouped_urn_exact`] must enumerate, saturating.
pub fn grouped_combinations(spec: &GroupedUrnSpec) -> u128 {
    spec.s_vec.iter().fold(1u128, |acc, &s| {
        let c = binomial(spec.k, s).to_u128().unwrap_or(u128::MAX);
        acc.saturating_mul(c)
    })
}

fn grouped_exact_counts(spec: &GroupedUrnSpec) -> Result<(Vec<u64>, u64)> {
    let combos = grouped_combinations(spec);
    if combos > GROUPED_EXACT_MAX_COMBINATIONS {
        return Err(Error::capacity("subset combinations for exact grouped distribution", combos, GROUPED_EXACT_MAX_COMBINATIONS));
    }
    if spec.k > 120 {
        return Err(Error::capacity("urns for exact grouped distribution", spec.k as u64, 120u64));
    }
    fn walk(k: usize, groups: &[usize], covered: u128, counts: &mut [u64]) {
        let Some((&size, rest)) = groups.split_first() else {
            counts[k - covered.count_ones() as usize] += 1;
            return;
        };
        if size == 0 {
            walk(k, rest, covered, counts);
            return;
        }
        // Gosper's hack over all size-subsets of 0..k
        let mut set: u128 = (1u128 << size) - 1;
        loop {
            walk(k, rest, covered | set, counts);
            let low = set & set.wrapping_neg();
            let ripple = set + low;
            set = (((ripple ^ set) >> 2) / low) | ripple;
            if set >> k != 0 {
                break;
            }
        }
    }
    let mut counts = vec![0u64; spec.k + 1];
    walk(spec.k, &spec.s_vec, 0, &mut counts);
    Ok((counts, combos as u64))
}

/// Exact distribution of the grouped empty-urn count `X`, by enumerating every combination
/// of subsets, each weighted equally.
pub fn grouped_urn_exact(spec: &GroupedUrnSpec) -> Result<Vec<f64>> {
    let (counts, total) = grouped_exact_counts(spec)?;
    Ok(counts.iter().map(|&c| c as f64 / total as f64).collect())
}

/// `P(V >= t)` for `t = 0..pmf.len()`.
pub fn survival(pmf: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; pmf.len()];
    let mut acc = 0.0;
    for t in (0..pmf.len()).rev() {
        acc += pmf[t];
        out[t] = acc.min(1.0);
    }
    out
}

pub fn mean(pmf: &[f64]) -> f64 {
    pmf.iter().enumerate().map(|(m, p)| m as f64 * p).sum()
}

/// Result of comparing the grouped and classical survival functions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub k: usize,
    pub s_vec: Vec<usize>,
    pub s: usize,
    pub exact: bool,
    pub trials: usize,
    /// `P(X >= t)` for `t = 0..=k`.
    pub survival_grouped: Vec<f64>,
    /// `P(Y >= t)` for `t = 0..=k`.
    pub survival_classical: Vec<f64>,
    /// Combined standard error of the difference at each `t` (zero when exact).
    pub stderr: Vec<f64>,
    /// `max_t [P(X >= t) - P(Y >= t)]`.
    pub max_margin: f64,
    pub worst_t: usize,
    pub violated: bool,
}

fn exact_dominance(spec: &GroupedUrnSpec) -> Result<DominanceReport> {
    let (gx, total_x) = grouped_exact_counts(spec)?;
    let (cy, total_y) = classical_exact_counts(spec.k, spec.s())?;
    let k = spec.k;
    let total_x_big = BigInt::from(total_x);
    let mut sx = vec![0.0; k + 1];
    let mut sy = vec![0.0; k + 1];
    let (mut acc_x, mut acc_y) = (0u64, BigInt::zero());
    let mut best: Option<(BigRational, usize)> = None;
    for t in (0..=k).rev() {
        acc_x += gx[t];
        acc_y += &cy[t];
        sx[t] = acc_x as f64 / total_x as f64;
        sy[t] = ratio_to_f64(&acc_y, &total_y);
        let margin = BigRational::new(BigInt::from(acc_x), total_x_big.clone())
            - BigRational::new(acc_y.clone(), total_y.clone());
        if best.as_ref().is_none_or(|(b, _)| margin >= *b) {
            best = Some((margin, t));
        }
    }
    let (margin, worst_t) = best.expect("k >= 1");
    Ok(DominanceReport {
        k,
        s_vec: spec.s_vec.clone(),
        s: spec.s(),
        exact: true,
        trials: 0,
        survival_grouped: sx,
        survival_classical: sy,
        stderr: vec![0.0; k + 1],
        violated: margin > BigRational::zero(),
        max_margin: margin.to_f64().unwrap_or(0.0),
        worst_t,
    })
}

/// Within the enumeration envelope the comparison is exact (rational arithmetic, violation
/// iff some margin is positive). Otherwise both survival functions are estimated from
/// `trials` draws each on disjoint streams, and a violation is flagged when some margin
/// exceeds four combined standard errors.
pub fn dominance_check(spec: &GroupedUrnSpec, trials: usize, rng: &RngStream) -> Result<DominanceReport> {
    let in_envelope = grouped_combinations(spec) <= GROUPED_EXACT_MAX_COMBINATIONS
        && spec.k <= CLASSICAL_EXACT_MAX_K
        && spec.s() <= CLASSICAL_EXACT_MAX_S;
    if in_envelope {
        return exact_dominance(spec);
    }
    if trials == 0 {
        return Err(Error::invalid("dominance check needs at least one trial"));
    }
    let k = spec.k;
    let hx = grouped_histogram(spec, trials, rng.fork(1).master_seed());
    let hy = classical_histogram(k, spec.s(), trials, rng.fork(2).master_seed())?;
    let sx = survival_from_counts(&hx);
    let sy = survival_from_counts(&hy);
    let stderr: Vec<f64> = sx
        .iter()
        .zip(&sy)
        .map(|(&px, &py)| (proportion_stderr(px, trials).powi(2) + proportion_stderr(py, trials).powi(2)).sqrt())
        .collect();
    let mut worst_t = 0;
    let mut max_margin = f64::NEG_INFINITY;
    let mut violated = false;
    for t in 0..=k {
        let m = sx[t] - sy[t];
        if m > max_margin {
            max_margin = m;
            worst_t = t;
        }
        if m > 4.0 * stderr[t] && m > 0.0 {
            violated = true;
        }
    }
    Ok(DominanceReport {
        k,
        s_vec: spec.s_vec.clone(),
        s: spec.s(),
        exact: false,
        trials,
        survival_grouped: sx,
        survival_classical: sy,
        stderr,
        max_margin,
        worst_t,
        violated,
    })
}

/// Rows of the urn CSV report (`model,k,s_vec,t,survival,stderr`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurvivalTable {
    pub model: UrnModel,
    pub k: usize,
    /// Group sizes; a classical table records the single total `s`.
    pub s_vec: Vec<usize>,
    pub survival: Vec<f64>,
    pub stderr: Vec<f64>,
}

pub const SURVIVAL_CSV_HEADER: &str = "model,k,s_vec,t,survival,stderr";

impl SurvivalTable {
    pub fn from_pmf(model: UrnModel, k: usize, s_vec: Vec<usize>, pmf: &[f64]) -> Self {
        SurvivalTable {
            model,
            k,
            s_vec,
            survival: survival(pmf),
            stderr: vec![0.0; pmf.len()],
        }
    }

    pub fn from_histogram(model: UrnModel, k: usize, s_vec: Vec<usize>, hist: &[u64]) -> Self {
        let trials: u64 = hist.iter().sum();
        let survival = survival_from_counts(hist);
        let stderr = survival.iter().map(|&p| proportion_stderr(p, trials as usize)).collect();
        SurvivalTable {
            model,
            k,
            s_vec,
            survival,
            stderr,
        }
    }

    /// Appends rows (no header) to `out`.
    pub fn write_csv_rows(&self, out: &mut String) {
        let label = join_sizes(&self.s_vec);
        for (t, (p, se)) in self.survival.iter().zip(&self.stderr).enumerate() {
            let _ = writeln!(out, "{},{},{},{},{},{}", self.model.as_str(), self.k, label, t, p, se);
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{SURVIVAL_CSV_HEADER}\n");
        self.write_csv_rows(&mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn classical_trivial_draws() {
        let mut rng = RngStream::new(1, 0);
        assert_eq!(classical_urn_sample(1, 5, &mut rng).unwrap().empty_count, 0);
        assert_eq!(classical_urn_sample(5, 0, &mut rng).unwrap().empty_count, 5);
        assert!(classical_urn_sample(0, 5, &mut rng).is_err());
    }

    #[test]
    fn grouped_trivial_draws() {
        let mut rng = RngStream::new(1, 0);
        let full = GroupedUrnSpec::new(7, vec![7]).unwrap();
        assert_eq!(grouped_urn_sample(&full, &mut rng).empty_count, 0);
        let one = GroupedUrnSpec::new(3, vec![1]).unwrap();
        assert_eq!(grouped_urn_sample(&one, &mut rng).empty_count, 2);
        assert!(GroupedUrnSpec::new(3, vec![4]).is_err());
        assert!(GroupedUrnSpec::new(0, vec![]).is_err());
    }

    #[test]
    fn sampler_reuse_is_clean() {
        let mut smp = UrnSampler::new();
        let spec = GroupedUrnSpec::new(6, vec![2, 2, 3]).unwrap();
        for t in 0..100 {
            let mut a = RngStream::new(3, t);
            let mut b = RngStream::new(3, t);
            assert_eq!(smp.grouped(&spec, &mut a), grouped_urn_sample(&spec, &mut b).empty_count);
        }
    }

    #[test]
    fn classical_exact_small() {
        assert_eq!(classical_urn_exact(2, 1).unwrap(), vec![0.0, 1.0, 0.0]);
        assert_eq!(classical_urn_exact(2, 2).unwrap(), vec![0.5, 0.5, 0.0]);
        assert!(classical_urn_exact(31, 1).unwrap_err().is_capacity());
        assert!(classical_urn_exact(3, 201).unwrap_err().is_capacity());
    }

    #[test]
    fn classical_exact_mean_matches_lambda() {
        let pmf = classical_urn_exact(10, 10).unwrap();
        assert!(close(mean(&pmf), 10.0 * 0.9f64.powi(10), 1e-12));
    }

    #[test]
    fn grouped_exact_small() {
        let full = GroupedUrnSpec::new(4, vec![4]).unwrap();
        assert_eq!(grouped_urn_exact(&full).unwrap(), vec![1.0, 0.0, 0.0, 0.0, 0.0]);
        let one = GroupedUrnSpec::new(3, vec![1]).unwrap();
        assert_eq!(grouped_urn_exact(&one).unwrap(), vec![0.0, 0.0, 1.0, 0.0]);
        let empty = GroupedUrnSpec::new(3, vec![0, 0]).unwrap();
        assert_eq!(grouped_urn_exact(&empty).unwrap(), vec![0.0, 0.0, 0.0, 1.0]);
        let big = GroupedUrnSpec::new(30, vec![15, 15]).unwrap();
        assert!(grouped_urn_exact(&big).unwrap_err().is_capacity());
    }

    #[test]
    fn grouped_exact_counts_cover_all_combinations() {
        let spec = GroupedUrnSpec::new(6, vec![2, 2, 3]).unwrap();
        let (counts, total) = grouped_exact_counts(&spec).unwrap();
        assert_eq!(total, 15 * 15 * 20);
        assert_eq!(counts.iter().sum::<u64>(), total);
        // at most 7 balls in 6 urns, and at least 3 urns are hit
        assert_eq!(counts[4..].iter().sum::<u64>(), 0);
    }

    #[test]
    fn unit_groups_equal_classical_exactly() {
        let spec = GroupedUrnSpec::unit_groups(5, 4).unwrap();
        let report = dominance_check(&spec, 1, &RngStream::new(0, 0)).unwrap();
        assert!(report.exact);
        assert_eq!(report.max_margin, 0.0);
        assert!(!report.violated);
    }

    #[test]
    fn csv_rows() {
        let t = SurvivalTable::from_pmf(UrnModel::Classical, 2, vec![2], &[0.5, 0.5, 0.0]);
        assert_eq!(
            t.to_csv(),
            "model,k,s_vec,t,survival,stderr\nclassical,2,2,0,1,0\nclassical,2,2,1,0.5,0\nclassical,2,2,2,0,0\n"
        );
    }
}

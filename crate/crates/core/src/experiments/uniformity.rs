use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Instance, Symbol};
use crate::solvers::canonical_matching;

/// Largest number of instance pairs `k^{2n}` the exhaustive test will enumerate.
pub const UNIFORMITY_MAX_PAIRS: u128 = 10_000_000;

/// Canonical symbol sets of all pairs with `R = l`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthClass {
    pub l: usize,
    /// Number of pairs with `R = l`.
    pub instances: u64,
    /// `C(k, l)`.
    pub subsets: u128,
    /// Count of each canonical symbol set that occurs, in lexicographic order.
    pub counts: Vec<(Vec<Symbol>, u64)>,
    /// True when every `l`-subset occurs equally often (vacuously true with no pairs).
    pub uniform: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniformityReport {
    pub n: usize,
    pub k: usize,
    pub pairs: u128,
    pub classes: Vec<LengthClass>,
    pub uniform: bool,
}

fn binomial_u128(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

fn decode(mut code: u64, n: usize, k: usize) -> Vec<Symbol> {
    (0..n)
        .map(|_| {
            let c = (code % k as u64) as Symbol;
            code /= k as u64;
            c
        })
        .collect()
}

type Counts = Vec<BTreeMap<Vec<Symbol>, u64>>;

/// Enumerates all `k^{2n}` pairs and tabulates the canonical matching's symbol set by `R`.
/// Uniformity is decided on integer counts, with no tolerance.
pub fn uniformity_test_exhaustive(n: usize, k: usize) -> Result<UniformityReport> {
    if k == 0 {
        return Err(Error::invalid("alphabet size must be positive"));
    }
    let pairs = (k as u128)
        .checked_pow(2 * n as u32)
        .filter(|&p| p <= UNIFORMITY_MAX_PAIRS)
        .ok_or_else(|| Error::capacity("instance pairs for exhaustive enumeration", u128::MAX, UNIFORMITY_MAX_PAIRS))?;
    let per_side = (k as u64).pow(n as u32);
    let max_l = n.min(k);
    let empty = || -> Counts { vec![BTreeMap::new(); max_l + 1] };
    let counts = (0..per_side)
        .into_par_iter()
        .map(|a| -> Result<Counts> {
            let mut c = empty();
            let x = decode(a, n, k);
            for b in 0..per_side {
                let inst = Instance::new(k, 0, x.clone(), decode(b, n, k))?;
                let m = canonical_matching(&inst)?;
                let set: Vec<Symbol> = m.symbol_set().into_iter().collect();
                *c[set.len()].entry(set).or_insert(0) += 1;
            }
            Ok(c)
        })
        .try_reduce(empty, |mut acc, part| {
            for (a, p) in acc.iter_mut().zip(part) {
                for (set, v) in p {
                    *a.entry(set).or_insert(0) += v;
                }
            }
            Ok(acc)
        })?;

    let classes: Vec<LengthClass> = counts
        .into_iter()
        .enumerate()
        .map(|(l, map)| {
            let instances: u64 = map.values().sum();
            let subsets = binomial_u128(k, l);
            let counts: Vec<(Vec<Symbol>, u64)> = map.into_iter().collect();
            let uniform = instances == 0
                || (counts.len() as u128 == subsets && counts.iter().all(|&(_, c)| c == counts[0].1));
            LengthClass {
                l,
                instances,
                subsets,
                counts,
                uniform,
            }
        })
        .collect();
    Ok(UniformityReport {
        n,
        k,
        pairs,
        uniform: classes.iter().all(|c| c.uniform),
        classes,
    })
}

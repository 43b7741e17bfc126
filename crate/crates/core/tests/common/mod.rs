//! Independent oracles shared by the integration tests. None of them calls into the
//! library's solvers or urn routines.
#![allow(dead_code)]

use proptest::prelude::*;
use rflcs::{Instance, Symbol};

pub fn is_subsequence(z: &[Symbol], s: &[Symbol]) -> bool {
    let mut it = s.iter();
    z.iter().all(|c| it.any(|d| d == c))
}

/// LCS by trying every subset of positions of `x`.
pub fn lcs_exhaustive(x: &[Symbol], y: &[Symbol]) -> usize {
    let n = x.len();
    (0u32..1 << n)
        .filter_map(|mask| {
            let z: Vec<Symbol> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| x[i]).collect();
            is_subsequence(&z, y).then_some(z.len())
        })
        .max()
        .unwrap_or(0)
}

/// Repetition-free LCS by trying every repetition-free sequence over `0..k`.
pub fn rflcs_by_sequences(x: &[Symbol], y: &[Symbol], k: usize) -> usize {
    fn grow(z: &mut Vec<Symbol>, used: &mut Vec<bool>, x: &[Symbol], y: &[Symbol], best: &mut usize) {
        *best = (*best).max(z.len());
        for c in 0..used.len() {
            if used[c] {
                continue;
            }
            z.push(c as Symbol);
            if is_subsequence(z, x) && is_subsequence(z, y) {
                used[c] = true;
                grow(z, used, x, y, best);
                used[c] = false;
            }
            z.pop();
        }
    }
    let mut best = 0;
    grow(&mut Vec::new(), &mut vec![false; k], x, y, &mut best);
    best
}

/// Every maximum repetition-free noncrossing matching, by recursive edge enumeration.
pub fn all_maximum_rf_matchings(x: &[Symbol], y: &[Symbol]) -> Vec<Vec<(usize, usize)>> {
    fn rec(
        x: &[Symbol],
        y: &[Symbol],
        from: (usize, usize),
        cur: &mut Vec<(usize, usize)>,
        used: &mut Vec<Symbol>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        out.push(cur.clone());
        for i in from.0..x.len() {
            for j in from.1..y.len() {
                if x[i] == y[j] && !used.contains(&x[i]) {
                    cur.push((i, j));
                    used.push(x[i]);
                    rec(x, y, (i + 1, j + 1), cur, used, out);
                    used.pop();
                    cur.pop();
                }
            }
        }
    }
    let mut all = Vec::new();
    rec(x, y, (0, 0), &mut Vec::new(), &mut Vec::new(), &mut all);
    let best = all.iter().map(Vec::len).max().unwrap_or(0);
    all.retain(|m| m.len() == best);
    all
}

/// Classical empty-urn distribution by a ball-by-ball Markov chain on the occupied count.
pub fn classical_markov(k: usize, s: usize) -> Vec<f64> {
    let mut occ = vec![0.0; k + 1];
    occ[0] = 1.0;
    for _ in 0..s {
        let mut next = vec![0.0; k + 1];
        for (c, &p) in occ.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let fresh = (k - c) as f64 / k as f64;
            next[c] += p * (1.0 - fresh);
            if c < k {
                next[c + 1] += p * fresh;
            }
        }
        occ = next;
    }
    (0..=k).map(|empty| occ[k - empty]).collect()
}

fn choose(n: usize, r: usize) -> f64 {
    if r > n {
        return 0.0;
    }
    (0..r).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Grouped empty-urn distribution by a group-by-group hypergeometric chain.
pub fn grouped_hypergeometric(k: usize, s_vec: &[usize]) -> Vec<f64> {
    let mut occ = vec![0.0; k + 1];
    occ[0] = 1.0;
    for &s in s_vec {
        let mut next = vec![0.0; k + 1];
        for (c, &p) in occ.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            for fresh in 0..=s.min(k - c) {
                let w = choose(k - c, fresh) * choose(c, s - fresh) / choose(k, s);
                next[c + fresh] += p * w;
            }
        }
        occ = next;
    }
    (0..=k).map(|empty| occ[k - empty]).collect()
}

pub fn instance(k: usize, x: Vec<Symbol>, y: Vec<Symbol>) -> Instance {
    Instance::new(k, 0, x, y).expect("valid instance")
}

/// Small random instances: `n <= max_n`, `k` in `1..=max_k`.
pub fn small_instance(max_n: usize, max_k: usize) -> impl Strategy<Value = Instance> {
    (1..=max_k, 0..=max_n).prop_flat_map(|(k, n)| {
        let sym = 0..k as Symbol;
        (
            Just(k),
            proptest::collection::vec(sym.clone(), n),
            proptest::collection::vec(sym, n),
        )
            .prop_map(|(k, x, y)| instance(k, x, y))
    })
}

//! Exact repetition-free LCS by dynamic programming over used-symbol sets.
//!
//! For every suffix pair `(x[i..], y[j..])` the table stores the family of symbol sets `S`
//! such that some repetition-free common subsequence of the two suffixes uses exactly `S`.
//! A family is a bitset indexed by subset mask, so it occupies `2^k'` bits where `k'` is the
//! number of symbols occurring in both sequences. The recurrence is
//!
//! ```text
//! B(i, j) = B(i+1, j) | B(i, j+1) | lift_c(B(i+1, j+1))   (lift only when x[i] = y[j] = c)
//! ```
//!
//! where `lift_c` maps every set without `c` to the same set with `c` added. Families are
//! downward closed, and `R` is the largest cardinality present in `B(0, 0)`.
//!
//! The witness is recovered greedily front to back: at each step take the lexicographically
//! smallest edge `(i, j)` that still admits a completion to full length using unused symbols.

use crate::error::{Error, Result};
use crate::model::{Instance, NoncrossingMatching, SolveMethod, SolveResult, Symbol};

pub const DEFAULT_K_MAX_EXACT: usize = 20;
/// 256 MiB of `u64` words.
pub const DEFAULT_MAX_TABLE_WORDS: usize = 1 << 25;

/// `LOW_CLEAR[c]` has bit `p` set iff bit `c` of `p` is clear (`p < 64`).
const LOW_CLEAR: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

/// `POP_AT_LEAST[t]` has bit `p` set iff `popcount(p) >= t` (`p < 64`).
const POP_AT_LEAST: [u64; 8] = {
    let mut out = [0u64; 8];
    let mut t = 0;
    while t < 8 {
        let mut p = 0;
        while p < 64 {
            if (p as u64).count_ones() >= t as u32 {
                out[t] |= 1u64 << p;
            }
            p += 1;
        }
        t += 1;
    }
    out
};

/// Configurable exact solver. [`rflcs_exact`] uses the defaults.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactSolver {
    pub k_max: usize,
    pub max_table_words: usize,
}

impl Default for ExactSolver {
    fn default() -> Self {
        ExactSolver {
            k_max: DEFAULT_K_MAX_EXACT,
            max_table_words: DEFAULT_MAX_TABLE_WORDS,
        }
    }
}

/// Exact `R(G)` with the canonical witness, using [`ExactSolver::default`].
pub fn rflcs_exact(inst: &Instance) -> Result<SolveResult> {
    ExactSolver::default().solve(inst)
}

impl ExactSolver {
    pub fn with_k_max(mut self, k_max: usize) -> Self {
        self.k_max = k_max;
        self
    }

    pub fn solve(&self, inst: &Instance) -> Result<SolveResult> {
        self.solve_slices(inst.x(), inst.y(), inst.k())
    }

    pub(crate) fn solve_slices(&self, x: &[Symbol], y: &[Symbol], k: usize) -> Result<SolveResult> {
        if k > self.k_max {
            return Err(Error::capacity("alphabet size for exact solver", k as u64, self.k_max as u64));
        }
        self.solve_reduced(&Reduced::new(x, y, k))
    }

    /// Applies `k_max` to the number of symbols the two sequences share instead of the
    /// nominal alphabet, so short blocks over a large alphabet stay solvable.
    pub(crate) fn solve_shared(&self, x: &[Symbol], y: &[Symbol], k: usize) -> Result<SolveResult> {
        let reduced = Reduced::new(x, y, k);
        if reduced.alphabet() > self.k_max {
            return Err(Error::capacity(
                "shared alphabet size for exact solver",
                reduced.alphabet() as u64,
                self.k_max as u64,
            ));
        }
        self.solve_reduced(&reduced)
    }

    fn solve_reduced(&self, reduced: &Reduced) -> Result<SolveResult> {
        let table = Table::build(reduced, self.max_table_words)?;
        let witness = table.canonical_witness(reduced);
        Ok(SolveResult::new(SolveMethod::Exact, witness))
    }
}

/// Both sequences restricted to symbols they share, with symbols renumbered `0..k'`.
struct Reduced {
    xs: Vec<u8>,
    ys: Vec<u8>,
    pos_x: Vec<usize>,
    pos_y: Vec<usize>,
    symbol_of: Vec<Symbol>,
}

impl Reduced {
    fn new(x: &[Symbol], y: &[Symbol], k: usize) -> Self {
        let mut in_x = vec![false; k];
        let mut in_y = vec![false; k];
        x.iter().for_each(|&c| in_x[c as usize] = true);
        y.iter().for_each(|&c| in_y[c as usize] = true);
        let mut local = vec![u8::MAX; k];
        let mut symbol_of = Vec::new();
        for c in 0..k {
            if in_x[c] && in_y[c] {
                local[c] = symbol_of.len() as u8;
                symbol_of.push(c as Symbol);
            }
        }
        let keep = |s: &[Symbol]| -> (Vec<u8>, Vec<usize>) {
            s.iter()
                .enumerate()
                .filter(|&(_, &c)| local[c as usize] != u8::MAX)
                .map(|(p, &c)| (local[c as usize], p))
                .unzip()
        };
        let (xs, pos_x) = keep(x);
        let (ys, pos_y) = keep(y);
        Reduced {
            xs,
            ys,
            pos_x,
            pos_y,
            symbol_of,
        }
    }

    fn alphabet(&self) -> usize {
        self.symbol_of.len()
    }
}

struct Table {
    words: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Table {
    fn build(r: &Reduced, max_words: usize) -> Result<Self> {
        let kk = r.alphabet();
        if kk > 40 {
            return Err(Error::capacity("shared alphabet size for exact DP table", kk as u64, 40u64));
        }
        let words = if kk <= 6 { 1 } else { 1usize << (kk - 6) };
        let (nx, ny) = (r.xs.len(), r.ys.len());
        let cols = ny + 1;
        let total = (nx as u128 + 1) * (cols as u128) * (words as u128);
        if total > max_words as u128 {
            return Err(Error::capacity("exact DP table words", total, max_words as u128));
        }
        let mut data = vec![0u64; total as usize];
        let mut t = Table { words, cols, data: Vec::new() };
        for j in 0..=ny {
            data[t.offset(nx, j)] = 1;
        }
        for i in 0..nx {
            data[t.offset(i, ny)] = 1;
        }
        for i in (0..nx).rev() {
            for j in (0..ny).rev() {
                let dst = t.offset(i, j);
                let (head, tail) = data.split_at_mut(dst + words);
                let cell = &mut head[dst..];
                let base = dst + words;
                let down = &tail[t.offset(i + 1, j) - base..][..words];
                let right = &tail[t.offset(i, j + 1) - base..][..words];
                for w in 0..words {
                    cell[w] = down[w] | right[w];
                }
                if r.xs[i] == r.ys[j] {
                    let diag = &tail[t.offset(i + 1, j + 1) - base..][..words];
                    lift_into(cell, diag, r.xs[i] as usize);
                }
            }
        }
        t.data = data;
        Ok(t)
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        (i * self.cols + j) * self.words
    }

    fn cell(&self, i: usize, j: usize) -> &[u64] {
        let o = self.offset(i, j);
        &self.data[o..o + self.words]
    }

    fn canonical_witness(&self, r: &Reduced) -> NoncrossingMatching {
        let nx = r.xs.len();
        let best = max_cardinality(self.cell(0, 0));

        let mut next_in_y = vec![vec![]; r.alphabet()];
        for (j, &c) in r.ys.iter().enumerate() {
            next_in_y[c as usize].push(j);
        }

        let mut witness = NoncrossingMatching::new();
        let (mut pi, mut pj) = (0, 0);
        let mut used = 0u64;
        for remaining in (1..=best).rev() {
            let mut chosen = None;
            for i in pi..nx {
                let c = r.xs[i] as usize;
                if used >> c & 1 == 1 {
                    continue;
                }
                let ys = &next_in_y[c];
                // later j only shrink the suffix family, so the first j >= pj decides
                let Some(&j) = ys.get(ys.partition_point(|&j| j < pj)) else {
                    continue;
                };
                if completes(self.cell(i + 1, j + 1), used | 1 << c, remaining - 1) {
                    chosen = Some((i, j, c));
                    break;
                }
            }
            let (i, j, c) = chosen.expect("feasible extension exists at every step");
            witness.push((r.pos_x[i], r.pos_y[j]), r.symbol_of[c]);
            used |= 1 << c;
            pi = i + 1;
            pj = j + 1;
        }
        witness
    }
}

/// `dst |= { S ∪ {c} : S ∈ src, c ∉ S }`.
fn lift_into(dst: &mut [u64], src: &[u64], c: usize) {
    if c < 6 {
        let shift = 1u32 << c;
        for (d, s) in dst.iter_mut().zip(src) {
            *d |= (s & LOW_CLEAR[c]) << shift;
        }
    } else {
        let step = 1usize << (c - 6);
        for w in 0..src.len() {
            if w & step == 0 {
                dst[w + step] |= src[w];
            }
        }
    }
}

/// Whether the family holds a set of size at least `need` avoiding `forbid`.
fn completes(family: &[u64], forbid: u64, need: usize) -> bool {
    if need == 0 {
        return true;
    }
    let high_forbid = (forbid >> 6) as usize;
    let allowed_low = (0..6)
        .filter(|c| forbid >> c & 1 == 1)
        .fold(u64::MAX, |acc, c| acc & LOW_CLEAR[c]);
    family.iter().enumerate().any(|(w, &bits)| {
        if w & high_forbid != 0 {
            return false;
        }
        let v = bits & allowed_low;
        let t = need.saturating_sub(w.count_ones() as usize);
        v != 0 && t <= 6 && v & POP_AT_LEAST[t] != 0
    })
}

fn max_cardinality(family: &[u64]) -> usize {
    family
        .iter()
        .enumerate()
        .filter(|&(_, &bits)| bits != 0)
        .map(|(w, &bits)| {
            let low = (0..=6).rev().find(|&t| bits & POP_AT_LEAST[t] != 0).unwrap_or(0);
            w.count_ones() as usize + low
        })
        .max()
        .unwrap_or(0)
}

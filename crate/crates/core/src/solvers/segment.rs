//! Segment-merge lower bound.
//!
//! Both sequences are cut into aligned blocks `A_i x B_i`; each block is solved on its own
//! and the block matchings are concatenated (block alignment keeps the union noncrossing).
//! Repeated symbols are then removed, keeping the leftmost edge of each, which leaves a
//! repetition-free matching of the whole instance whose size is the number of distinct
//! symbols over all block solutions.

use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::degree_one::degree_one_matching;
use super::exact::ExactSolver;
use super::lis::lis_indices;
use crate::error::{Error, Result};
use crate::model::{Instance, NoncrossingMatching, SolveMethod, SolveResult, Symbol};

/// What to do with the `n mod n_tilde` positions past the last full block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Leftover {
    Drop,
    FoldIntoLast,
}

/// How each block is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PerSegment {
    /// Exact repetition-free optimum (canonical witness) of the block. Fails when the
    /// symbols shared inside a block exceed the exact solver's limit.
    Exact,
    /// LIS of the block's degree-one permutation.
    Lis,
    /// Exact on every block whose shared alphabet and table fit the exact solver, LIS on
    /// the others.
    #[default]
    Auto,
}

impl FromStr for PerSegment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(PerSegment::Exact),
            "lis" => Ok(PerSegment::Lis),
            "auto" => Ok(PerSegment::Auto),
            other => Err(Error::invalid(format!("unknown per-segment solver {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentPlan {
    pub n_tilde: usize,
    pub b: usize,
    pub leftover: Leftover,
}

/// Block size `ceil(k^{3/4})`.
pub fn heuristic_segment_size(k: usize) -> usize {
    let s = (k as f64).powf(0.75).ceil() as usize;
    s.max(1)
}

impl SegmentPlan {
    /// The plan with `b = floor(n / n_tilde)` blocks.
    pub fn for_length(n: usize, n_tilde: usize, leftover: Leftover) -> Result<Self> {
        if n_tilde == 0 {
            return Err(Error::invalid("segment size must be positive"));
        }
        let plan = SegmentPlan {
            n_tilde,
            b: n / n_tilde,
            leftover,
        };
        plan.validate(n)?;
        Ok(plan)
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.n_tilde == 0 || self.b == 0 {
            return Err(Error::invalid("segment plan needs a positive size and count"));
        }
        if self.b.saturating_mul(self.n_tilde) > n {
            return Err(Error::invalid(format!(
                "{} segments of size {} do not fit in length {n}",
                self.b, self.n_tilde
            )));
        }
        Ok(())
    }

    /// Index ranges of the blocks, shared by both sequences.
    pub fn ranges(&self, n: usize) -> Vec<Range<usize>> {
        (0..self.b)
            .map(|s| {
                let start = s * self.n_tilde;
                let end = if s + 1 == self.b && self.leftover == Leftover::FoldIntoLast {
                    n
                } else {
                    start + self.n_tilde
                };
                start..end
            })
            .collect()
    }
}

fn lis_block(x: &[Symbol], y: &[Symbol]) -> Result<Vec<(usize, usize)>> {
    let edges = degree_one_matching(x, y);
    let perm = super::degree_one::permutation_of(&edges);
    Ok(lis_indices(&perm)?.into_iter().map(|p| edges[p]).collect())
}

fn solve_block(x: &[Symbol], y: &[Symbol], k: usize, per_segment: PerSegment) -> Result<Vec<(usize, usize)>> {
    let exact = ExactSolver::default();
    match per_segment {
        PerSegment::Exact => Ok(exact.solve_shared(x, y, k)?.witness.edges),
        PerSegment::Lis => lis_block(x, y),
        PerSegment::Auto => match exact.solve_shared(x, y, k) {
            Ok(r) => Ok(r.witness.edges),
            Err(e) if e.is_capacity() => lis_block(x, y),
            Err(e) => Err(e),
        },
    }
}

/// The block solutions, in block order, as edges of the full instance.
pub(crate) fn block_solutions(
    inst: &Instance,
    plan: &SegmentPlan,
    per_segment: PerSegment,
) -> Result<Vec<NoncrossingMatching>> {
    plan.validate(inst.n())?;
    plan.ranges(inst.n())
        .into_iter()
        .map(|r| {
            let edges = solve_block(&inst.x()[r.clone()], &inst.y()[r.clone()], inst.k(), per_segment)?;
            let shifted = edges.into_iter().map(|(i, j)| (i + r.start, j + r.start)).collect();
            Ok(NoncrossingMatching::from_edges(shifted, inst.x()))
        })
        .collect()
}

/// Concatenates the block solutions and keeps the leftmost edge of every symbol.
pub fn segment_merge_heuristic(inst: &Instance, plan: &SegmentPlan, per_segment: PerSegment) -> Result<SolveResult> {
    let blocks = block_solutions(inst, plan, per_segment)?;
    let mut seen = vec![false; inst.k()];
    let mut merged = NoncrossingMatching::new();
    for block in &blocks {
        for (&e, &c) in block.edges.iter().zip(&block.symbols) {
            if !std::mem::replace(&mut seen[c as usize], true) {
                merged.push(e, c);
            }
        }
    }
    Ok(SolveResult::new(SolveMethod::Heuristic, merged))
}

//! Solvers for LCS, LIS and the repetition-free LCS.
//!
//! [`rflcs_exact`] is the workhorse: an exponential-in-`k` dynamic program whose witness is
//! the canonical optimum (lexicographically smallest edge list among maximum
//! repetition-free noncrossing matchings). [`rflcs_bruteforce`] is an independent
//! enumeration oracle for tiny instances, and [`segment_merge_heuristic`] is the scalable
//! block-decomposition lower bound.

mod brute;
mod degree_one;
mod exact;
mod lcs;
mod lis;
mod segment;

pub use brute::{rflcs_bruteforce, BRUTE_FORCE_MAX_N};
pub use degree_one::{degree_one_matching, degree_one_permutation};
pub use exact::{rflcs_exact, ExactSolver, DEFAULT_K_MAX_EXACT, DEFAULT_MAX_TABLE_WORDS};
pub use lcs::lcs_length;
pub use lis::{lis_indices, lis_length};
pub use segment::{heuristic_segment_size, segment_merge_heuristic, Leftover, PerSegment, SegmentPlan};

use crate::error::Result;
use crate::model::{Instance, NoncrossingMatching};

/// The canonical matching: the lexicographically smallest edge list among all maximum
/// repetition-free noncrossing matchings.
///
/// Uses the exact solver, falling back to brute-force enumeration when the alphabet is too
/// large for the exact table but the instance is short enough to enumerate.
pub fn canonical_matching(inst: &Instance) -> Result<NoncrossingMatching> {
    match rflcs_exact(inst) {
        Ok(r) => Ok(r.witness),
        Err(e) if e.is_capacity() && inst.n() <= BRUTE_FORCE_MAX_N => {
            Ok(rflcs_bruteforce(inst)?.witness)
        }
        Err(e) => Err(e),
    }
}

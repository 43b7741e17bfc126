use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::gen_uniform_pair;
use crate::rng::RngStream;
use crate::solvers::rflcs_exact;
use crate::stats::Summary;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaturationStats {
    pub k: usize,
    pub n: usize,
    pub trials: usize,
    pub mean: f64,
    pub stderr: f64,
    /// Fraction of trials with `R = k`.
    pub fraction_at_k: f64,
}

/// Exact `R` over `trials` uniform instances at a fixed alphabet. Trial `t` draws from
/// stream `(rng.master_seed(), t)`.
pub fn run_fixed_k_saturation(k: usize, n: usize, trials: usize, rng: &RngStream) -> Result<SaturationStats> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    let seed = rng.master_seed();
    let values = (0..trials)
        .into_par_iter()
        .map(|t| {
            let inst = gen_uniform_pair(n, k, &mut RngStream::new(seed, t as u64))?;
            Ok(rflcs_exact(&inst)?.length)
        })
        .collect::<Result<Vec<usize>>>()?;
    let summary = Summary::of(values.iter().map(|&v| v as f64));
    let saturated = values.iter().filter(|&&v| v == k).count();
    Ok(SaturationStats {
        k,
        n,
        trials,
        mean: summary.mean,
        stderr: summary.stderr,
        fraction_at_k: saturated as f64 / trials as f64,
    })
}

//! Monte Carlo harness.
//!
//! Every stochastic routine here derives one [`RngStream`](crate::RngStream) per trial from
//! `(master_seed, trial ordinal)`, runs trials on the rayon pool and folds the results back
//! in trial order, so outputs never depend on the number of worker threads.

mod saturation;
mod sweep;
mod tailbound;
mod uniformity;

pub use saturation::{run_fixed_k_saturation, SaturationStats};
pub use sweep::{run_regime_sweep, Estimator, SweepConfig, SweepReport, SweepRow, TrialEstimate, SWEEP_CSV_HEADER};
pub use tailbound::{run_tailbound_suite, CheckItem, TailboundReport};
pub use uniformity::{uniformity_test_exhaustive, LengthClass, UniformityReport, UNIFORMITY_MAX_PAIRS};

use crate::error::{Error, Result};

/// Runs `f` inside a pool of `workers` threads, or on the global pool when `workers` is 0.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::invalid(format!("cannot build a pool of {workers} workers: {e}")))?;
    Ok(pool.install(f))
}

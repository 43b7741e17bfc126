use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::with_workers;
use crate::bounds::{regime_target, Regime};
use crate::error::{Error, Result};
use crate::generators::gen_uniform_pair;
use crate::rng::RngStream;
use crate::solvers::{
    heuristic_segment_size, lcs_length, segment_merge_heuristic, ExactSolver, Leftover, PerSegment, SegmentPlan,
};
use crate::stats::Summary;

pub const SWEEP_CSV_HEADER: &str = "regime,k,n,trials,mean_R,stderr,lower,upper,theory_target,tail_xi,tail_value";
const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Estimator {
    /// Exact `R` on every trial.
    Exact,
    /// Segment-merge lower value and `min(L, k)` upper value.
    Heuristic,
    /// Both sides of the heuristic, plus exact `R` whenever the alphabet allows it.
    Bracket,
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Estimator::Exact),
            "heuristic" => Ok(Estimator::Heuristic),
            "bracket" => Ok(Estimator::Bracket),
            other => Err(Error::invalid(format!("unknown estimator {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub regime: Regime,
    pub k_list: Vec<usize>,
    pub rho: f64,
    pub xi: f64,
    pub trials: usize,
    pub estimator: Estimator,
    pub n_override: Option<usize>,
    pub master_seed: u64,
    /// Worker threads; 0 uses the global pool. Never affects the report.
    #[serde(default)]
    pub workers: usize,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        if self.k_list.contains(&0) {
            return Err(Error::invalid("alphabet sizes must be positive"));
        }
        let k_max = ExactSolver::default().k_max;
        if self.estimator == Estimator::Exact {
            if let Some(&k) = self.k_list.iter().find(|&&k| k > k_max) {
                return Err(Error::capacity("alphabet size for exact sweep", k as u64, k_max as u64));
            }
        }
        Ok(())
    }
}

/// Per-trial values behind a report row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialEstimate {
    pub lower: usize,
    pub upper: usize,
    pub exact: Option<usize>,
}

impl TrialEstimate {
    /// Exact value when computed, otherwise the lower value.
    pub fn value(&self) -> usize {
        self.exact.unwrap_or(self.lower)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub regime: u32,
    pub k: usize,
    pub n: usize,
    pub trials: usize,
    #[serde(rename = "mean_R")]
    pub mean_r: f64,
    pub stderr: f64,
    pub lower: f64,
    pub upper: f64,
    pub theory_target: f64,
    pub tail_xi: f64,
    pub tail_value: f64,
    #[serde(skip)]
    pub per_trial: Vec<TrialEstimate>,
}

impl SweepRow {
    /// Fraction of trials whose estimate equals `k`.
    pub fn fraction_at_k(&self) -> f64 {
        let hits = self.per_trial.iter().filter(|t| t.value() == self.k).count();
        hits as f64 / self.per_trial.len().max(1) as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub format_version: u32,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(SWEEP_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                r.regime,
                r.k,
                r.n,
                r.trials,
                r.mean_r,
                r.stderr,
                r.lower,
                r.upper,
                r.theory_target,
                r.tail_xi,
                r.tail_value
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

fn estimate_trial(k: usize, n: usize, estimator: Estimator, seed: u64, trial: usize) -> Result<TrialEstimate> {
    let mut rng = RngStream::new(seed, trial as u64);
    let inst = gen_uniform_pair(n, k, &mut rng)?;
    let exact_solver = ExactSolver::default();
    if estimator == Estimator::Exact {
        let r = exact_solver.solve(&inst)?.length;
        return Ok(TrialEstimate {
            lower: r,
            upper: r,
            exact: Some(r),
        });
    }
    let lower = if n == 0 {
        0
    } else {
        // a single block when n is shorter than the nominal block size
        let n_tilde = heuristic_segment_size(k).min(n);
        let plan = SegmentPlan::for_length(n, n_tilde, Leftover::FoldIntoLast)?;
        segment_merge_heuristic(&inst, &plan, PerSegment::Auto)?.length
    };
    let upper = lcs_length(inst.x(), inst.y()).length.min(k);
    let exact = if estimator == Estimator::Bracket && k <= exact_solver.k_max {
        Some(exact_solver.solve(&inst)?.length)
    } else {
        None
    };
    Ok(TrialEstimate { lower, upper, exact })
}

fn sweep_row(config: &SweepConfig, k: usize) -> Result<SweepRow> {
    let target = regime_target(config.regime, k, config.rho, config.xi, config.n_override)?;
    let n = target.n;
    let per_trial = (0..config.trials)
        .into_par_iter()
        .map(|t| estimate_trial(k, n, config.estimator, config.master_seed, t))
        .collect::<Result<Vec<_>>>()?;
    let value = Summary::of(per_trial.iter().map(|t| t.value() as f64));
    let lower = Summary::of(per_trial.iter().map(|t| t.lower as f64)).mean;
    let upper = Summary::of(per_trial.iter().map(|t| t.upper as f64)).mean;
    Ok(SweepRow {
        regime: config.regime.index(),
        k,
        n,
        trials: config.trials,
        mean_r: value.mean,
        stderr: value.stderr,
        lower,
        upper,
        theory_target: target.target,
        tail_xi: config.xi,
        tail_value: target.tail(config.xi),
        per_trial,
    })
}

/// One row per alphabet size in `k_list`, each over `trials` uniform instances of the
/// regime's length. Trial `t` of every row draws from stream `(master_seed, t)`.
pub fn run_regime_sweep(config: &SweepConfig) -> Result<SweepReport> {
    config.validate()?;
    let rows = with_workers(config.workers, || {
        config.k_list.iter().map(|&k| sweep_row(config, k)).collect::<Result<Vec<_>>>()
    })??;
    Ok(SweepReport {
        format_version: FORMAT_VERSION,
        rows,
    })
}

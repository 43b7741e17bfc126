//! Small summary statistics used by the Monte Carlo harness.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    /// Standard error of the mean (sample standard deviation over `sqrt(count)`).
    pub stderr: f64,
}

impl Summary {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Self {
        let values: Vec<f64> = values.into_iter().collect();
        let count = values.len();
        if count == 0 {
            return Summary {
                count,
                mean: 0.0,
                stderr: 0.0,
            };
        }
        let mean = values.iter().sum::<f64>() / count as f64;
        let stderr = if count > 1 {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1) as f64;
            (var / count as f64).sqrt()
        } else {
            0.0
        };
        Summary { count, mean, stderr }
    }
}

/// Binomial standard error `sqrt(p(1-p)/n)` of an empirical proportion.
pub fn proportion_stderr(p: f64, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    (p * (1.0 - p) / n as f64).max(0.0).sqrt()
}

/// Empirical survival function `P(V >= t)` for `t = 0..=max`.
pub fn survival_from_counts(counts: &[u64]) -> Vec<f64> {
    let total: u64 = counts.iter().sum();
    let mut out = vec![0.0; counts.len()];
    let mut acc = 0u64;
    for t in (0..counts.len()).rev() {
        acc += counts[t];
        out[t] = if total == 0 { 0.0 } else { acc as f64 / total as f64 };
    }
    out
}

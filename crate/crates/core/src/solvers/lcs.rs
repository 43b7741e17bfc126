use crate::model::{NoncrossingMatching, SolveMethod, SolveResult, Symbol};

/// Classical quadratic LCS dynamic program with witness recovery.
pub fn lcs_length(x: &[Symbol], y: &[Symbol]) -> SolveResult {
    let (n, m) = (x.len(), y.len());
    let w = m + 1;
    // suffix table: t[i*w + j] = LCS(x[i..], y[j..])
    let mut t = vec![0u32; (n + 1) * w];
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            t[i * w + j] = if x[i] == y[j] {
                t[(i + 1) * w + j + 1] + 1
            } else {
                t[(i + 1) * w + j].max(t[i * w + j + 1])
            };
        }
    }

    let mut witness = NoncrossingMatching::new();
    let (mut i, mut j) = (0, 0);
    while i < n && j < m {
        if x[i] == y[j] && t[i * w + j] == t[(i + 1) * w + j + 1] + 1 {
            witness.push((i, j), x[i]);
            i += 1;
            j += 1;
        } else if t[(i + 1) * w + j] >= t[i * w + j + 1] {
            i += 1;
        } else {
            j += 1;
        }
    }
    debug_assert_eq!(witness.len(), t[0] as usize);
    SolveResult::new(SolveMethod::Lcs, witness)
}

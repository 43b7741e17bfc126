use crate::error::{Error, Result};
use crate::model::{Instance, NoncrossingMatching, SolveMethod, SolveResult};

pub const BRUTE_FORCE_MAX_N: usize = 12;

/// Enumerates every subset of positions of `x`, keeps the repetition-free ones that embed
/// in `y`, and returns a longest. The `y` side is embedded greedily, which makes the
/// returned witness the lexicographically smallest optimum (the same one
/// [`rflcs_exact`](super::rflcs_exact) returns). Test oracle only.
pub fn rflcs_bruteforce(inst: &Instance) -> Result<SolveResult> {
    let n = inst.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::capacity("sequence length for brute force", n as u64, BRUTE_FORCE_MAX_N as u64));
    }
    let (x, y) = (inst.x(), inst.y());
    let mut best: Option<Vec<(usize, usize)>> = None;
    let mut seen = vec![false; inst.k()];
    'subsets: for mask in 0u32..(1 << n) {
        let positions: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if let Some(b) = &best {
            if positions.len() < b.len() {
                continue;
            }
        }
        seen.iter_mut().for_each(|s| *s = false);
        for &i in &positions {
            let c = x[i] as usize;
            if seen[c] {
                continue 'subsets;
            }
            seen[c] = true;
        }
        let mut edges = Vec::with_capacity(positions.len());
        let mut j = 0;
        for &i in &positions {
            match (j..n).find(|&jj| y[jj] == x[i]) {
                Some(jj) => {
                    edges.push((i, jj));
                    j = jj + 1;
                }
                None => continue 'subsets,
            }
        }
        let better = match &best {
            None => true,
            Some(b) => edges.len() > b.len() || (edges.len() == b.len() && edges < *b),
        };
        if better {
            best = Some(edges);
        }
    }
    let witness = NoncrossingMatching::from_edges(best.unwrap_or_default(), x);
    Ok(SolveResult::new(SolveMethod::Brute, witness))
}

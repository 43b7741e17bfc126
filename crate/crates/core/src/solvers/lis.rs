use crate::error::{Error, Result};

fn check_distinct(perm: &[usize]) -> Result<()> {
    let mut sorted = perm.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::invalid("LIS input must consist of distinct values"));
    }
    Ok(())
}

/// Indices of a longest strictly increasing subsequence, by patience sorting in
/// `O(t log t)`. Among the longest ones, returns the one ending at the leftmost possible
/// pile tops.
pub fn lis_indices(perm: &[usize]) -> Result<Vec<usize>> {
    check_distinct(perm)?;
    // tops[p]: index of the smallest tail value of an increasing run of length p + 1
    let mut tops: Vec<usize> = Vec::new();
    let mut prev: Vec<Option<usize>> = vec![None; perm.len()];
    for (idx, &v) in perm.iter().enumerate() {
        let pile = tops.partition_point(|&t| perm[t] < v);
        if pile > 0 {
            prev[idx] = Some(tops[pile - 1]);
        }
        if pile == tops.len() {
            tops.push(idx);
        } else {
            tops[pile] = idx;
        }
    }
    let mut out = Vec::with_capacity(tops.len());
    let mut cur = tops.last().copied();
    while let Some(idx) = cur {
        out.push(idx);
        cur = prev[idx];
    }
    out.reverse();
    Ok(out)
}

/// Length of a longest strictly increasing subsequence; rejects repeated values.
pub fn lis_length(perm: &[usize]) -> Result<usize> {
    Ok(lis_indices(perm)?.len())
}

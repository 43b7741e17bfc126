use crate::model::{Instance, Symbol};

/// Edges of the subgraph left after deleting every word-graph edge incident to a vertex of
/// degree greater than one. A surviving edge's symbol occurs exactly once in each sequence,
/// so the result is a perfect matching on its vertices with pairwise distinct symbols.
/// Sorted by the `x` coordinate.
pub fn degree_one_matching(x: &[Symbol], y: &[Symbol]) -> Vec<(usize, usize)> {
    let k = x.iter().chain(y).map(|&c| c as usize + 1).max().unwrap_or(0);
    let mut count_x = vec![0u32; k];
    let mut count_y = vec![0u32; k];
    let mut pos_y = vec![0usize; k];
    for &c in x {
        count_x[c as usize] += 1;
    }
    for (j, &c) in y.iter().enumerate() {
        count_y[c as usize] += 1;
        pos_y[c as usize] = j;
    }
    x.iter()
        .enumerate()
        .filter(|&(_, &c)| count_x[c as usize] == 1 && count_y[c as usize] == 1)
        .map(|(i, &c)| (i, pos_y[c as usize]))
        .collect()
}

/// The permutation induced by [`degree_one_matching`]: for the surviving edges read in
/// `x` order, the 0-based rank of each edge's `y` endpoint among all surviving `y` endpoints.
pub fn degree_one_permutation(inst: &Instance) -> Vec<usize> {
    permutation_of(&degree_one_matching(inst.x(), inst.y()))
}

pub(crate) fn permutation_of(edges: &[(usize, usize)]) -> Vec<usize> {
    let mut js: Vec<usize> = edges.iter().map(|&(_, j)| j).collect();
    js.sort_unstable();
    edges
        .iter()
        .map(|&(_, j)| js.binary_search(&j).expect("endpoint present"))
        .collect()
}

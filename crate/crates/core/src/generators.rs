//! Seeded instance generators: the uniform random word model and the planted model.

use crate::error::{Error, Result};
use crate::model::{Instance, PlantedCertificate, Symbol};
use crate::rng::RngStream;

fn uniform_sequence(n: usize, k: usize, rng: &mut RngStream) -> Vec<Symbol> {
    (0..n).map(|_| rng.below_usize(k) as Symbol).collect()
}

/// Two independent uniform length-`n` sequences over `0..k`.
pub fn gen_uniform_pair(n: usize, k: usize, rng: &mut RngStream) -> Result<Instance> {
    if k == 0 {
        return Err(Error::invalid("alphabet size k must be at least 1"));
    }
    let x = uniform_sequence(n, k, rng);
    let y = uniform_sequence(n, k, rng);
    Instance::new(k, rng.master_seed(), x, y)
}

/// Overwrites `l` uniformly chosen positions of `seq` with `z`, in order.
fn plant(seq: &mut [Symbol], z: &[Symbol], rng: &mut RngStream) -> Vec<usize> {
    let mut positions = rng.sample_distinct(seq.len(), z.len());
    positions.sort_unstable();
    for (&p, &c) in positions.iter().zip(z) {
        seq[p] = c;
    }
    positions
}

/// Planted model: a uniformly random repetition-free `z` of length `l` is written, in order,
/// over `l` random positions of each of two uniform sequences. The result therefore has a
/// repetition-free common subsequence of length at least `l`.
///
/// Both sequences are drawn before any planting, so `l = 0` yields exactly the instance
/// [`gen_uniform_pair`] would produce from the same stream.
pub fn gen_planted_pair(n: usize, k: usize, l: usize, rng: &mut RngStream) -> Result<Instance> {
    if k == 0 {
        return Err(Error::invalid("alphabet size k must be at least 1"));
    }
    if l > k || l > n {
        return Err(Error::invalid(format!(
            "planted length l={l} must not exceed k={k} or n={n}"
        )));
    }
    let mut x = uniform_sequence(n, k, rng);
    let mut y = uniform_sequence(n, k, rng);
    if l == 0 {
        return Instance::new(k, rng.master_seed(), x, y);
    }
    let z: Vec<Symbol> = rng.sample_distinct(k, l).into_iter().map(|c| c as Symbol).collect();
    let positions_x = plant(&mut x, &z, rng);
    let positions_y = plant(&mut y, &z, rng);
    let cert = PlantedCertificate {
        l,
        z,
        positions_x,
        positions_y,
    };
    Instance::new(k, rng.master_seed(), x, y)?.with_planted(cert)
}

/// All word graph edges `(i, j)` with `x[i] = y[j]`, sorted lexicographically.
pub fn word_graph_edges(inst: &Instance) -> Vec<(usize, usize)> {
    inst.word_graph_edges()
}

//! Domain types: instances, planted certificates, noncrossing matchings and solver results.
//!
//! Symbols are plain integers in `0..k`. A pair of sequences `(x, y)` induces the bipartite
//! word graph with an edge `(i, j)` for every `x[i] == y[j]`; common subsequences are exactly
//! the noncrossing matchings of that graph, and repetition-free ones are those whose edge
//! symbols are pairwise distinct.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An alphabet symbol, always in `0..k`.
pub type Symbol = u32;

/// Greedy left-to-right embedding test.
fn is_subsequence(z: &[Symbol], s: &[Symbol]) -> bool {
    let mut it = s.iter();
    z.iter().all(|c| it.any(|d| d == c))
}

/// True iff `z` is a subsequence of both `x` and `y`.
pub fn is_common_subsequence(z: &[Symbol], x: &[Symbol], y: &[Symbol]) -> bool {
    is_subsequence(z, x) && is_subsequence(z, y)
}

/// True iff no symbol occurs twice in `z`.
pub fn is_repetition_free(z: &[Symbol]) -> bool {
    let mut seen = BTreeSet::new();
    z.iter().all(|c| seen.insert(*c))
}

/// Record of a sequence planted into both sides of an instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedCertificate {
    pub l: usize,
    pub z: Vec<Symbol>,
    pub positions_x: Vec<usize>,
    pub positions_y: Vec<usize>,
}

impl PlantedCertificate {
    /// Checks the certificate against the sequences it claims to be planted in.
    pub fn validate(&self, x: &[Symbol], y: &[Symbol]) -> Result<()> {
        let l = self.l;
        if self.z.len() != l || self.positions_x.len() != l || self.positions_y.len() != l {
            return Err(Error::InvalidInstance(format!(
                "certificate lengths disagree with l={l}"
            )));
        }
        if !is_repetition_free(&self.z) {
            return Err(Error::InvalidInstance("planted sequence repeats a symbol".into()));
        }
        for (side, seq, pos) in [("x", x, &self.positions_x), ("y", y, &self.positions_y)] {
            if pos.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidInstance(format!(
                    "planted positions in {side} are not strictly increasing"
                )));
            }
            for (p, c) in pos.iter().zip(&self.z) {
                if seq.get(*p) != Some(c) {
                    return Err(Error::InvalidInstance(format!(
                        "{side}[{p}] does not carry planted symbol {c}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A pair of length-`n` sequences over `0..k`, with the seed that produced it.
///
/// Immutable once built; construct with [`Instance::new`] or deserialize from JSON, both of
/// which validate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance")]
pub struct Instance {
    n: usize,
    k: usize,
    seed: u64,
    x: Vec<Symbol>,
    y: Vec<Symbol>,
    planted: Option<PlantedCertificate>,
}

#[derive(Deserialize)]
struct RawInstance {
    n: usize,
    k: usize,
    seed: u64,
    x: Vec<Symbol>,
    y: Vec<Symbol>,
    #[serde(default)]
    planted: Option<PlantedCertificate>,
}

impl TryFrom<RawInstance> for Instance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        let inst = Instance::new(raw.k, raw.seed, raw.x, raw.y)?;
        if inst.n != raw.n {
            return Err(Error::InvalidInstance(format!(
                "declared n={} but sequences have length {}",
                raw.n, inst.n
            )));
        }
        match raw.planted {
            Some(cert) => inst.with_planted(cert),
            None => Ok(inst),
        }
    }
}

impl Instance {
    pub fn new(k: usize, seed: u64, x: Vec<Symbol>, y: Vec<Symbol>) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("alphabet size k must be at least 1"));
        }
        if x.len() != y.len() {
            return Err(Error::InvalidInstance(format!(
                "sequence lengths differ: {} vs {}",
                x.len(),
                y.len()
            )));
        }
        if let Some(c) = x.iter().chain(&y).find(|&&c| c as usize >= k) {
            return Err(Error::InvalidInstance(format!("symbol {c} outside alphabet of size {k}")));
        }
        Ok(Instance {
            n: x.len(),
            k,
            seed,
            x,
            y,
            planted: None,
        })
    }

    /// Attaches a planted certificate after checking it embeds in both sequences.
    pub fn with_planted(mut self, cert: PlantedCertificate) -> Result<Self> {
        if cert.l > self.k {
            return Err(Error::InvalidInstance(format!(
                "planted length {} exceeds alphabet size {}",
                cert.l, self.k
            )));
        }
        cert.validate(&self.x, &self.y)?;
        self.planted = Some(cert);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn x(&self) -> &[Symbol] {
        &self.x
    }

    pub fn y(&self) -> &[Symbol] {
        &self.y
    }

    pub fn planted(&self) -> Option<&PlantedCertificate> {
        self.planted.as_ref()
    }

    /// The word graph edge set `{(i, j) : x[i] = y[j]}` in lexicographic order.
    pub fn word_graph_edges(&self) -> Vec<(usize, usize)> {
        word_graph_edges(&self.x, &self.y)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInstance(e.to_string()))
    }
}

pub(crate) fn word_graph_edges(x: &[Symbol], y: &[Symbol]) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for (i, a) in x.iter().enumerate() {
        for (j, b) in y.iter().enumerate() {
            if a == b {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// A set of word-graph edges, each carrying its symbol.
///
/// Well-formed matchings have both coordinates strictly increasing along the edge list and
/// `symbols[e] == x[i_e] == y[j_e]`; see [`validate_matching`].
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NoncrossingMatching {
    pub edges: Vec<(usize, usize)>,
    pub symbols: Vec<Symbol>,
}

impl NoncrossingMatching {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a matching from edges, reading symbols off `x`.
    pub fn from_edges(edges: Vec<(usize, usize)>, x: &[Symbol]) -> Self {
        let symbols = edges.iter().map(|&(i, _)| x[i]).collect();
        NoncrossingMatching { edges, symbols }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn push(&mut self, edge: (usize, usize), symbol: Symbol) {
        self.edges.push(edge);
        self.symbols.push(symbol);
    }

    pub fn symbol_set(&self) -> BTreeSet<Symbol> {
        self.symbols.iter().copied().collect()
    }

    /// The common subsequence spelled by the matching.
    pub fn sequence(&self) -> &[Symbol] {
        &self.symbols
    }
}

/// Checks `m` against `inst`: ordered noncrossing edges, consistent symbols and, when asked,
/// pairwise distinct symbols.
pub fn validate_matching(m: &NoncrossingMatching, inst: &Instance, require_repetition_free: bool) -> bool {
    validate_on(m, inst.x(), inst.y(), require_repetition_free)
}

pub(crate) fn validate_on(
    m: &NoncrossingMatching,
    x: &[Symbol],
    y: &[Symbol],
    require_repetition_free: bool,
) -> bool {
    if m.edges.len() != m.symbols.len() {
        return false;
    }
    if m.edges.windows(2).any(|w| w[0].0 >= w[1].0 || w[0].1 >= w[1].1) {
        return false;
    }
    let consistent = m.edges.iter().zip(&m.symbols).all(|(&(i, j), &c)| {
        x.get(i) == Some(&c) && y.get(j) == Some(&c)
    });
    consistent && (!require_repetition_free || is_repetition_free(&m.symbols))
}

/// Which solver produced a [`SolveResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMethod {
    Exact,
    Brute,
    Heuristic,
    Lcs,
}

impl SolveMethod {
    pub fn is_repetition_free(self) -> bool {
        !matches!(self, SolveMethod::Lcs)
    }
}

/// Length of a solution together with a witnessing matching.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub method: SolveMethod,
    pub length: usize,
    pub symbol_set: BTreeSet<Symbol>,
    pub witness: NoncrossingMatching,
}

impl SolveResult {
    pub fn new(method: SolveMethod, witness: NoncrossingMatching) -> Self {
        SolveResult {
            method,
            length: witness.len(),
            symbol_set: witness.symbol_set(),
            witness,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("result serialization is infallible")
    }
}

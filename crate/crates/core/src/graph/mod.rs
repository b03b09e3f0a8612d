//! Finite digraphs with optional loops, and the structure theory of
//! reflexive tournaments built on them.

mod enumerate;
pub mod format;
mod hamilton;
mod product;
mod scc;
mod tournament;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::limits::Count;

pub use enumerate::{canonical_code, enumerate_tournaments, MAX_CANONICAL_N, MAX_ENUMERATE_N};
pub use hamilton::hamilton_cycle;
pub use product::{
    decode_tuple, diagonal_embedding, direct_product, encode_tuple, power, product_carrier,
    product_of, product_with_constants, projection, LabeledGraph,
};
pub use scc::{strongly_connected_components, SccChain};
pub use tournament::{transitive_tournament, Tournament};

/// Graphs up to this many vertices also carry a dense bit matrix.
pub const MATRIX_LIMIT: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    EndpointOutOfRange { u: usize, v: usize, n: usize },
    #[error("vertex {vertex} is outside 0..{n}")]
    InvalidVertex { vertex: usize, n: usize },
    #[error("{what} must be at least {min}, got {got}")]
    TooSmall {
        what: &'static str,
        min: usize,
        got: usize,
    },
    #[error("{what} must be at most {max}, got {got}")]
    TooLarge {
        what: &'static str,
        max: usize,
        got: usize,
    },
    #[error("missing loop at vertex {vertex}")]
    MissingLoop { vertex: usize },
    #[error("pair ({u}, {v}) is unrelated")]
    UnrelatedPair { u: usize, v: usize },
    #[error("pair ({u}, {v}) carries a double edge")]
    DoubleEdge { u: usize, v: usize },
    #[error("tournament is not strongly connected")]
    NotStronglyConnected,
    #[error("{what} needs {carrier} vertices ({factors} factors), cap is {cap}")]
    CapExceeded {
        what: &'static str,
        factors: u128,
        carrier: Count,
        cap: usize,
    },
    #[error("{what} needs {edges} edges, cap is {cap}")]
    EdgeCapExceeded {
        what: &'static str,
        edges: Count,
        cap: usize,
    },
    #[error("part {part} has {found} constants, expected {expected}")]
    ConstantCountMismatch {
        part: usize,
        expected: usize,
        found: usize,
    },
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A finite directed graph on the dense vertex set `0..n`.
///
/// Edges are kept as sorted out- and in-adjacency lists; small graphs also
/// carry out/in bit matrices so that edge tests and neighbourhood masks are
/// constant time.
#[derive(Clone, Debug)]
pub struct Digraph {
    n: usize,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
    out_bits: Option<Vec<FixedBitSet>>,
    in_bits: Option<Vec<FixedBitSet>>,
    edge_count: usize,
    name: Option<String>,
}

impl PartialEq for Digraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.out == other.out
    }
}

impl Eq for Digraph {}

impl Digraph {
    /// Builds a digraph, ignoring duplicate edges. With `reflexive` every
    /// vertex also receives a loop.
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        reflexive: bool,
    ) -> Result<Self, GraphError> {
        let mut out = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::EndpointOutOfRange { u, v, n });
            }
            out[u].push(v);
        }
        if reflexive {
            for (u, row) in out.iter_mut().enumerate() {
                row.push(u);
            }
        }
        Ok(Self::from_out_lists(out))
    }

    /// Internal constructor for callers that already validated endpoints.
    pub(crate) fn from_out_lists(mut out: Vec<Vec<usize>>) -> Self {
        let n = out.len();
        let mut inc = vec![Vec::new(); n];
        let mut edge_count = 0;
        for (u, row) in out.iter_mut().enumerate() {
            row.sort_unstable();
            row.dedup();
            edge_count += row.len();
            for &v in row.iter() {
                inc[v].push(u);
            }
        }
        let (out_bits, in_bits) = if n <= MATRIX_LIMIT {
            let to_bits = |lists: &[Vec<usize>]| {
                lists
                    .iter()
                    .map(|row| {
                        let mut bits = FixedBitSet::with_capacity(n);
                        for &v in row {
                            bits.insert(v);
                        }
                        bits
                    })
                    .collect::<Vec<_>>()
            };
            (Some(to_bits(&out)), Some(to_bits(&inc)))
        } else {
            (None, None)
        };
        Digraph {
            n,
            out,
            inc,
            out_bits,
            in_bits,
            edge_count,
            name: None,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_out_lists(vec![Vec::new(); n])
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        match &self.out_bits {
            Some(bits) => bits[u].contains(v),
            None => self.out[u].binary_search(&v).is_ok(),
        }
    }

    pub fn out_neighbors(&self, u: usize) -> &[usize] {
        &self.out[u]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    /// Out-neighbourhood as a bit set (computed on demand for big graphs).
    pub fn out_mask(&self, u: usize) -> FixedBitSet {
        match &self.out_bits {
            Some(bits) => bits[u].clone(),
            None => self.out[u].iter().copied().collect_bits(self.n),
        }
    }

    pub fn in_mask(&self, v: usize) -> FixedBitSet {
        match &self.in_bits {
            Some(bits) => bits[v].clone(),
            None => self.inc[v].iter().copied().collect_bits(self.n),
        }
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.iter().map(move |&v| (u, v)))
    }

    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        self.edges().collect()
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|v| self.has_edge(v, v))
    }

    /// Number of distinct non-loop neighbours (in or out).
    pub fn degree(&self, v: usize) -> usize {
        let outs = self.out[v].iter().filter(|&&w| w != v).count();
        let ins = self.inc[v].iter().filter(|&&w| w != v).count();
        outs + ins
    }

    pub fn has_double_edge(&self) -> bool {
        self.edges().any(|(u, v)| u < v && self.has_edge(v, u))
    }

    /// The same graph with every edge reversed.
    pub fn reverse(&self) -> Digraph {
        let mut g = Self::from_out_lists(self.inc.clone());
        g.name = self.name.clone();
        g
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.n > 0 && strongly_connected_components(self).len() == 1
    }

    /// The subgraph induced on `subset`, with the map from new ids to old ids.
    ///
    /// New ids follow the order of `subset`.
    pub fn induced(&self, subset: &[usize]) -> Result<(Digraph, Vec<usize>), GraphError> {
        let mut position = vec![usize::MAX; self.n];
        for (i, &v) in subset.iter().enumerate() {
            if v >= self.n {
                return Err(GraphError::InvalidVertex { vertex: v, n: self.n });
            }
            position[v] = i;
        }
        let out = subset
            .iter()
            .map(|&u| {
                self.out[u]
                    .iter()
                    .filter(|&&v| position[v] != usize::MAX)
                    .map(|&v| position[v])
                    .collect()
            })
            .collect();
        Ok((Self::from_out_lists(out), subset.to_vec()))
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Digraph {
        assert_eq!(perm.len(), self.n);
        let mut out = vec![Vec::new(); self.n];
        for (u, v) in self.edges() {
            out[perm[u]].push(perm[v]);
        }
        Self::from_out_lists(out)
    }
}

trait CollectBits {
    fn collect_bits(self, n: usize) -> FixedBitSet;
}

impl<I: Iterator<Item = usize>> CollectBits for I {
    fn collect_bits(self, n: usize) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(n);
        for v in self {
            bits.insert(v);
        }
        bits
    }
}

/// The reflexive directed cycle on `m` vertices: loops plus `(i, i+1 mod m)`.
pub fn reflexive_directed_cycle(m: usize) -> Result<Digraph, GraphError> {
    if m == 0 {
        return Err(GraphError::TooSmall {
            what: "cycle length",
            min: 1,
            got: 0,
        });
    }
    Ok(Digraph::new(m, (0..m).map(|i| (i, (i + 1) % m)), true)?.with_name(format!("DC*_{m}")))
}

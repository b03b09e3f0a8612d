//! Direct products. A tuple `(x_1, ..., x_k)` over factor sizes
//! `(n_1, ..., n_k)` is flattened to `((x_1 * n_2 + x_2) * n_3 + ...) + x_k`,
//! so the leftmost factor is the most significant digit.

use super::{Digraph, GraphError};
use crate::limits::{Count, Limits};
use crate::mapping::Mapping;

/// Number of vertices of the product of factors with the given sizes.
///
/// When the exact value overflows and the sizes differ, the reported power
/// uses the largest size and is an upper bound.
pub fn product_carrier(sizes: &[usize]) -> Count {
    let mut acc: Option<u128> = Some(1);
    for &s in sizes {
        acc = acc.and_then(|a| a.checked_mul(s as u128));
    }
    match acc {
        Some(value) => Count::exact(value),
        None => {
            let base = sizes.iter().copied().max().unwrap_or(1) as u128;
            Count::power(base, sizes.len() as u128)
        }
    }
}

fn guard(what: &'static str, sizes: &[usize], limits: &Limits) -> Result<usize, GraphError> {
    let carrier = product_carrier(sizes);
    if !carrier.fits(limits.max_vertices) {
        return Err(GraphError::CapExceeded {
            what,
            factors: sizes.len() as u128,
            carrier,
            cap: limits.max_vertices,
        });
    }
    Ok(carrier.value().expect("fits implies exact") as usize)
}

pub fn encode_tuple(sizes: &[usize], tuple: &[usize]) -> usize {
    debug_assert_eq!(sizes.len(), tuple.len());
    tuple
        .iter()
        .zip(sizes)
        .fold(0, |acc, (&x, &n)| {
            debug_assert!(x < n);
            acc * n + x
        })
}

pub fn decode_tuple(sizes: &[usize], mut id: usize) -> Vec<usize> {
    let mut tuple = vec![0; sizes.len()];
    for (slot, &n) in tuple.iter_mut().zip(sizes).rev() {
        *slot = id % n;
        id /= n;
    }
    tuple
}

fn product_pair(a: &Digraph, b: &Digraph) -> Digraph {
    let nb = b.n();
    let mut out = vec![Vec::new(); a.n() * nb];
    for (u, v) in a.edges() {
        for (x, y) in b.edges() {
            out[u * nb + x].push(v * nb + y);
        }
    }
    Digraph::from_out_lists(out)
}

/// Product of an arbitrary list of factors (an empty list gives the one-vertex
/// reflexive graph, the unit of the product).
pub fn product_of(parts: &[&Digraph], limits: &Limits) -> Result<Digraph, GraphError> {
    let sizes: Vec<usize> = parts.iter().map(|g| g.n()).collect();
    guard("product", &sizes, limits)?;
    let edges: Vec<usize> = parts.iter().map(|g| g.edge_count()).collect();
    let edge_count = product_carrier(&edges);
    if !edge_count.fits(limits.max_edges()) {
        return Err(GraphError::EdgeCapExceeded {
            what: "product",
            edges: edge_count,
            cap: limits.max_edges(),
        });
    }
    let mut acc = Digraph::new(1, [], true)?;
    for part in parts {
        acc = product_pair(&acc, part);
    }
    Ok(acc)
}

pub fn direct_product(a: &Digraph, b: &Digraph, limits: &Limits) -> Result<Digraph, GraphError> {
    product_of(&[a, b], limits)
}

pub fn power(a: &Digraph, k: usize, limits: &Limits) -> Result<Digraph, GraphError> {
    if k == 0 {
        return Err(GraphError::TooSmall {
            what: "power exponent",
            min: 1,
            got: 0,
        });
    }
    product_of(&vec![a; k], limits)
}

/// The projection of the product carrier onto factor `index`.
pub fn projection(sizes: &[usize], index: usize) -> Mapping {
    let total: usize = sizes.iter().product();
    let stride: usize = sizes[index + 1..].iter().product();
    let n = sizes[index];
    Mapping::from_parts(n, (0..total).map(|id| (id / stride) % n).collect())
}

/// `x -> (x, ..., x)` into the k-th power.
pub fn diagonal_embedding(a: &Digraph, k: usize, limits: &Limits) -> Result<Mapping, GraphError> {
    if k == 0 {
        return Err(GraphError::TooSmall {
            what: "power exponent",
            min: 1,
            got: 0,
        });
    }
    let sizes = vec![a.n(); k];
    let total = guard("diagonal embedding", &sizes, limits)?;
    Ok(Mapping::from_parts(
        total,
        (0..a.n()).map(|x| encode_tuple(&sizes, &vec![x; k])).collect(),
    ))
}

/// A digraph with named constants `c_1 .. c_n` interpreted as vertices.
/// Constants may repeat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    pub graph: Digraph,
    pub constants: Vec<usize>,
}

impl LabeledGraph {
    pub fn new(graph: Digraph, constants: Vec<usize>) -> Result<Self, GraphError> {
        if let Some(&vertex) = constants.iter().find(|&&c| c >= graph.n()) {
            return Err(GraphError::InvalidVertex {
                vertex,
                n: graph.n(),
            });
        }
        Ok(LabeledGraph { graph, constants })
    }
}

/// Product of constant-enriched graphs: constant `c_i` of the product is the
/// tuple of the parts' `c_i`.
pub fn product_with_constants(
    parts: &[LabeledGraph],
    limits: &Limits,
) -> Result<LabeledGraph, GraphError> {
    let Some(first) = parts.first() else {
        return Err(GraphError::TooSmall {
            what: "number of parts",
            min: 1,
            got: 0,
        });
    };
    let expected = first.constants.len();
    for (part, g) in parts.iter().enumerate() {
        if g.constants.len() != expected {
            return Err(GraphError::ConstantCountMismatch {
                part,
                expected,
                found: g.constants.len(),
            });
        }
    }
    let graphs: Vec<&Digraph> = parts.iter().map(|p| &p.graph).collect();
    let sizes: Vec<usize> = graphs.iter().map(|g| g.n()).collect();
    let graph = product_of(&graphs, limits)?;
    let constants = (0..expected)
        .map(|i| {
            let tuple: Vec<usize> = parts.iter().map(|p| p.constants[i]).collect();
            encode_tuple(&sizes, &tuple)
        })
        .collect();
    Ok(LabeledGraph { graph, constants })
}

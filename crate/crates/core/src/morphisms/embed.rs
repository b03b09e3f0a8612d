use std::collections::BTreeMap;

use serde::Serialize;

use super::search::{all_homs, HomConstraints};
use super::MorphismError;
use crate::graph::{canonical_code, Digraph, Tournament};
use crate::limits::Limits;
use crate::mapping::Mapping;

pub const EMBEDDING_BOUND: usize = 8;
pub const IMAGE_BOUND: usize = 6;

/// All injective maps `small -> big` whose image induces a copy of `small`
/// (edges and non-edges both preserved), in table order.
pub fn iso_embeddings(
    small: &Digraph,
    big: &Digraph,
    limits: &Limits,
) -> Result<Vec<Mapping>, MorphismError> {
    if big.n() > EMBEDDING_BOUND || small.n() > big.n() {
        return Err(MorphismError::TooLarge {
            what: "embedding search size",
            max: EMBEDDING_BOUND.min(big.n()),
            got: small.n().max(big.n()),
        });
    }
    let maps = all_homs(small, big, &HomConstraints::new().injective(), limits)?;
    Ok(maps
        .into_iter()
        .filter(|f| {
            (0..small.n()).all(|u| {
                (0..small.n()).all(|v| small.has_edge(u, v) == big.has_edge(f.apply(u), f.apply(v)))
            })
        })
        .collect())
}

/// A homomorphic image together with a surjective, edge-surjective witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomImage {
    #[serde(serialize_with = "serialize_edges")]
    pub graph: Digraph,
    pub map: Mapping,
    pub has_double_edge: bool,
}

fn serialize_edges<S: serde::Serializer>(g: &Digraph, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(g.edges())
}

/// Every homomorphic image of `h` on `size` vertices up to isomorphism.
///
/// An image is determined by a surjection `f: V(h) -> 0..size`; its edges
/// are exactly the images of `h`'s edges, so `f` is a surjective,
/// edge-surjective homomorphism onto it. Images are listed in canonical
/// labeling, each with the least witness (after relabeling) in table order.
pub fn edge_surjective_images(h: &Tournament, size: usize) -> Result<Vec<HomImage>, MorphismError> {
    let n = h.n();
    if n > IMAGE_BOUND || size == 0 || size >= n {
        return Err(MorphismError::TooLarge {
            what: "image search size",
            max: IMAGE_BOUND.min(n.saturating_sub(1)),
            got: size.max(n),
        });
    }
    let mut classes: BTreeMap<u64, HomImage> = BTreeMap::new();
    let mut table = vec![0usize; n];
    loop {
        let mut seen = vec![false; size];
        for &v in &table {
            seen[v] = true;
        }
        if seen.iter().all(|&b| b) {
            let image = Digraph::new(size, h.edges().map(|(u, v)| (table[u], table[v])), false)?;
            let (code, order) = canonical_code(&image)?;
            let mut relabel = vec![0; size];
            for (new, &old) in order.iter().enumerate() {
                relabel[old] = new;
            }
            let map = Mapping::from_parts(size, table.iter().map(|&v| relabel[v]).collect());
            let graph = image.relabel(&relabel);
            let candidate = HomImage {
                has_double_edge: graph.has_double_edge(),
                graph,
                map,
            };
            classes
                .entry(code)
                .and_modify(|best| {
                    if candidate.map < best.map {
                        *best = candidate.clone();
                    }
                })
                .or_insert(candidate);
        }
        // Next table in lexicographic order.
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(classes.into_values().collect());
            }
            pos -= 1;
            table[pos] += 1;
            if table[pos] < size {
                break;
            }
            table[pos] = 0;
        }
    }
}

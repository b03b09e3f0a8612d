//! Total functions between dense vertex sets.

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graph::Digraph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MappingError {
    #[error("mapping entry {index} -> {value} is outside the target of size {target_size}")]
    OutOfRange {
        index: usize,
        value: usize,
        target_size: usize,
    },
    #[error("cannot compose: first map targets {left} vertices, second has domain {right}")]
    Incompatible { left: usize, right: usize },
}

/// A total function `0..source_size -> 0..target_size`.
///
/// Used uniformly for homomorphisms, retractions, embeddings and k-ary
/// polymorphisms (whose source is the mixed-radix encoded power carrier).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mapping {
    target_size: usize,
    table: Vec<usize>,
}

impl Mapping {
    pub fn new(target_size: usize, table: Vec<usize>) -> Result<Self, MappingError> {
        if let Some((index, &value)) = table.iter().enumerate().find(|(_, &v)| v >= target_size) {
            return Err(MappingError::OutOfRange {
                index,
                value,
                target_size,
            });
        }
        Ok(Mapping { target_size, table })
    }

    pub(crate) fn from_parts(target_size: usize, table: Vec<usize>) -> Self {
        debug_assert!(table.iter().all(|&v| v < target_size));
        Mapping { target_size, table }
    }

    pub fn identity(n: usize) -> Self {
        Mapping {
            target_size: n,
            table: (0..n).collect(),
        }
    }

    pub fn constant(source_size: usize, target_size: usize, z: usize) -> Self {
        assert!(z < target_size, "constant {z} outside target of size {target_size}");
        Mapping {
            target_size,
            table: vec![z; source_size],
        }
    }

    pub fn source_size(&self) -> usize {
        self.table.len()
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, v: usize) -> usize {
        self.table[v]
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &Mapping) -> Result<Mapping, MappingError> {
        if self.target_size != then.source_size() {
            return Err(MappingError::Incompatible {
                left: self.target_size,
                right: then.source_size(),
            });
        }
        Ok(Mapping {
            target_size: then.target_size,
            table: self.table.iter().map(|&v| then.table[v]).collect(),
        })
    }

    /// Sorted, deduplicated image.
    pub fn image(&self) -> Vec<usize> {
        let mut seen = vec![false; self.target_size];
        for &v in &self.table {
            seen[v] = true;
        }
        (0..self.target_size).filter(|&v| seen[v]).collect()
    }

    pub fn is_surjective(&self) -> bool {
        self.image().len() == self.target_size
    }

    pub fn is_injective(&self) -> bool {
        self.image().len() == self.table.len()
    }

    pub fn is_bijective(&self) -> bool {
        self.table.len() == self.target_size && self.is_injective()
    }

    pub fn is_identity(&self) -> bool {
        self.table.len() == self.target_size && self.table.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// The constant value, if the map is constant on a non-empty domain.
    pub fn constant_value(&self) -> Option<usize> {
        let first = *self.table.first()?;
        self.table.iter().all(|&v| v == first).then_some(first)
    }

    /// Idempotent self-map: identity on its own image.
    pub fn is_idempotent(&self) -> bool {
        self.table.len() == self.target_size && self.table.iter().all(|&v| self.table[v] == v)
    }

    /// Checks the homomorphism condition from `source` to `target`.
    pub fn is_homomorphism(&self, source: &Digraph, target: &Digraph) -> bool {
        source.n() == self.table.len()
            && target.n() == self.target_size
            && source
                .edges()
                .all(|(u, v)| target.has_edge(self.table[u], self.table[v]))
    }

    /// Every target edge is the image of some source edge.
    pub fn is_edge_surjective(&self, source: &Digraph, target: &Digraph) -> bool {
        let mut hit = std::collections::HashSet::new();
        for (u, v) in source.edges() {
            hit.insert((self.table[u], self.table[v]));
        }
        target.edges().all(|e| hit.contains(&e))
    }

    /// Inverse of a bijection.
    pub fn inverse(&self) -> Option<Mapping> {
        if !self.is_bijective() {
            return None;
        }
        let mut table = vec![0; self.table.len()];
        for (i, &v) in self.table.iter().enumerate() {
            table[v] = i;
        }
        Some(Mapping {
            target_size: self.table.len(),
            table,
        })
    }
}

impl Serialize for Mapping {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.table.serialize(serializer)
    }
}

//! Size and search limits shared by every builder and solver.

use std::fmt;

use serde::Serialize;

/// Default cap on the carrier of any product or assembled instance.
pub const DEFAULT_MAX_VERTICES: usize = 1_000_000;

/// Default node budget for game-tree and homomorphism searches.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

/// Edges allowed per permitted vertex when a product is materialized.
pub const EDGES_PER_VERTEX: usize = 16;

/// Tunable limits. Every heavy operation takes one of these and refuses
/// gracefully (with the computed size) instead of running away.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_vertices: usize,
    pub node_budget: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_vertices: DEFAULT_MAX_VERTICES,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

impl Limits {
    pub fn with_max_vertices(mut self, max_vertices: usize) -> Self {
        self.max_vertices = max_vertices;
        self
    }

    pub fn with_node_budget(mut self, node_budget: u64) -> Self {
        self.node_budget = node_budget;
        self
    }

    /// Cap on the edges of a materialized product.
    pub fn max_edges(&self) -> usize {
        self.max_vertices.saturating_mul(EDGES_PER_VERTEX)
    }
}

/// A possibly astronomically large count, kept exact when it fits in `u128`
/// and otherwise reported symbolically as `base^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Count {
    Exact { value: u128 },
    Power { base: u128, exponent: u128 },
}

impl Count {
    pub fn exact(value: u128) -> Self {
        Count::Exact { value }
    }

    /// `base^exponent`, exact if it does not overflow.
    pub fn power(base: u128, exponent: u128) -> Self {
        if let Ok(e) = u32::try_from(exponent) {
            if let Some(value) = base.checked_pow(e) {
                return Count::Exact { value };
            }
        }
        Count::Power { base, exponent }
    }

    pub fn value(&self) -> Option<u128> {
        match *self {
            Count::Exact { value } => Some(value),
            Count::Power { .. } => None,
        }
    }

    /// True when the count is known to be at most `cap`.
    pub fn fits(&self, cap: usize) -> bool {
        matches!(self.value(), Some(v) if v <= cap as u128)
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Count::Exact { value } => write!(f, "{value}"),
            Count::Power { base, exponent } => write!(f, "{base}^{exponent}"),
        }
    }
}

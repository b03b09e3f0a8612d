//! Reflexive tournaments and their quantified constraint satisfaction
//! problems: structure, morphism search, hardness gadgets, and solvers.

pub mod gadgets;
pub mod graph;
pub mod limits;
pub mod mapping;
pub mod morphisms;
pub mod qcsp;

pub use graph::{Digraph, GraphError, LabeledGraph, SccChain, Tournament};
pub use limits::{Count, Limits};
pub use mapping::{Mapping, MappingError};

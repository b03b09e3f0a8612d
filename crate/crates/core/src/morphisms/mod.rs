//! Homomorphism search and the morphism-level predicates built on it.

mod embed;
mod endo;
mod poly;
mod search;

use thiserror::Error;

use crate::graph::GraphError;

pub use embed::{edge_surjective_images, iso_embeddings, HomImage, EMBEDDING_BOUND, IMAGE_BOUND};
pub use endo::{
    automorphisms, endomorphism_class, endomorphism_class_bounded, endomorphisms,
    is_endo_trivial, is_pair_endo_trivial, retract_to_core, EndoReport, AUTOMORPHISM_BOUND,
    ENDO_BOUND,
};
pub use poly::{
    classify_polymorphism, for_each_polymorphism, has_median_polymorphism, median_table,
    polymorphism_source, polymorphisms, PolymorphismReport, POLYMORPHISM_CARRIER_BOUND,
};
pub use search::{
    all_homs, enumerate_homs, find_hom, for_each_hom, retraction_constraints, retraction_to,
    Enumeration, HomConstraints,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphismError {
    #[error("search budget exhausted after {nodes} nodes")]
    Budget { nodes: u64 },
    #[error("{what} is limited to {max}, got {got}")]
    TooLarge {
        what: &'static str,
        max: usize,
        got: usize,
    },
    #[error("invalid constraint: {0}")]
    InvalidConstraint(String),
    #[error("map is not a polymorphism")]
    NotPolymorphism,
    #[error("tournament is not transitive")]
    NotTransitive,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

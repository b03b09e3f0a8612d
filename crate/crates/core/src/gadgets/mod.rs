//! Hardness machinery: cylinder gadgets, spill sets, canonical queries,
//! product-with-constants reductions and the certificate search.

mod certificate;
mod cyl;
mod query;
mod reduction;
mod spill;

use thiserror::Error;

use crate::graph::GraphError;
use crate::morphisms::MorphismError;
use crate::qcsp::QcspError;

pub use certificate::{
    find_hardness_certificate, verify_certificate, CertificateMode, Fact, FactCheck,
    HardnessCertificate, Route, CERTIFICATE_BOUND,
};
pub use cyl::{build_cyl, Gadget, GadgetMeta};
pub use query::{
    canonical_query, containment_sentence, pp_closure, qcsp_containment, CanonicalQuery,
};
pub use reduction::{
    build_reduction, BuildStats, LambdaList, Reduction, ReductionConfig, ReductionKind,
};
pub use spill::{
    attach_spill_instance, collapse_check, collapse_counterexample, free_pair_tournament,
    free_pair_witnesses, spill,
    verify_dagger, DaggerReport, SpillInstance, SpillReport, SpillWitness,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GadgetError {
    #[error("{0}")]
    Invalid(String),
    #[error("not a Hamilton cycle of the core: {0}")]
    InvalidCycle(String),
    #[error("malformed chain: {0}")]
    MalformedChain(String),
    #[error("construction check failed: {0}")]
    ConstructionCheck(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Qcsp(#[from] QcspError),
}

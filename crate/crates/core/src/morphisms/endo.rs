use serde::Serialize;

use super::search::{all_homs, HomConstraints};
use super::MorphismError;
use crate::graph::Digraph;
use crate::limits::Limits;
use crate::mapping::Mapping;

/// Default size bound for full endomorphism-monoid enumeration.
pub const ENDO_BOUND: usize = 7;

/// Largest graph `automorphisms` accepts.
pub const AUTOMORPHISM_BOUND: usize = 10;

fn check_size(what: &'static str, n: usize, max: usize) -> Result<(), MorphismError> {
    if n > max {
        return Err(MorphismError::TooLarge { what, max, got: n });
    }
    Ok(())
}

pub fn endomorphisms(g: &Digraph, limits: &Limits) -> Result<Vec<Mapping>, MorphismError> {
    all_homs(g, g, &HomConstraints::new(), limits)
}

pub fn automorphisms(g: &Digraph, limits: &Limits) -> Result<Vec<Mapping>, MorphismError> {
    check_size("automorphism search size", g.n(), AUTOMORPHISM_BOUND)?;
    all_homs(g, g, &HomConstraints::new().injective(), limits)
}

fn trivial(f: &Mapping) -> bool {
    f.is_bijective() || f.constant_value().is_some()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndoReport {
    pub endo_trivial: bool,
    pub retract_trivial: bool,
    /// A non-trivial retraction if there is one, otherwise a non-trivial
    /// endomorphism; least in table order.
    pub nontrivial_witness: Option<Mapping>,
}

pub fn endomorphism_class(g: &Digraph, limits: &Limits) -> Result<EndoReport, MorphismError> {
    endomorphism_class_bounded(g, ENDO_BOUND, limits)
}

pub fn endomorphism_class_bounded(
    g: &Digraph,
    bound: usize,
    limits: &Limits,
) -> Result<EndoReport, MorphismError> {
    check_size("endomorphism search size", g.n(), bound)?;
    let endos = endomorphisms(g, limits)?;
    let first_endo = endos.iter().find(|f| !trivial(f));
    let first_retraction = endos.iter().find(|f| f.is_idempotent() && !trivial(f));
    Ok(EndoReport {
        endo_trivial: first_endo.is_none(),
        retract_trivial: first_retraction.is_none(),
        nontrivial_witness: first_retraction.or(first_endo).cloned(),
    })
}

/// Whether every endomorphism is an automorphism or constant (no size bound).
pub fn is_endo_trivial(g: &Digraph, limits: &Limits) -> Result<bool, MorphismError> {
    Ok(endomorphism_class_bounded(g, usize::MAX, limits)?.endo_trivial)
}

/// Every endomorphism of `g` fixing each vertex of `core` is an automorphism.
pub fn is_pair_endo_trivial(
    g: &Digraph,
    core: &[usize],
    limits: &Limits,
) -> Result<bool, MorphismError> {
    let mut c = HomConstraints::new();
    for &v in core {
        c.pinned.insert(v, v);
    }
    let endos = all_homs(g, g, &c, limits)?;
    Ok(endos.iter().all(Mapping::is_bijective))
}

/// Repeatedly retracts onto the image of the least non-trivial retraction
/// until the current image is retract-trivial.
///
/// Returns the sorted vertex set of the final image and the composed
/// retraction of `g` onto it.
pub fn retract_to_core(g: &Digraph, limits: &Limits) -> Result<(Vec<usize>, Mapping), MorphismError> {
    let mut current: Vec<usize> = (0..g.n()).collect();
    let mut total = Mapping::identity(g.n());
    loop {
        let (sub, _) = g.induced(&current)?;
        let report = endomorphism_class_bounded(&sub, usize::MAX, limits)?;
        let Some(witness) = report.nontrivial_witness.filter(|w| w.is_idempotent()) else {
            return Ok((current, total));
        };
        let mut position = vec![usize::MAX; g.n()];
        for (i, &v) in current.iter().enumerate() {
            position[v] = i;
        }
        let step: Vec<usize> = (0..g.n())
            .map(|v| current[witness.apply(position[total.apply(v)])])
            .collect();
        total = Mapping::from_parts(g.n(), step);
        current = total.image();
    }
}

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use serde::Serialize;

use super::cyl::{attach, build_cyl, out_lists, Gadget};
use super::GadgetError;
use crate::graph::{Digraph, Tournament};
use crate::limits::Limits;
use crate::mapping::Mapping;
use crate::morphisms::{
    find_hom, for_each_hom, retraction_constraints, retraction_to, HomConstraints, MorphismError,
};

/// A host with a cylinder hung below its core: `H` keeps its ids, the
/// non-bottom gadget vertices follow in gadget-id order.
#[derive(Clone, Debug)]
pub struct SpillInstance {
    pub graph: Digraph,
    pub gadget: Gadget,
    /// Gadget vertex -> vertex of `graph`.
    pub placement: Vec<usize>,
    pub host_size: usize,
}

impl SpillInstance {
    /// The vertices whose retraction images make up the spill: the top copy,
    /// or just the pendant in the plus variant.
    pub fn designated(&self) -> Vec<usize> {
        match self.gadget.pendant {
            Some(p) => vec![self.placement[p]],
            None => self.gadget.top.iter().map(|&v| self.placement[v]).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpillReport {
    /// Designated vertex (id in the spill instance) -> reachable host vertices.
    pub per_top_vertex: BTreeMap<usize, Vec<usize>>,
    pub union: Vec<usize>,
    pub full: bool,
}

impl SpillReport {
    /// True when every designated vertex reaches the same set.
    pub fn uniform(&self) -> bool {
        let mut sets = self.per_top_vertex.values();
        match sets.next() {
            Some(first) => sets.all(|s| s == first),
            None => true,
        }
    }
}

pub(crate) fn check_core_cycle(h: &Digraph, core: &[usize], hc: &[usize]) -> Result<(), GadgetError> {
    let bad = |msg: String| Err(GadgetError::InvalidCycle(msg));
    if hc.len() < 2 {
        return bad(format!("needs at least 2 vertices, got {}", hc.len()));
    }
    if let Some(&v) = hc.iter().chain(core).find(|&&v| v >= h.n()) {
        return bad(format!("vertex {v} outside the host of size {}", h.n()));
    }
    let cycle_set: BTreeSet<usize> = hc.iter().copied().collect();
    if cycle_set.len() != hc.len() {
        return bad(format!("{hc:?} repeats a vertex"));
    }
    let core_set: BTreeSet<usize> = core.iter().copied().collect();
    if cycle_set != core_set || core_set.len() != core.len() {
        return bad(format!("{hc:?} does not list the core {core:?} once each"));
    }
    for (i, &u) in hc.iter().enumerate() {
        let v = hc[(i + 1) % hc.len()];
        if !h.has_edge(u, v) {
            return bad(format!("missing edge {u} -> {v}"));
        }
    }
    Ok(())
}

pub fn attach_spill_instance(
    h: &Tournament,
    core: &[usize],
    hc: &[usize],
    plus: bool,
) -> Result<SpillInstance, GadgetError> {
    check_core_cycle(h, core, hc)?;
    let gadget = build_cyl(hc.len(), plus)?;
    let mut out = out_lists(h);
    let placement = attach(&mut out, &gadget, hc, None);
    Ok(SpillInstance {
        graph: Digraph::from_out_lists(out),
        gadget,
        placement,
        host_size: h.n(),
    })
}

/// For every designated vertex `x`, the host vertices `y` such that some
/// retraction of the spill instance onto the host sends `x` to `y`.
pub fn spill(
    h: &Tournament,
    core: &[usize],
    hc: &[usize],
    plus: bool,
    limits: &Limits,
) -> Result<SpillReport, GadgetError> {
    let inst = attach_spill_instance(h, core, hc, plus)?;
    let host: Vec<usize> = (0..h.n()).collect();
    let base = retraction_constraints(&inst.graph, &host);
    let designated = inst.designated();
    let mut reach: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); designated.len()];
    for i in 0..designated.len() {
        for y in 0..h.n() {
            if reach[i].contains(&y) {
                continue;
            }
            let c = base.clone().pin(designated[i], y);
            if let Some(r) = find_hom(&inst.graph, &inst.graph, &c, limits)? {
                // Every retraction found also settles the other designated vertices.
                for (j, &x) in designated.iter().enumerate() {
                    reach[j].insert(r.apply(x));
                }
            }
        }
    }
    let union: BTreeSet<usize> = reach.iter().flatten().copied().collect();
    Ok(SpillReport {
        full: union.len() == h.n(),
        per_top_vertex: designated
            .iter()
            .zip(reach)
            .map(|(&x, set)| (x, set.into_iter().collect()))
            .collect(),
        union: union.into_iter().collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DaggerReport {
    pub m: usize,
    pub retractions: usize,
    /// Distinct induced maps, top position -> bottom position.
    pub top_maps: Vec<Vec<usize>>,
    pub rotations_only: bool,
}

/// Enumerates the retractions of the cylinder onto its bottom copy and
/// collects the maps they induce from the top copy to the bottom copy.
pub fn verify_dagger(m: usize, limits: &Limits) -> Result<DaggerReport, GadgetError> {
    if m > 4 {
        return Err(MorphismError::TooLarge {
            what: "cylinder size for retraction enumeration",
            max: 4,
            got: m,
        }
        .into());
    }
    let g = build_cyl(m, false)?;
    let c = retraction_constraints(&g.graph, &g.bottom);
    let mut maps = BTreeSet::new();
    let mut retractions = 0;
    let complete = for_each_hom(&g.graph, &g.graph, &c, limits, |table| {
        retractions += 1;
        maps.insert(g.top.iter().map(|&v| table[v] % m).collect::<Vec<_>>());
        ControlFlow::Continue(())
    })?;
    if !complete {
        return Err(MorphismError::Budget {
            nodes: limits.node_budget,
        }
        .into());
    }
    let rotations: BTreeSet<Vec<usize>> = (0..m)
        .map(|s| (0..m).map(|i| (i + s) % m).collect())
        .collect();
    Ok(DaggerReport {
        m,
        retractions,
        rotations_only: maps == rotations,
        top_maps: maps.into_iter().collect(),
    })
}

/// The first homomorphism from `gadget` into one of `targets` that sends the
/// bottom copy to a single vertex without being constant, with the index of
/// its target.
pub fn collapse_counterexample(
    gadget: &Gadget,
    targets: &[Tournament],
    limits: &Limits,
) -> Result<Option<(usize, Mapping)>, GadgetError> {
    for (index, t) in targets.iter().enumerate() {
        for w in 0..t.n() {
            let mut c = HomConstraints::new();
            for &b in &gadget.bottom {
                c = c.pin(b, w);
            }
            let mut found = None;
            let complete = for_each_hom(&gadget.graph, t, &c, limits, |table| {
                if table.iter().any(|&v| v != w) {
                    found = Some(Mapping::new(t.n(), table.to_vec()).expect("in range"));
                    return ControlFlow::Break(());
                }
                ControlFlow::Continue(())
            })?;
            if let Some(h) = found {
                return Ok(Some((index, h)));
            }
            if !complete {
                return Err(MorphismError::Budget {
                    nodes: limits.node_budget,
                }
                .into());
            }
        }
    }
    Ok(None)
}

/// True iff every homomorphism of the plain cylinder into a target that
/// collapses the bottom copy collapses everything.
pub fn collapse_check(m: usize, targets: &[Tournament], limits: &Limits) -> Result<bool, GadgetError> {
    Ok(collapse_counterexample(&build_cyl(m, false)?, targets, limits)?.is_none())
}

/// Pairs of the 6-vertex extensions of a 3-cycle on `{0, 1, 2}` whose
/// orientation is free: all `(u, v)` with `u < v` and `v >= 3`.
fn free_pairs() -> Vec<(usize, usize)> {
    (0..6)
        .flat_map(|u| (u + 1..6).map(move |v| (u, v)))
        .filter(|&(_, v)| v >= 3)
        .collect()
}

/// The extension with the given 12-bit code. The first free pair is the most
/// significant bit; a set bit orients the pair from the larger vertex.
pub fn free_pair_tournament(code: u32) -> Tournament {
    let pairs = free_pairs();
    let mut edges = vec![(0, 1), (1, 2), (2, 0)];
    for (i, &(u, v)) in pairs.iter().enumerate() {
        let bit = (code >> (pairs.len() - 1 - i)) & 1;
        edges.push(if bit == 1 { (v, u) } else { (u, v) });
    }
    Tournament::new(Digraph::new(6, edges, true).expect("valid ids")).expect("every pair oriented")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpillWitness {
    pub code: u32,
    pub edges: Vec<(usize, usize)>,
    pub spill: SpillReport,
}

/// Every 6-vertex extension of the 3-cycle on `{0, 1, 2}` that does not
/// retract onto it yet has full spill, in code order.
pub fn free_pair_witnesses(limits: &Limits) -> Result<Vec<SpillWitness>, GadgetError> {
    let core = [0, 1, 2];
    let mut out = Vec::new();
    for code in 0..1u32 << free_pairs().len() {
        let t = free_pair_tournament(code);
        if retraction_to(&t, &core, limits)?.is_some() {
            continue;
        }
        let report = spill(&t, &core, &core, false, limits)?;
        if report.full {
            out.push(SpillWitness {
                code,
                edges: t.edge_list(),
                spill: report,
            });
        }
    }
    Ok(out)
}

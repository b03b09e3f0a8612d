//! Backtracking homomorphism search with forward checking.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;

use super::MorphismError;
use crate::graph::Digraph;
use crate::limits::Limits;
use crate::mapping::Mapping;

/// Side conditions on a homomorphism search.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomConstraints {
    /// Source vertex -> forced image.
    pub pinned: BTreeMap<usize, usize>,
    /// Source vertex -> permitted images (vertices not listed are free).
    pub allowed: BTreeMap<usize, Vec<usize>>,
    pub surjective: bool,
    pub edge_surjective: bool,
    pub(crate) injective: bool,
}

impl HomConstraints {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pin(mut self, source: usize, target: usize) -> Self {
        self.pinned.insert(source, target);
        self
    }

    pub fn allow(mut self, source: usize, targets: impl IntoIterator<Item = usize>) -> Self {
        self.allowed.insert(source, targets.into_iter().collect());
        self
    }

    pub fn surjective(mut self) -> Self {
        self.surjective = true;
        self
    }

    pub fn edge_surjective(mut self) -> Self {
        self.edge_surjective = true;
        self
    }

    pub(crate) fn injective(mut self) -> Self {
        self.injective = true;
        self
    }

    fn validate(&self, source: &Digraph, target: &Digraph) -> Result<(), MorphismError> {
        let bad = |msg: String| Err(MorphismError::InvalidConstraint(msg));
        for (&s, &t) in &self.pinned {
            if s >= source.n() || t >= target.n() {
                return bad(format!("pin {s} -> {t} out of range"));
            }
            if let Some(allowed) = self.allowed.get(&s) {
                if !allowed.contains(&t) {
                    return bad(format!("pin {s} -> {t} outside its allowed set"));
                }
            }
        }
        for (&s, allowed) in &self.allowed {
            if s >= source.n() || allowed.iter().any(|&t| t >= target.n()) {
                return bad(format!("allowed set for {s} out of range"));
            }
        }
        Ok(())
    }
}

/// Result of an exhaustive enumeration. `complete` is false when the node
/// budget ran out, in which case `maps` holds what was found so far.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub maps: Vec<Mapping>,
    pub complete: bool,
}

struct Engine<'a> {
    source: &'a Digraph,
    target: &'a Digraph,
    order: Vec<usize>,
    domains: Vec<FixedBitSet>,
    trail: Vec<(usize, FixedBitSet)>,
    assignment: Vec<usize>,
    hits: Vec<u32>,
    missing: usize,
    out_masks: Vec<FixedBitSet>,
    in_masks: Vec<FixedBitSet>,
    surjective: bool,
    edge_surjective: bool,
    injective: bool,
    nodes: u64,
    budget: u64,
}

struct OutOfBudget;

impl<'a> Engine<'a> {
    fn new(
        source: &'a Digraph,
        target: &'a Digraph,
        c: &HomConstraints,
        limits: &Limits,
    ) -> Result<Self, MorphismError> {
        c.validate(source, target)?;
        let (n, m) = (source.n(), target.n());
        let mut domains = vec![FixedBitSet::with_capacity(m); n];
        for (v, dom) in domains.iter_mut().enumerate() {
            if let Some(&t) = c.pinned.get(&v) {
                dom.insert(t);
            } else if let Some(allowed) = c.allowed.get(&v) {
                for &t in allowed {
                    dom.insert(t);
                }
            } else {
                dom.insert_range(..);
            }
        }
        let mut order: Vec<usize> = c.pinned.keys().copied().collect();
        let mut rest: Vec<usize> = (0..n).filter(|v| !c.pinned.contains_key(v)).collect();
        rest.sort_by_key(|&v| (std::cmp::Reverse(source.degree(v)), v));
        order.extend(rest);
        Ok(Engine {
            source,
            target,
            order,
            domains,
            trail: Vec::new(),
            assignment: vec![usize::MAX; n],
            hits: vec![0; m],
            missing: m,
            out_masks: (0..m).map(|w| target.out_mask(w)).collect(),
            in_masks: (0..m).map(|w| target.in_mask(w)).collect(),
            surjective: c.surjective,
            edge_surjective: c.edge_surjective,
            injective: c.injective,
            nodes: 0,
            budget: limits.node_budget,
        })
    }

    fn restrict(&mut self, u: usize, mask: &FixedBitSet) -> bool {
        let dom = &self.domains[u];
        if dom.is_subset(mask) {
            return true;
        }
        let mut narrowed = dom.clone();
        narrowed.intersect_with(mask);
        let alive = !narrowed.is_clear();
        let old = std::mem::replace(&mut self.domains[u], narrowed);
        self.trail.push((u, old));
        alive
    }

    fn remove(&mut self, u: usize, w: usize) -> bool {
        if !self.domains[u].contains(w) {
            return true;
        }
        let old = self.domains[u].clone();
        self.domains[u].set(w, false);
        let alive = !self.domains[u].is_clear();
        self.trail.push((u, old));
        alive
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (u, old) = self.trail.pop().expect("trail");
            self.domains[u] = old;
        }
    }

    fn propagate(&mut self, v: usize, w: usize) -> bool {
        let source = self.source;
        for &u in source.out_neighbors(v) {
            if u != v && self.assignment[u] == usize::MAX {
                let mask = self.out_masks[w].clone();
                if !self.restrict(u, &mask) {
                    return false;
                }
            }
        }
        for &u in source.in_neighbors(v) {
            if u != v && self.assignment[u] == usize::MAX {
                let mask = self.in_masks[w].clone();
                if !self.restrict(u, &mask) {
                    return false;
                }
            }
        }
        if self.injective {
            for i in 0..self.source.n() {
                if self.assignment[i] == usize::MAX && !self.remove(i, w) {
                    return false;
                }
            }
        }
        true
    }

    fn accept_leaf(&self) -> bool {
        if self.surjective && self.missing > 0 {
            return false;
        }
        if self.edge_surjective {
            let f = Mapping::from_parts(self.target.n(), self.assignment.clone());
            return f.is_edge_surjective(self.source, self.target);
        }
        true
    }

    fn run(
        &mut self,
        depth: usize,
        visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>, OutOfBudget> {
        if depth == self.order.len() {
            if self.accept_leaf() {
                return Ok(visit(&self.assignment));
            }
            return Ok(ControlFlow::Continue(()));
        }
        let v = self.order[depth];
        let candidates: Vec<usize> = self.domains[v].ones().collect();
        let remaining = self.order.len() - depth - 1;
        let self_loop = self.source.has_edge(v, v);
        for w in candidates {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(OutOfBudget);
            }
            if self_loop && !self.target.has_edge(w, w) {
                continue;
            }
            let newly_hit = self.hits[w] == 0;
            if self.surjective && remaining < self.missing - usize::from(newly_hit) {
                continue;
            }
            self.assignment[v] = w;
            self.hits[w] += 1;
            if newly_hit {
                self.missing -= 1;
            }
            let mark = self.trail.len();
            let flow = if self.propagate(v, w) {
                self.run(depth + 1, visit)?
            } else {
                ControlFlow::Continue(())
            };
            self.undo(mark);
            self.hits[w] -= 1;
            if newly_hit {
                self.missing += 1;
            }
            self.assignment[v] = usize::MAX;
            if flow.is_break() {
                return Ok(flow);
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    /// Runs the whole search. Returns `Ok(true)` when it finished or was
    /// stopped by the visitor, `Ok(false)` when the budget ran out.
    fn drive(&mut self, visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>) -> bool {
        if self.domains.iter().any(FixedBitSet::is_clear) {
            return true;
        }
        if self.surjective && self.source.n() < self.target.n() {
            return true;
        }
        self.run(0, visit).is_ok()
    }
}

/// Calls `visit` on every constrained homomorphism (in search order, not
/// sorted). Returns whether the search ran to completion.
pub fn for_each_hom(
    source: &Digraph,
    target: &Digraph,
    c: &HomConstraints,
    limits: &Limits,
    mut visit: impl FnMut(&[usize]) -> ControlFlow<()>,
) -> Result<bool, MorphismError> {
    let mut engine = Engine::new(source, target, c, limits)?;
    Ok(engine.drive(&mut visit))
}

/// Some homomorphism satisfying the constraints, if one exists.
pub fn find_hom(
    source: &Digraph,
    target: &Digraph,
    c: &HomConstraints,
    limits: &Limits,
) -> Result<Option<Mapping>, MorphismError> {
    let mut found = None;
    let mut engine = Engine::new(source, target, c, limits)?;
    let finished = engine.drive(&mut |table: &[usize]| {
        found = Some(Mapping::from_parts(target.n(), table.to_vec()));
        ControlFlow::Break(())
    });
    if !finished {
        return Err(MorphismError::Budget {
            nodes: engine.nodes,
        });
    }
    Ok(found)
}

/// Every constrained homomorphism, in lexicographic order of tables.
pub fn enumerate_homs(
    source: &Digraph,
    target: &Digraph,
    c: &HomConstraints,
    limits: &Limits,
) -> Result<Enumeration, MorphismError> {
    let mut maps = Vec::new();
    let complete = for_each_hom(source, target, c, limits, |table| {
        maps.push(Mapping::from_parts(target.n(), table.to_vec()));
        ControlFlow::Continue(())
    })?;
    maps.sort();
    Ok(Enumeration { maps, complete })
}

/// Like [`enumerate_homs`] but treats an exhausted budget as an error.
pub fn all_homs(
    source: &Digraph,
    target: &Digraph,
    c: &HomConstraints,
    limits: &Limits,
) -> Result<Vec<Mapping>, MorphismError> {
    let e = enumerate_homs(source, target, c, limits)?;
    if !e.complete {
        return Err(MorphismError::Budget {
            nodes: limits.node_budget,
        });
    }
    Ok(e.maps)
}

/// Constraints making a self-map of `g` the identity on `sub` and sending
/// everything into `sub`.
pub fn retraction_constraints(g: &Digraph, sub: &[usize]) -> HomConstraints {
    let mut c = HomConstraints::new();
    for &v in sub {
        c.pinned.insert(v, v);
    }
    for v in 0..g.n() {
        if !c.pinned.contains_key(&v) {
            c.allowed.insert(v, sub.to_vec());
        }
    }
    c
}

/// A retraction of `g` onto the vertex set `sub`, if any.
pub fn retraction_to(
    g: &Digraph,
    sub: &[usize],
    limits: &Limits,
) -> Result<Option<Mapping>, MorphismError> {
    if let Some(&v) = sub.iter().find(|&&v| v >= g.n()) {
        return Err(MorphismError::InvalidConstraint(format!(
            "vertex {v} outside the graph"
        )));
    }
    find_hom(g, g, &retraction_constraints(g, sub), limits)
}

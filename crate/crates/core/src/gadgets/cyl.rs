use serde::Serialize;

use super::GadgetError;
use crate::graph::Digraph;

/// The cylinder gadget: `m` stacked reflexive `m`-cycles.
///
/// Vertex `(position i, copy j)` has id `j * m + i`. Copy 0 is the bottom,
/// copy `m - 1` the top. Besides loops and the cycle edges
/// `(i, j) -> (i + 1, j)` every adjacent pair of copies is joined by
/// `(i, j) -> (i, j + 1)` and `(i, j + 1) -> (i + 1, j)`, positions mod `m`.
/// The plus variant adds a looped pendant `m * m` fed by top position 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gadget {
    pub graph: Digraph,
    pub m: usize,
    pub bottom: Vec<usize>,
    pub top: Vec<usize>,
    pub pendant: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GadgetMeta {
    pub m: usize,
    pub bottom: Vec<usize>,
    pub top: Vec<usize>,
    pub pendant: Option<usize>,
    /// `[position, copy]` of every non-pendant vertex, by id.
    pub labels: Vec<[usize; 2]>,
}

pub fn build_cyl(m: usize, plus: bool) -> Result<Gadget, GadgetError> {
    if m < 2 {
        return Err(GadgetError::Invalid(format!(
            "cylinder needs m >= 2, got {m}"
        )));
    }
    let id = |i: usize, j: usize| j * m + i;
    let n = m * m + usize::from(plus);
    let mut edges = Vec::new();
    for j in 0..m {
        for i in 0..m {
            edges.push((id(i, j), id((i + 1) % m, j)));
            if j + 1 < m {
                edges.push((id(i, j), id(i, j + 1)));
                edges.push((id(i, j + 1), id((i + 1) % m, j)));
            }
        }
    }
    let pendant = plus.then_some(m * m);
    if let Some(p) = pendant {
        edges.push((id(0, m - 1), p));
    }
    Ok(Gadget {
        graph: Digraph::new(n, edges, true)?.with_name(if plus {
            format!("Cyl+_{m}")
        } else {
            format!("Cyl_{m}")
        }),
        m,
        bottom: (0..m).map(|i| id(i, 0)).collect(),
        top: (0..m).map(|i| id(i, m - 1)).collect(),
        pendant,
    })
}

impl Gadget {
    /// The vertex a reduction identifies with an outside vertex: the pendant
    /// in the plus variant, top position 0 otherwise.
    pub fn anchor(&self) -> usize {
        self.pendant.unwrap_or(self.top[0])
    }

    pub fn meta(&self) -> GadgetMeta {
        GadgetMeta {
            m: self.m,
            bottom: self.bottom.clone(),
            top: self.top.clone(),
            pendant: self.pendant,
            labels: (0..self.m * self.m).map(|v| [v % self.m, v / self.m]).collect(),
        }
    }
}

/// Appends a copy of `gadget` to the graph given by `out`, identifying
/// bottom position `j` with `bottom[j]` and, when given, the anchor with
/// `anchor`. Remaining gadget vertices become new vertices in gadget-id
/// order. Returns the gadget-to-graph vertex map.
pub(crate) fn attach(
    out: &mut Vec<Vec<usize>>,
    gadget: &Gadget,
    bottom: &[usize],
    anchor: Option<usize>,
) -> Vec<usize> {
    assert_eq!(bottom.len(), gadget.m);
    let mut place = vec![usize::MAX; gadget.graph.n()];
    for (j, &b) in gadget.bottom.iter().enumerate() {
        place[b] = bottom[j];
    }
    if let Some(a) = anchor {
        place[gadget.anchor()] = a;
    }
    for p in place.iter_mut() {
        if *p == usize::MAX {
            *p = out.len();
            out.push(Vec::new());
        }
    }
    for (u, v) in gadget.graph.edges() {
        out[place[u]].push(place[v]);
    }
    place
}

pub(crate) fn out_lists(g: &Digraph) -> Vec<Vec<usize>> {
    (0..g.n()).map(|u| g.out_neighbors(u).to_vec()).collect()
}

use std::ops::Deref;

use super::{Digraph, GraphError};

/// A digraph validated as a reflexive tournament: every vertex has a loop
/// and every pair of distinct vertices carries exactly one edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tournament(Digraph);

impl Tournament {
    pub fn new(graph: Digraph) -> Result<Self, GraphError> {
        let n = graph.n();
        for v in 0..n {
            if !graph.has_edge(v, v) {
                return Err(GraphError::MissingLoop { vertex: v });
            }
        }
        for u in 0..n {
            for v in u + 1..n {
                match (graph.has_edge(u, v), graph.has_edge(v, u)) {
                    (true, true) => return Err(GraphError::DoubleEdge { u, v }),
                    (false, false) => return Err(GraphError::UnrelatedPair { u, v }),
                    _ => {}
                }
            }
        }
        Ok(Tournament(graph))
    }

    pub fn graph(&self) -> &Digraph {
        &self.0
    }

    pub fn into_graph(self) -> Digraph {
        self.0
    }

    /// The tournament with all non-loop edges reversed.
    pub fn reverse(&self) -> Tournament {
        Tournament(self.0.reverse())
    }

    /// True when the edge relation is transitive.
    pub fn is_transitive(&self) -> bool {
        let g = &self.0;
        g.edges()
            .all(|(u, v)| g.out_neighbors(v).iter().all(|&w| g.has_edge(u, w)))
    }

    /// Induced subtournament on `subset` (new ids follow `subset`).
    pub fn subtournament(&self, subset: &[usize]) -> Result<Tournament, GraphError> {
        Ok(Tournament(self.0.induced(subset)?.0))
    }

    pub(crate) fn from_valid(graph: Digraph) -> Self {
        Tournament(graph)
    }
}

impl Deref for Tournament {
    type Target = Digraph;

    fn deref(&self) -> &Digraph {
        &self.0
    }
}

/// The reflexive transitive tournament `TT_k`: edge `(i, j)` iff `i <= j`.
pub fn transitive_tournament(k: usize) -> Result<Tournament, GraphError> {
    if k == 0 {
        return Err(GraphError::TooSmall {
            what: "tournament size",
            min: 1,
            got: 0,
        });
    }
    let edges = (0..k).flat_map(|i| (i..k).map(move |j| (i, j)));
    Ok(Tournament(
        Digraph::new(k, edges, false)?.with_name(format!("TT_{k}")),
    ))
}

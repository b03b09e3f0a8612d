use serde::Serialize;

use super::{Digraph, GraphError, Tournament};

/// Strongly connected components in topological order of the condensation
/// (sources first). Vertices inside a component are sorted.
pub fn strongly_connected_components(g: &Digraph) -> Vec<Vec<usize>> {
    // Iterative Tarjan.
    let n = g.n();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0;
    let mut frames: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        frames.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&(v, pos)) = frames.last() {
            let succ = g.out_neighbors(v);
            if pos < succ.len() {
                let w = succ[pos];
                frames.last_mut().expect("frame").1 += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            frames.pop();
            if let Some(&(parent, _)) = frames.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    comps.reverse();
    comps
}

/// The chain `H_1 => ... => H_n` of strongly connected components of a
/// reflexive tournament.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SccChain {
    components: Vec<Vec<usize>>,
    component_of: Vec<usize>,
}

impl SccChain {
    /// Computes the chain and checks that every cross edge points forward.
    pub fn new(t: &Tournament) -> Result<Self, GraphError> {
        let components = strongly_connected_components(t.graph());
        let mut component_of = vec![usize::MAX; t.n()];
        for (i, comp) in components.iter().enumerate() {
            for &v in comp {
                component_of[v] = i;
            }
        }
        let chain = SccChain {
            components,
            component_of,
        };
        chain.check(t)?;
        Ok(chain)
    }

    fn check(&self, t: &Tournament) -> Result<(), GraphError> {
        if self.component_of.contains(&usize::MAX) {
            return Err(GraphError::Internal("components do not cover V".into()));
        }
        for (u, v) in t.edges() {
            let (cu, cv) = (self.component_of[u], self.component_of[v]);
            if cu > cv {
                return Err(GraphError::Internal(format!(
                    "edge ({u}, {v}) runs backwards from component {cu} to {cv}"
                )));
            }
        }
        for comp in &self.components {
            let (sub, _) = t.induced(comp)?;
            if strongly_connected_components(&sub).len() != 1 {
                return Err(GraphError::Internal(format!(
                    "component {comp:?} is not strongly connected"
                )));
            }
        }
        Ok(())
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component_of(&self, v: usize) -> usize {
        self.component_of[v]
    }

    pub fn initial(&self) -> &[usize] {
        &self.components[0]
    }

    pub fn terminal(&self) -> &[usize] {
        self.components.last().expect("chain of an empty tournament")
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.components.iter().map(Vec::len).collect()
    }

    /// Endpoint sizes `(|H_1|, |H_n|)`.
    pub fn endpoint_sizes(&self) -> (usize, usize) {
        (self.initial().len(), self.terminal().len())
    }

    pub fn all_singletons(&self) -> bool {
        self.components.iter().all(|c| c.len() == 1)
    }
}

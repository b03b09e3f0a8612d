//! Sentences over TT_2 as quantified 2-SAT.
//!
//! Over `0 -> 1` the atom `edge(x,y)` fails only at `x = 1, y = 0`, i.e. it
//! is the clause `x -> y`. Literal `2v + 1` stands for `v = 1` and `2v` for
//! `v = 0`.

use serde::Serialize;

use super::sentence::{Atom, QcspSentence, Quantifier};
use super::QcspError;
use crate::graph::{strongly_connected_components, Digraph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImplicationSystem {
    /// Quantifier of each variable, in prefix order.
    pub quantifiers: Vec<Quantifier>,
    /// Implications between literals; closed under contraposition.
    pub implications: Vec<(usize, usize)>,
}

pub fn positive(v: usize) -> usize {
    2 * v + 1
}

pub fn negative(v: usize) -> usize {
    2 * v
}

fn negate(lit: usize) -> usize {
    lit ^ 1
}

pub fn tt2_implication_form(s: &QcspSentence) -> Result<ImplicationSystem, QcspError> {
    let mut implications = Vec::new();
    for atom in s.atoms() {
        match *atom {
            Atom::Edge(a, b) => {
                implications.push((positive(a), positive(b)));
                implications.push((negative(b), negative(a)));
            }
            Atom::Eq(..) => {
                return Err(QcspError::Unsupported(
                    "equality atoms must be eliminated first".into(),
                ))
            }
        }
    }
    for (&v, d) in s.domains() {
        if d.iter().any(|&w| w > 1) {
            return Err(QcspError::Unsupported(format!(
                "domain of `{}` mentions vertices outside {{0,1}}",
                s.name(v)
            )));
        }
        if !d.contains(&0) {
            implications.push((negative(v), positive(v)));
        }
        if !d.contains(&1) {
            implications.push((positive(v), negative(v)));
        }
    }
    implications.sort_unstable();
    implications.dedup();
    Ok(ImplicationSystem {
        quantifiers: s.prefix().iter().map(|(q, _)| *q).collect(),
        implications,
    })
}

/// Decides a quantified implication system via strongly connected
/// components of the implication graph. It is false exactly when
/// - some existential literal shares a component with its negation,
/// - some universal literal shares a component with a literal of an
///   existential variable quantified earlier, or
/// - some universal literal reaches a different universal literal.
pub fn solve_q2sat(sys: &ImplicationSystem) -> bool {
    let k = sys.quantifiers.len();
    let graph = Digraph::new(2 * k, sys.implications.iter().copied(), false)
        .expect("literal ids in range");
    let mut comp = vec![0; 2 * k];
    let components = strongly_connected_components(&graph);
    for (i, c) in components.iter().enumerate() {
        for &lit in c {
            comp[lit] = i;
        }
    }
    let universal = |lit: usize| sys.quantifiers[lit / 2] == Quantifier::Forall;

    for v in 0..k {
        if !universal(2 * v) && comp[positive(v)] == comp[negative(v)] {
            return false;
        }
    }
    for c in &components {
        let earliest_existential = c.iter().filter(|&&l| !universal(l)).map(|&l| l / 2).min();
        let latest_universal = c.iter().filter(|&&l| universal(l)).map(|&l| l / 2).max();
        if let (Some(e), Some(u)) = (earliest_existential, latest_universal) {
            if e < u {
                return false;
            }
        }
    }
    let mut seen = vec![false; 2 * k];
    for start in (0..2 * k).filter(|&l| universal(l)) {
        seen.iter_mut().for_each(|s| *s = false);
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(l) = stack.pop() {
            for &next in graph.out_neighbors(l) {
                if seen[next] {
                    continue;
                }
                if universal(next) {
                    return false;
                }
                seen[next] = true;
                stack.push(next);
            }
        }
    }
    true
}

/// Contraposition closure check (an invariant of the built systems).
pub fn is_contraposition_closed(sys: &ImplicationSystem) -> bool {
    sys.implications
        .iter()
        .all(|&(a, b)| sys.implications.binary_search(&(negate(b), negate(a))).is_ok())
}

//! Exact Hintikka-game evaluation.

use super::sentence::{Atom, QcspSentence, Quantifier};
use super::QcspError;
use crate::graph::Digraph;
use crate::limits::Limits;

struct Game<'a> {
    template: &'a Digraph,
    quantifiers: Vec<Quantifier>,
    /// Atoms to check once variable `i` (their later endpoint) is set.
    checks: Vec<Vec<(usize, usize)>>,
    allowed: Vec<Vec<bool>>,
    value: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl Game<'_> {
    fn eval(&mut self, i: usize) -> Result<bool, QcspError> {
        if i == self.quantifiers.len() {
            return Ok(true);
        }
        let exists = self.quantifiers[i] == Quantifier::Exists;
        for w in 0..self.template.n() {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(QcspError::Budget { nodes: self.nodes });
            }
            self.value[i] = w;
            let local = self.allowed[i][w]
                && self.checks[i]
                    .iter()
                    .all(|&(a, b)| self.template.has_edge(self.value[a], self.value[b]));
            let ok = local && self.eval(i + 1)?;
            if ok == exists {
                return Ok(ok);
            }
        }
        Ok(!exists)
    }
}

/// Decides `template |= s`. Domain restrictions act as conjuncts, so a
/// universal variable restricted to a proper subset makes the sentence
/// false. Equality atoms must be eliminated first.
pub fn solve_game(s: &QcspSentence, template: &Digraph, limits: &Limits) -> Result<bool, QcspError> {
    let k = s.var_count();
    let n = template.n();
    let mut checks = vec![Vec::new(); k];
    for atom in s.atoms() {
        match *atom {
            Atom::Edge(a, b) => checks[a.max(b)].push((a, b)),
            Atom::Eq(..) => {
                return Err(QcspError::Unsupported(
                    "equality atoms must be eliminated before game solving".into(),
                ))
            }
        }
    }
    let mut allowed = vec![vec![true; n]; k];
    for (&v, d) in s.domains() {
        allowed[v] = (0..n).map(|w| d.contains(&w)).collect();
    }
    if n == 0 {
        return Ok(s.prefix().iter().all(|(q, _)| *q == Quantifier::Forall));
    }
    let mut game = Game {
        template,
        quantifiers: s.prefix().iter().map(|(q, _)| *q).collect(),
        checks,
        allowed,
        value: vec![0; k],
        nodes: 0,
        budget: limits.node_budget,
    };
    game.eval(0)
}

use std::collections::BTreeMap;

use super::GadgetError;
use crate::graph::{product_with_constants, GraphError, LabeledGraph, Tournament};
use crate::limits::{Count, Limits};
use crate::morphisms::{find_hom, HomConstraints, MorphismError};
use crate::qcsp::{solve, Atom, Engine, QcspSentence, Quantifier};

/// The conjunction of a graph's edges over one variable per vertex.
///
/// Constants become the leading variables `y1 .. yn`, quantified
/// universally in [`CanonicalQuery::sentence`]; a vertex named by several
/// constants takes the first name and the others are tied to it by
/// equalities. Every other vertex `v` is an existential `v{v}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalQuery {
    pub sentence: QcspSentence,
    pub free: usize,
    /// Graph vertex -> variable index.
    pub variable_of: Vec<usize>,
}

impl CanonicalQuery {
    /// The sentence with the free variables fixed to `values` instead of
    /// quantified universally.
    pub fn bind(&self, values: &[usize]) -> QcspSentence {
        assert_eq!(values.len(), self.free, "one value per free variable");
        let mut s = self.sentence.clone();
        for (i, &value) in values.iter().enumerate() {
            s = s.with_quantifier(i, Quantifier::Exists);
            s.restrict(i, &[value]);
        }
        s
    }
}

pub fn canonical_query(g: &LabeledGraph) -> CanonicalQuery {
    let n = g.graph.n();
    let free = g.constants.len();
    let mut variable_of = vec![usize::MAX; n];
    let mut prefix = Vec::new();
    let mut atoms = Vec::new();
    for (i, &c) in g.constants.iter().enumerate() {
        prefix.push((Quantifier::Forall, format!("y{}", i + 1)));
        if variable_of[c] == usize::MAX {
            variable_of[c] = i;
        } else {
            atoms.push(Atom::Eq(variable_of[c], i));
        }
    }
    for v in 0..n {
        if variable_of[v] == usize::MAX {
            variable_of[v] = prefix.len();
            prefix.push((Quantifier::Exists, format!("v{v}")));
        }
    }
    atoms.extend(
        g.graph
            .edges()
            .map(|(u, v)| Atom::Edge(variable_of[u], variable_of[v])),
    );
    CanonicalQuery {
        sentence: QcspSentence::new(prefix, atoms, BTreeMap::new()).expect("declared variables"),
        free,
        variable_of,
    }
}

/// The product of `h` over every assignment `[n] -> V(h)` with constants
/// `c_i = (lambda(i))_lambda`, and its universally closed canonical query.
pub fn containment_sentence(
    h: &Tournament,
    limits: &Limits,
) -> Result<(LabeledGraph, QcspSentence), GadgetError> {
    let n = h.n();
    let lambdas = all_assignments(n, n, limits, "containment product")?;
    let parts: Vec<LabeledGraph> = lambdas
        .into_iter()
        .map(|lambda| LabeledGraph::new(h.graph().clone(), lambda))
        .collect::<Result<_, _>>()?;
    let product = product_with_constants(&parts, limits)?;
    let q = canonical_query(&product);
    Ok((product, q.sentence))
}

/// Every map `[len] -> [range]` as a table, lexicographically, refusing
/// when the product over them would exceed the vertex cap.
pub(crate) fn all_assignments(
    len: usize,
    range: usize,
    limits: &Limits,
    what: &'static str,
) -> Result<Vec<Vec<usize>>, GraphError> {
    let factors = Count::power(range as u128, len as u128);
    let carrier = match factors.value() {
        Some(f) if f <= u32::MAX as u128 => Count::power(range as u128, f),
        _ => Count::Power {
            base: range as u128,
            exponent: u128::MAX,
        },
    };
    if !carrier.fits(limits.max_vertices) {
        return Err(GraphError::CapExceeded {
            what,
            factors: factors.value().unwrap_or(u128::MAX),
            carrier,
            cap: limits.max_vertices,
        });
    }
    Ok(tuples(len, range))
}

/// All of `[range]^len` in lexicographic order.
pub(crate) fn tuples(len: usize, range: usize) -> Vec<Vec<usize>> {
    let count = range.pow(len as u32);
    (0..count)
        .map(|mut code| {
            let mut t = vec![0; len];
            for slot in t.iter_mut().rev() {
                *slot = code % range;
                code /= range;
            }
            t
        })
        .collect()
}

/// Whether every sentence true on `h` is true on `other`, decided by the
/// containment sentence of `h`.
pub fn qcsp_containment(h: &Tournament, other: &Tournament, limits: &Limits) -> Result<bool, GadgetError> {
    let (_, sentence) = containment_sentence(h, limits)?;
    Ok(solve(&sentence, other, Engine::Game, limits)?.answer)
}

/// Largest arity accepted by [`pp_closure`].
pub const CLOSURE_ARITY_BOUND: usize = 6;

/// The images of `relation` under all polymorphisms of `h`, computed as the
/// constant images of homomorphisms from the product with one factor per
/// tuple. Sorted.
pub fn pp_closure(
    h: &Tournament,
    relation: &[Vec<usize>],
    limits: &Limits,
) -> Result<Vec<Vec<usize>>, GadgetError> {
    let Some(first) = relation.first() else {
        return Err(GadgetError::Invalid("relation must be non-empty".into()));
    };
    let k = first.len();
    if k == 0 || k > CLOSURE_ARITY_BOUND {
        return Err(MorphismError::TooLarge {
            what: "relation arity",
            max: CLOSURE_ARITY_BOUND,
            got: k,
        }
        .into());
    }
    let mut parts = Vec::new();
    for tuple in relation {
        if tuple.len() != k {
            return Err(GadgetError::Invalid(format!(
                "tuple {tuple:?} does not have arity {k}"
            )));
        }
        parts.push(LabeledGraph::new(h.graph().clone(), tuple.clone())?);
    }
    let product = product_with_constants(&parts, limits)?;
    let mut out = Vec::new();
    for candidate in tuples(k, h.n()) {
        if let Some(c) = constants_constraint(&product.constants, &candidate) {
            if find_hom(&product.graph, h, &c, limits)?.is_some() {
                out.push(candidate);
            }
        }
    }
    Ok(out)
}

/// Pins constant `i` to `values[i]`, or `None` when two equal constants
/// would need different values.
fn constants_constraint(constants: &[usize], values: &[usize]) -> Option<HomConstraints> {
    let mut c = HomConstraints::new();
    for (&v, &x) in constants.iter().zip(values) {
        match c.pinned.get(&v) {
            Some(&y) if y != x => return None,
            _ => c = c.pin(v, x),
        }
    }
    Some(c)
}

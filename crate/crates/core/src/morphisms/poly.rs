use std::ops::ControlFlow;

use serde::Serialize;

use super::endo::endomorphisms;
use super::search::{all_homs, for_each_hom, HomConstraints};
use super::MorphismError;
use crate::graph::{decode_tuple, encode_tuple, power, Digraph, SccChain, Tournament};
use crate::limits::Limits;
use crate::mapping::Mapping;

/// Largest product carrier (`|V|^k`) accepted for polymorphism enumeration.
pub const POLYMORPHISM_CARRIER_BOUND: usize = 27;

fn check_carrier(g: &Digraph, k: usize) -> Result<usize, MorphismError> {
    let carrier = (g.n() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if k == 0 || carrier > POLYMORPHISM_CARRIER_BOUND as u128 {
        return Err(MorphismError::TooLarge {
            what: "polymorphism carrier",
            max: POLYMORPHISM_CARRIER_BOUND,
            got: usize::try_from(carrier).unwrap_or(usize::MAX),
        });
    }
    Ok(carrier as usize)
}

/// The k-th power of `g` as a search source.
pub fn polymorphism_source(g: &Digraph, k: usize) -> Result<Digraph, MorphismError> {
    check_carrier(g, k)?;
    Ok(power(g, k, &Limits::default())?)
}

/// All k-ary polymorphisms of `g`, as maps from the encoded power carrier.
pub fn polymorphisms(g: &Digraph, k: usize, limits: &Limits) -> Result<Vec<Mapping>, MorphismError> {
    let source = polymorphism_source(g, k)?;
    all_homs(&source, g, &HomConstraints::new(), limits)
}

/// Visits k-ary polymorphisms satisfying `c` (constraints are on the power).
pub fn for_each_polymorphism(
    g: &Digraph,
    k: usize,
    c: &HomConstraints,
    limits: &Limits,
    mut visit: impl FnMut(&Mapping) -> ControlFlow<()>,
) -> Result<(), MorphismError> {
    let source = polymorphism_source(g, k)?;
    let complete = for_each_hom(&source, g, c, limits, |table| {
        visit(&Mapping::from_parts(g.n(), table.to_vec()))
    })?;
    if !complete {
        return Err(MorphismError::Budget {
            nodes: limits.node_budget,
        });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolymorphismReport {
    pub essentially_unary: bool,
    /// Coordinate `i` and unary `g` with `f(x) = g(x_i)`, when unary.
    pub coordinate: Option<usize>,
    pub unary: Option<Mapping>,
    pub uniformly_constant: Option<usize>,
    pub component_preserving: bool,
}

pub fn classify_polymorphism(
    f: &Mapping,
    g: &Digraph,
    k: usize,
    chain: &SccChain,
    limits: &Limits,
) -> Result<PolymorphismReport, MorphismError> {
    let source = polymorphism_source(g, k)?;
    if !f.is_homomorphism(&source, g) {
        return Err(MorphismError::NotPolymorphism);
    }
    let n = g.n();
    let sizes = vec![n; k];
    let tuples: Vec<Vec<usize>> = (0..source.n()).map(|id| decode_tuple(&sizes, id)).collect();

    let endos = endomorphisms(g, limits)?;
    let mut witness = None;
    'search: for i in 0..k {
        for unary in &endos {
            if tuples
                .iter()
                .enumerate()
                .all(|(id, x)| f.apply(id) == unary.apply(x[i]))
            {
                witness = Some((i, unary.clone()));
                break 'search;
            }
        }
    }

    let mut component_preserving = true;
    for comp in chain.components() {
        let mut digits = vec![0; k];
        loop {
            let tuple: Vec<usize> = digits.iter().map(|&d| comp[d]).collect();
            if chain.component_of(f.apply(encode_tuple(&sizes, &tuple))) != chain.component_of(comp[0]) {
                component_preserving = false;
            }
            let mut pos = k;
            while pos > 0 {
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < comp.len() {
                    break;
                }
                digits[pos] = 0;
            }
            if digits.iter().all(|&d| d == 0) {
                break;
            }
        }
    }

    Ok(PolymorphismReport {
        essentially_unary: witness.is_some(),
        coordinate: witness.as_ref().map(|(i, _)| *i),
        unary: witness.map(|(_, u)| u),
        uniformly_constant: f.constant_value(),
        component_preserving,
    })
}

/// The ternary median with respect to the linear order of a transitive
/// tournament, as a map from the encoded cube.
pub fn median_table(t: &Tournament) -> Result<Mapping, MorphismError> {
    let chain = SccChain::new(t)?;
    if !chain.all_singletons() {
        return Err(MorphismError::NotTransitive);
    }
    let n = t.n();
    let rank: Vec<usize> = (0..n).map(|v| chain.component_of(v)).collect();
    let sizes = [n; 3];
    let table = (0..n * n * n)
        .map(|id| {
            let mut x = decode_tuple(&sizes, id);
            x.sort_by_key(|&v| rank[v]);
            x[1]
        })
        .collect();
    Ok(Mapping::from_parts(n, table))
}

pub fn has_median_polymorphism(t: &Tournament) -> Result<bool, MorphismError> {
    let median = median_table(t)?;
    let cube = power(t.graph(), 3, &Limits::default())?;
    Ok(median.is_homomorphism(&cube, t.graph()))
}

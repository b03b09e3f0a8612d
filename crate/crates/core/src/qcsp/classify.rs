use serde::Serialize;

use super::QcspError;
use crate::graph::{encode_tuple, power, SccChain, Tournament};
use crate::limits::Limits;
use crate::mapping::Mapping;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    NL,
    NPHard,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub chain_endpoint_sizes: (usize, usize),
}

/// NL exactly when both the initial and the final strongly connected
/// component are single vertices.
pub fn classify(t: &Tournament) -> Result<Classification, QcspError> {
    let chain = SccChain::new(t)?;
    let sizes = chain.endpoint_sizes();
    let verdict = if sizes == (1, 1) {
        Verdict::NL
    } else {
        Verdict::NPHard
    };
    Ok(Classification {
        verdict,
        chain_endpoint_sizes: sizes,
    })
}

/// Source `s`, ordered middle vertices, sink `t` of an NL tournament.
fn ends_and_middle(t: &Tournament) -> Result<(usize, Vec<usize>, usize), QcspError> {
    let chain = SccChain::new(t)?;
    if chain.endpoint_sizes() != (1, 1) {
        return Err(QcspError::EngineRefused(
            "template has a non-trivial initial or final component".into(),
        ));
    }
    let comps = chain.components();
    let s = comps[0][0];
    let sink = comps[comps.len() - 1][0];
    let middle = if comps.len() > 1 {
        comps[1..comps.len() - 1].concat()
    } else {
        Vec::new()
    };
    Ok((s, middle, sink))
}

/// The surjective homomorphism `(TT_2)^m -> T` for an NL tournament on
/// `m + 2` vertices: the zero tuple goes to the source, the i-th unit vector
/// to the i-th middle vertex (chain order), everything else to the sink.
///
/// The map is checked before it is returned.
pub fn sur_hom_tt2_power(t: &Tournament) -> Result<Mapping, QcspError> {
    let (s, middle, sink) = ends_and_middle(t)?;
    let m = middle.len();
    if m <= 1 || t.n() < 3 {
        return Err(QcspError::TooSmallForSurjection { m });
    }
    let sizes = vec![2; m];
    let mut table = vec![sink; 1 << m];
    table[0] = s;
    for (i, &v) in middle.iter().enumerate() {
        let mut unit = vec![0; m];
        unit[i] = 1;
        table[encode_tuple(&sizes, &unit)] = v;
    }
    let f = Mapping::from_parts(t.n(), table);
    let tt2 = crate::graph::transitive_tournament(2)?;
    let cube = power(tt2.graph(), m, &Limits::default())?;
    if !f.is_homomorphism(&cube, t.graph()) || !f.is_surjective() {
        return Err(QcspError::ConstructionCheck(
            "explicit map onto the template is not a surjective homomorphism".into(),
        ));
    }
    Ok(f)
}

/// `T -> TT_2`: source to 0, everything else to 1.
pub fn sur_hom_to_tt2(t: &Tournament) -> Result<Mapping, QcspError> {
    let (s, _, _) = ends_and_middle(t)?;
    if t.n() < 2 {
        return Err(QcspError::TooSmallForSurjection { m: 0 });
    }
    let f = Mapping::from_parts(2, (0..t.n()).map(|v| usize::from(v != s)).collect());
    let tt2 = crate::graph::transitive_tournament(2)?;
    if !f.is_homomorphism(t.graph(), tt2.graph()) || !f.is_surjective() {
        return Err(QcspError::ConstructionCheck(
            "map onto TT_2 is not a surjective homomorphism".into(),
        ));
    }
    Ok(f)
}

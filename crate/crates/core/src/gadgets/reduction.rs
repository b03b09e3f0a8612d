use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::cyl::{attach, build_cyl, out_lists};
use super::query::{canonical_query, tuples};
use super::spill::check_core_cycle;
use super::GadgetError;
use crate::graph::{
    encode_tuple, hamilton_cycle, product_with_constants, Digraph, GraphError, LabeledGraph,
    SccChain, Tournament,
};
use crate::limits::{Count, Limits};
use crate::qcsp::{QcspSentence, Quantifier};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ReductionKind {
    BaseI,
    BaseII,
    GeneralI,
    GeneralII,
    #[serde(rename = "A-I")]
    AI,
    #[serde(rename = "A-II")]
    AII,
}

impl ReductionKind {
    pub const ALL: [ReductionKind; 6] = [
        ReductionKind::BaseI,
        ReductionKind::BaseII,
        ReductionKind::GeneralI,
        ReductionKind::GeneralII,
        ReductionKind::AI,
        ReductionKind::AII,
    ];

    /// Kinds that glue the instance onto the template along the top level
    /// but one. The others take an instance already containing the top level.
    pub fn glues(self) -> bool {
        matches!(self, ReductionKind::BaseI | ReductionKind::GeneralI | ReductionKind::AI)
    }

    /// Kinds over a template whose top level is its initial component,
    /// using pendant cylinders and fresh universal vertices.
    pub fn pendant(self) -> bool {
        matches!(self, ReductionKind::AI | ReductionKind::AII)
    }
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReductionKind::BaseI => "base-i",
            ReductionKind::BaseII => "base-ii",
            ReductionKind::GeneralI => "general-i",
            ReductionKind::GeneralII => "general-ii",
            ReductionKind::AI => "a-i",
            ReductionKind::AII => "a-ii",
        })
    }
}

impl FromStr for ReductionKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        ReductionKind::ALL
            .into_iter()
            .find(|k| k.to_string().replace('-', "") == key)
            .ok_or_else(|| format!("unknown reduction kind `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LambdaList {
    /// Every map from `[n]` to the top level.
    All,
    /// Explicit maps, each a table of template vertices of length `n`.
    Explicit(Vec<Vec<usize>>),
}

/// Input of [`build_reduction`].
///
/// `levels` is the chain `H_0 ⊆ ... ⊆ H_{k+1}` as vertex sets of
/// `template`. For the pendant kinds the top level is the initial component
/// of `template`; otherwise it is all of `template`. `cycles[i]` orders
/// level `i` (for `i <= k`) along a Hamilton cycle; `None` takes the
/// default cycle of each level. `marked[j]` is the instance vertex playing
/// the `j`-th vertex (sorted order) of `H_k` for gluing kinds and of
/// `H_{k+1}` otherwise.
#[derive(Clone, Debug)]
pub struct ReductionConfig {
    pub kind: ReductionKind,
    pub template: Tournament,
    pub levels: Vec<Vec<usize>>,
    pub cycles: Option<Vec<Vec<usize>>>,
    pub instance: Digraph,
    pub marked: Vec<usize>,
    pub lambdas: LambdaList,
    pub limits: Limits,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GadgetCounts {
    pub second_stage: usize,
    /// Entry `i - 1` counts the cylinders hung on `H_i` minus `H_{i-1}`.
    pub chain: Vec<usize>,
    pub third_stage: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BuildStats {
    pub kind: ReductionKind,
    pub k: usize,
    pub n: usize,
    pub level_sizes: Vec<usize>,
    pub factor_count: usize,
    pub factor_size: usize,
    pub product_vertices: usize,
    pub top_power_vertices: usize,
    pub gadgets: GadgetCounts,
    pub vertices: usize,
    pub edges: usize,
    pub universals: usize,
    pub existentials: usize,
    pub atoms: usize,
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub graph: Digraph,
    /// The product constants `c_1 .. c_n` as instance vertices.
    pub constants: Vec<usize>,
    /// Vertices turned into the universal variables, in order.
    pub universal_vertices: Vec<usize>,
    /// Vertex -> variable index of `sentence`.
    pub variable_of: Vec<usize>,
    /// The single factor every λ enriches with constants.
    pub factor: Digraph,
    pub sentence: QcspSentence,
    pub stats: BuildStats,
}

fn malformed(msg: impl Into<String>) -> GadgetError {
    GadgetError::MalformedChain(msg.into())
}

struct Chain {
    levels: Vec<Vec<usize>>,
    cycles: Vec<Vec<usize>>,
}

fn check_chain(cfg: &ReductionConfig) -> Result<Chain, GadgetError> {
    let t = &cfg.template;
    let depth = cfg.levels.len();
    let ok_depth = match cfg.kind {
        ReductionKind::BaseI | ReductionKind::BaseII => depth == 2,
        ReductionKind::GeneralI | ReductionKind::GeneralII => depth >= 3,
        ReductionKind::AI | ReductionKind::AII => depth >= 2,
    };
    if !ok_depth {
        return Err(malformed(format!("{} does not take {depth} levels", cfg.kind)));
    }
    let mut levels = Vec::with_capacity(depth);
    for (i, level) in cfg.levels.iter().enumerate() {
        let set: BTreeSet<usize> = level.iter().copied().collect();
        if set.is_empty() || set.len() != level.len() {
            return Err(malformed(format!("level {i} is empty or repeats a vertex")));
        }
        if let Some(&v) = set.iter().find(|&&v| v >= t.n()) {
            return Err(GraphError::InvalidVertex { vertex: v, n: t.n() }.into());
        }
        levels.push(set.into_iter().collect::<Vec<_>>());
    }
    for i in 1..depth {
        if !levels[i - 1].iter().all(|v| levels[i].binary_search(v).is_ok()) {
            return Err(malformed(format!("level {} is not inside level {i}", i - 1)));
        }
    }
    let top = levels.last().expect("depth >= 2");
    let expected: Vec<usize> = if cfg.kind.pendant() {
        SccChain::new(t)?.initial().to_vec()
    } else {
        (0..t.n()).collect()
    };
    if *top != expected {
        return Err(malformed(if cfg.kind.pendant() {
            "top level must be the initial component of the template"
        } else {
            "top level must be the whole template"
        }));
    }
    let k = depth - 2;
    let cycles = match &cfg.cycles {
        Some(c) => {
            if c.len() != k + 1 {
                return Err(malformed(format!("expected {} cycles, got {}", k + 1, c.len())));
            }
            c.clone()
        }
        None => levels[..=k]
            .iter()
            .map(|level| {
                let sub = t.subtournament(level)?;
                Ok(hamilton_cycle(&sub)?.into_iter().map(|v| level[v]).collect())
            })
            .collect::<Result<_, GraphError>>()
            .map_err(|e| malformed(format!("level without a Hamilton cycle: {e}")))?,
    };
    for (level, cycle) in levels.iter().zip(&cycles) {
        check_core_cycle(t, level, cycle)?;
    }
    Ok(Chain { levels, cycles })
}

/// Checks that `marked` lists an induced copy of `level` inside `instance`.
fn check_marked(cfg: &ReductionConfig, level: &[usize]) -> Result<(), GadgetError> {
    let g = &cfg.instance;
    if cfg.marked.len() != level.len() {
        return Err(malformed(format!(
            "{} marked vertices for a level of {}",
            cfg.marked.len(),
            level.len()
        )));
    }
    if let Some(&v) = cfg.marked.iter().find(|&&v| v >= g.n()) {
        return Err(GraphError::InvalidVertex { vertex: v, n: g.n() }.into());
    }
    for (a, &x) in cfg.marked.iter().enumerate() {
        for (b, &y) in cfg.marked.iter().enumerate() {
            if (a != b && x == y) || g.has_edge(x, y) != cfg.template.has_edge(level[a], level[b]) {
                return Err(malformed(format!(
                    "marked vertices {x}, {y} do not copy template vertices {}, {}",
                    level[a], level[b]
                )));
            }
        }
    }
    Ok(())
}

/// Builds the glued or given factor and the place of each top-level vertex
/// in it.
fn build_factor(cfg: &ReductionConfig, chain: &Chain) -> Result<(Digraph, Vec<usize>), GadgetError> {
    let top = chain.levels.last().expect("non-empty chain");
    let k = chain.levels.len() - 2;
    if !cfg.kind.glues() {
        check_marked(cfg, top)?;
        return Ok((cfg.instance.clone(), cfg.marked.clone()));
    }
    let shared = &chain.levels[k];
    check_marked(cfg, shared)?;
    let (top_graph, _) = cfg.template.induced(top)?;
    let mut out = out_lists(&top_graph);
    let mut place = vec![usize::MAX; cfg.instance.n()];
    for (j, &x) in cfg.marked.iter().enumerate() {
        place[x] = top.binary_search(&shared[j]).expect("level inside top");
    }
    for p in place.iter_mut().filter(|p| **p == usize::MAX) {
        *p = out.len();
        out.push(Vec::new());
    }
    for (u, v) in cfg.instance.edges() {
        out[place[u]].push(place[v]);
    }
    Ok((Digraph::from_out_lists(out), (0..top.len()).collect()))
}

fn cap_error(what: &'static str, factors: u128, carrier: Count, limits: &Limits) -> GadgetError {
    GraphError::CapExceeded {
        what,
        factors,
        carrier,
        cap: limits.max_vertices,
    }
    .into()
}

fn checked_total(parts: &[Option<u128>]) -> Option<u128> {
    parts.iter().try_fold(0u128, |acc, p| acc.checked_add((*p)?))
}

pub fn build_reduction(cfg: &ReductionConfig) -> Result<Reduction, GadgetError> {
    let limits = &cfg.limits;
    let chain = check_chain(cfg)?;
    let levels = &chain.levels;
    let k = levels.len() - 2;
    let top = &levels[k + 1];
    let a = top.len();
    let n = a;
    let (factor, top_in_factor) = build_factor(cfg, &chain)?;
    let f = factor.n();
    let local = |v: usize| top.binary_search(&v).ok();

    let lambdas: Vec<Vec<usize>> = match &cfg.lambdas {
        LambdaList::All => {
            let count = Count::power(a as u128, n as u128);
            let factors = count.value().unwrap_or(u128::MAX);
            let carrier = match u32::try_from(factors) {
                Ok(e) => Count::power(f as u128, e as u128),
                Err(_) => Count::Power {
                    base: f as u128,
                    exponent: factors,
                },
            };
            if !carrier.fits(limits.max_vertices) {
                return Err(cap_error("reduction product", factors, carrier, limits));
            }
            tuples(n, a)
                .into_iter()
                .map(|t| t.into_iter().map(|i| top[i]).collect())
                .collect()
        }
        LambdaList::Explicit(list) => {
            if list.is_empty() {
                return Err(malformed("empty assignment list"));
            }
            for lambda in list {
                if lambda.len() != n || lambda.iter().any(|&v| local(v).is_none()) {
                    return Err(malformed(format!(
                        "assignment {lambda:?} is not a map from [{n}] to the top level"
                    )));
                }
            }
            list.clone()
        }
    };
    let big_l = lambdas.len();

    // Exact size arithmetic before anything is materialized.
    let sizes = vec![f; big_l];
    let product_count = Count::power(f as u128, big_l as u128);
    let hyper = Count::power(a as u128, big_l as u128).value();
    let a_at = |i: usize| levels[i].len() as u128;
    let (per_plain, per_plus) = (
        |m: u128| m * m - m - 1,
        |m: u128| m * m - m,
    );
    let per = |m: u128| if cfg.kind.pendant() { per_plus(m) } else { per_plain(m) };
    let second = hyper.and_then(|h| h.checked_sub(a_at(k)));
    let chain_counts: Vec<usize> = (1..=k)
        .map(|i| levels[i].len() - levels[i - 1].len())
        .collect();
    let chain_new: u128 = (1..=k).map(|i| chain_counts[i - 1] as u128 * per(a_at(i - 1))).sum();
    let third = if cfg.kind == ReductionKind::AI { n } else { 0 };
    let total = checked_total(&[
        product_count.value(),
        second.and_then(|s| s.checked_mul(per(a_at(k)))),
        Some(chain_new),
        Some(if cfg.kind.pendant() { n as u128 } else { 0 }),
        Some(third as u128 * per_plus(a_at(k))),
    ]);
    let within = matches!(total, Some(t) if t <= limits.max_vertices as u128);
    if !within {
        return Err(cap_error(
            "reduction instance",
            big_l as u128,
            total.map_or(product_count, Count::exact),
            limits,
        ));
    }

    let parts: Vec<LabeledGraph> = lambdas
        .iter()
        .map(|lambda| {
            let constants = lambda
                .iter()
                .map(|&v| top_in_factor[local(v).expect("checked")])
                .collect();
            LabeledGraph::new(factor.clone(), constants)
        })
        .collect::<Result<_, _>>()?;
    let product = product_with_constants(&parts, limits)?;
    let diag = |x: usize| encode_tuple(&sizes, &vec![x; big_l]);
    let diag_of = |v: usize| diag(top_in_factor[local(v).expect("level inside top")]);
    let diag_levels: Vec<BTreeSet<usize>> = levels
        .iter()
        .map(|level| level.iter().map(|&v| diag_of(v)).collect())
        .collect();
    let bottoms: Vec<Vec<usize>> = chain
        .cycles
        .iter()
        .map(|c| c.iter().map(|&v| diag_of(v)).collect())
        .collect();

    let plus = cfg.kind.pendant();
    let mut out = out_lists(&product.graph);
    let mut counts = GadgetCounts::default();
    let cyl_k = build_cyl(levels[k].len(), plus)?;
    let mut top_power: Vec<usize> = tuples(big_l, a)
        .into_iter()
        .map(|t| {
            let tuple: Vec<usize> = t.into_iter().map(|i| top_in_factor[i]).collect();
            encode_tuple(&sizes, &tuple)
        })
        .collect();
    top_power.sort_unstable();
    for &v in &top_power {
        if !diag_levels[k].contains(&v) {
            attach(&mut out, &cyl_k, &bottoms[k], Some(v));
            counts.second_stage += 1;
        }
    }
    for i in 1..=k {
        let g = build_cyl(levels[i - 1].len(), plus)?;
        let mut hung = 0;
        for &v in diag_levels[i].difference(&diag_levels[i - 1]) {
            attach(&mut out, &g, &bottoms[i - 1], Some(v));
            hung += 1;
        }
        counts.chain.push(hung);
    }
    let mut universal_vertices = product.constants.clone();
    if plus {
        universal_vertices.clear();
        for &c in &product.constants {
            let d = out.len();
            out.push(vec![d]);
            out[c].push(d);
            universal_vertices.push(d);
        }
        if cfg.kind == ReductionKind::AI {
            for &d in &universal_vertices {
                attach(&mut out, &cyl_k, &bottoms[k], Some(d));
                counts.third_stage += 1;
            }
        }
    }
    let graph = Digraph::from_out_lists(out);
    if graph.n() as u128 != total.expect("checked") {
        return Err(GadgetError::ConstructionCheck(format!(
            "built {} vertices, predicted {}",
            graph.n(),
            total.expect("checked")
        )));
    }

    let query = canonical_query(&LabeledGraph::new(graph.clone(), universal_vertices.clone())?);
    let sentence = if plus {
        let prefix: Vec<(Quantifier, String)> = query
            .sentence
            .prefix()
            .iter()
            .enumerate()
            .map(|(i, (q, name))| {
                if i < n {
                    (*q, format!("z{}", i + 1))
                } else {
                    (*q, name.clone())
                }
            })
            .collect();
        let domains: BTreeMap<usize, Vec<usize>> = (n..prefix.len()).map(|v| (v, top.clone())).collect();
        QcspSentence::new(prefix, query.sentence.atoms().to_vec(), domains)?
    } else {
        query.sentence
    };
    let universals = sentence.universal_count();
    let stats = BuildStats {
        kind: cfg.kind,
        k,
        n,
        level_sizes: levels.iter().map(Vec::len).collect(),
        factor_count: big_l,
        factor_size: f,
        product_vertices: product.graph.n(),
        top_power_vertices: top_power.len(),
        gadgets: counts,
        vertices: graph.n(),
        edges: graph.edge_count(),
        universals,
        existentials: sentence.var_count() - universals,
        atoms: sentence.atoms().len(),
    };
    Ok(Reduction {
        graph,
        constants: product.constants,
        universal_vertices,
        variable_of: query.variable_of,
        factor,
        sentence,
        stats,
    })
}

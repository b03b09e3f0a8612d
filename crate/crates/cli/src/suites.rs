//! `qct verify`: the executable lemma suites.
//!
//! Each check runs to completion and records pass, fail (with an inline
//! reproducer) or skipped-budget. The JSON report goes to stdout; timings and
//! a one-line summary per check go to stderr so that stdout is stable.

use std::collections::BTreeMap;
use std::ops::ControlFlow;
use std::time::Instant;

use qct_core::gadgets::{
    canonical_query, collapse_counterexample, build_cyl, build_reduction, free_pair_witnesses,
    pp_closure, qcsp_containment, spill, verify_dagger, LambdaList, ReductionConfig,
    ReductionKind,
};
use qct_core::graph::format::GraphJson;
use qct_core::graph::{
    enumerate_tournaments, hamilton_cycle, power, reflexive_directed_cycle, transitive_tournament,
    SccChain,
};
use qct_core::morphisms::{
    endomorphisms, find_hom, for_each_polymorphism, iso_embeddings, polymorphisms, retraction_to,
    HomConstraints,
};
use qct_core::qcsp::{
    classify, random_sentences, solve, solve_game, solve_q2sat, tt2_implication_form, Atom,
    Engine, QcspSentence, Quantifier, RandomSpec, Verdict,
};
use qct_core::{Digraph, LabeledGraph, Limits, Tournament};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CliError, BUDGET, CHECK_FAILED};
use crate::Suite;

const TOURNAMENT_COUNTS: [usize; 7] = [1, 1, 2, 4, 12, 56, 456];

#[derive(Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub max_n: usize,
    pub checks: Vec<CheckReport>,
    pub counters: BTreeMap<&'static str, u64>,
}

#[derive(Serialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    SkippedBudget,
}

#[derive(Serialize)]
pub struct CheckReport {
    pub name: &'static str,
    pub status: Status,
    pub cases: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reproducer: Option<Value>,
}

struct Ctx {
    max_n: usize,
    seed: u64,
    limits: Limits,
}

/// What a check found: how many cases it looked at, the first failure, and
/// an optional note for the report.
#[derive(Default)]
struct Found {
    cases: u64,
    failure: Option<(String, Value)>,
    note: Option<String>,
}

impl Found {
    fn case(&mut self) {
        self.cases += 1;
    }

    fn fail(&mut self, detail: impl Into<String>, reproducer: Value) {
        if self.failure.is_none() {
            self.failure = Some((detail.into(), reproducer));
        }
    }
}

type Check = (&'static str, fn(&Ctx) -> Result<Found, CliError>);

fn graph_json(g: &Digraph) -> Value {
    serde_json::to_value(GraphJson::from_graph(g, &[])).expect("graph json")
}

fn dc3() -> Tournament {
    Tournament::new(reflexive_directed_cycle(3).expect("m >= 2")).expect("tournament")
}

fn tournaments_up_to(n: usize) -> Result<Vec<Tournament>, CliError> {
    let mut out = Vec::new();
    for k in 1..=n {
        out.extend(enumerate_tournaments(k)?);
    }
    Ok(out)
}

/// Per-check seed derived from the master seed and the check's position.
fn check_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

pub fn run(suite: Suite, max_n: Option<usize>, seed: u64, limits: &Limits) -> Result<i32, CliError> {
    let (default_n, checks): (usize, &[Check]) = match suite {
        Suite::Lemmas => (4, LEMMAS),
        Suite::Spill => (5, SPILL),
        Suite::Reduction => (4, REDUCTION),
        Suite::Solver => (4, SOLVER),
    };
    let max_n = max_n.unwrap_or(default_n);
    if max_n == 0 {
        return Err(CliError::usage("--max-n must be at least 1"));
    }
    let started = Instant::now();
    let mut report = SuiteReport {
        suite,
        seed,
        max_n,
        checks: Vec::new(),
        counters: BTreeMap::new(),
    };
    for (index, (name, check)) in checks.iter().enumerate() {
        let ctx = Ctx {
            max_n,
            seed: check_seed(seed, index),
            limits: *limits,
        };
        let t = Instant::now();
        let entry = match check(&ctx) {
            Ok(found) => {
                let (status, detail, reproducer) = match found.failure {
                    Some((d, r)) => (Status::Fail, Some(d), Some(r)),
                    None => (Status::Pass, found.note, None),
                };
                CheckReport {
                    name,
                    status,
                    cases: found.cases,
                    detail,
                    reproducer,
                }
            }
            Err(e) => CheckReport {
                name,
                status: if e.code == BUDGET {
                    Status::SkippedBudget
                } else {
                    Status::Fail
                },
                cases: 0,
                detail: Some(e.message),
                reproducer: None,
            },
        };
        let label = match entry.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::SkippedBudget => "skipped (budget)",
        };
        eprintln!(
            "{name:<40} {label:<16} {:>8} cases  {:.2?}",
            entry.cases,
            t.elapsed()
        );
        report.checks.push(entry);
    }
    let count = |s: Status| report.checks.iter().filter(|c| c.status == s).count() as u64;
    let (passed, failed, skipped) = (count(Status::Pass), count(Status::Fail), count(Status::SkippedBudget));
    report.counters.insert("passed", passed);
    report.counters.insert("failed", failed);
    report.counters.insert("skipped_budget", skipped);
    report
        .counters
        .insert("cases", report.checks.iter().map(|c| c.cases).sum());
    crate::commands::emit(&report);
    eprintln!(
        "{passed} passed, {failed} failed, {skipped} skipped in {:.2?}",
        started.elapsed()
    );
    Ok(if failed > 0 { CHECK_FAILED } else { 0 })
}

// ---------------------------------------------------------------- lemmas

const LEMMAS: &[Check] = &[
    ("tournament-counts", tournament_counts),
    ("dichotomy-rule", dichotomy_rule),
    ("hamilton-cycles", hamilton_cycles),
    ("endo-trivial-iff-retract-trivial", endo_vs_retract),
    ("diagonal-constant-is-constant", diagonal_constant),
    ("surjective-preserves-components", component_preservation),
    ("surjective-preserves-strong-components", strong_component_preservation),
    ("dc3-binary-essentially-unary", dc3_binary_unary),
    ("dagger-rotations", dagger),
    ("collapse", collapse),
];

fn tournament_counts(ctx: &Ctx) -> Result<Found, CliError> {
    let mut found = Found::default();
    for n in 1..=ctx.max_n.min(TOURNAMENT_COUNTS.len()) {
        found.case();
        let got = enumerate_tournaments(n)?.len();
        if got != TOURNAMENT_COUNTS[n - 1] {
            found.fail(
                format!("{got} tournaments on {n} vertices, expected {}", TOURNAMENT_COUNTS[n - 1]),
                json!({ "n": n }),
            );
        }
    }
    Ok(found)
}

fn dichotomy_rule(ctx: &Ctx) -> Result<Found, CliError> {
    let mut found = Found::default();
    for t in tournaments_up_to(ctx.max_n)? {
        found.case();
        let n = t.n();
        let dominates = |v: usize| (0..n).all(|u| t.has_edge(v, u));
        let dominated = |v: usize| (0..n).all(|u| t.has_edge(u, v));
        let has_source = (0..n).any(dominates);
        let has_sink = (0..n).any(dominated);
        let expected = if has_source && has_sink {
            Verdict::NL
        } else {
            Verdict::NPHard
        };
        let got = classify(&t)?.verdict;
        if got != expected {
            found.fail(
                format!("classified {got:?}, source/sink rule says {expected:?}"),
                json!({ "template": graph_json(&t) }),
            );
        }
    }
    Ok(found)
}

fn hamilton_cycles(ctx: &Ctx) -> Result<Found, CliError> {
    let mut found = Found::default();
    for t in tournaments_up_to(ctx.max_n)? {
        if !t.is_strongly_connected() {
            continue;
        }
        found.case();
        let cycle = hamilton_cycle(&t)?;
        let n = t.n();
        let mut seen = vec![false; n];
        let valid = cycle.len() == n
            && cycle.iter().all(|&v| v < n && !std::mem::replace(&mut seen[v], true))
            && (0..n).all(|i| t.has_edge(cycle[i], cycle[(i + 1) % n]));
        if !valid {
            found.fail(
                format!("invalid Hamilton cycle {cycle:?}"),
                json!({ "template": graph_json(&t) }),
            );
        }
    }
    Ok(found)
}

fn endo_vs_retract(ctx: &Ctx) -> Result<Found, CliError> {
    let mut found = Found::default();
    for t in tournaments_up_to(ctx.max_n)? {
        found.case();
        let endos = endomorphisms(&t, &ctx.limits)?;
        let trivial = |f: &qct_core::Mapping| f.is_bijective() || f.constant_value().is_some();
        let endo_trivial = endos.iter().all(trivial);
        let retract_trivial = endos.iter().filter(|f| f.is_idempotent()).all(trivial);
        if endo_trivial != retract_trivial {
            found.fail(
                format!("endo-trivial {endo_trivial}, retract-trivial {retract_trivial}"),
                json!({ "template": graph_json(&t) }),
            );
        }
    }
    Ok(found)
}

/// Arities checked for polymorphism lemmas on `n` vertices.
fn arities(n: usize) -> Vec<usize> {
    if n <= 3 {
        vec![1, 2, 3]
    } else {
        vec![1, 2]
    }
}

fn diagonal_constant(ctx: &Ctx) -> Result<Found, CliError> {
    let mut found = Found::default();
    for t in tournaments_up_to(ctx.max_n.min(4))? {
        let n = t.n();
        for k in arities(n) {
            for z in 0..n {
                let mut c = HomConstraints::new();
                for x in 0..n {
                    let diagonal: usize = (0..k).fold(0, |id, _| id * n + x);
                    c = c.pin(diagonal, z);
                }
                for_each_polymorphism(&t, k, &c, &ctx.limits, |f| {
                    found.case();
                    if f.constant_value() != Some(z) {
                        found.fail(
                            format!("arity {k} polymorphism constant {z} on the diagonal but not everywhere"),
                            json!({ "template": graph_json(&t), "table": f.table() }),
                        );
                    }
                    ControlFlow::Continue(())
                })?;
            }
        }
    }
    Ok(found)
}

fn component_preservation(ctx: &Ctx) -> Result<Found, CliError> {
    preservation(ctx, 1)
}

/// Only components with at least two vertices. Interior singleton components
/// of transitive tournaments are not preserved in general.
fn strong_component_preservation(ctx: &Ctx) -> Result<Found, CliError> {
    preservation(ctx, 2)
}

fn preservation(ctx: &Ctx, min_size: usize) -> Result<Found, CliError> {
    let mut found = Found::default();
    for t in tournaments_up_to(ctx.max_n.min(4))? {
        let n = t.n();
        let chain = SccChain::new(&t)?;
        for k in arities(n) {
            let c = HomConstraints::new().surjective();
            for_each_polymorphism(&t, k, &c, &ctx.limits, |f| {
                found.case();
                let broken = chain.components().iter().filter(|c| c.len() >= min_size).find(|comp| {
                    tuples_over(comp, k).any(|tuple| {
                        let id = tuple.iter().fold(0, |id, &x| id * n + x);
                        chain.component_of(f.apply(id)) != chain.component_of(comp[0])
                    })
                });
                if let Some(comp) = broken {
                    found.fail(
                        format!("arity {k} surjective polymorphism leaves component {comp:?}"),
                        json!({ "template": graph_json(&t), "table": f.table() }),
                    );
                }
                ControlFlow::Continue(())
            })?;
        }
    }
    Ok(found)
}

/// All `k`-tuples over `set`, last coordinate fastest.
fn tuples_over(set: &[usize], k: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total = set.len().pow(k as u32);
    (0..total).map(move |mut id| {
        let mut tuple = vec![0; k];
        for slot in tuple.iter_mut().rev() {
            *slot = set[id % set.len()];
            id /= set.len();
        }
        tuple
    })
}

fn dc3_binary_unary(ctx: &Ctx) -> Result<Found, CliError> {
    let mut found = Found::default();
    let h = dc3();
    let endos = endomorphisms(&h, &ctx.limits)?;
    for f in polymorphisms(&h, 2, &ctx.limits)? {
        found.case();
        let unary = (0..2).any(|i| {
            endos.iter().any(|g| {
                (0..9).all(|id| {
                    let x = [id / 3, id % 3];
                    f.apply(id) == g.apply(x[i])
                })
            })
        });
        if !unary {
            found.fail(
                "binary polymorphism of DC*_3 is not essentially unary",
                json!({ "table": f.table() }),
            );
        }
    }
    Ok(found)
}

fn dagger(ctx: &Ctx) -> Result<Found, CliError> {
    let mut found = Found::default();
    for m in 3..=4 {
        found.case();
        let report = verify_dagger(m, &ctx.limits)?;
        if !report.rotations_only {
            found.fail(
                format!("m = {m}: induced top maps {:?}", report.top_maps),
                json!({ "m": m }),
            );
        }
    }
    Ok(found)
}

fn collapse(ctx: &Ctx) -> Result<Found, CliError> {
    let mut found = Found::default();
    let targets = tournaments_up_to(ctx.max_n.min(4))?;
    found.cases = targets.len() as u64;
    let gadget = build_cyl(3, false)?;
    if let Some((index, h)) = collapse_counterexample(&gadget, &targets, &ctx.limits)? {
        found.fail(
            "homomorphism collapses the bottom cycle but not the gadget",
            json!({ "target": graph_json(&targets[index]), "map": h.table() }),
        );
    }
    Ok(found)
}

// ----------------------------------------------------------------- spill

const SPILL: &[Check] = &[
    ("spill-full-on-retracting-hosts", spill_retracting_hosts),
    ("spill-plus-sink-extensions", spill_plus_extensions),
    ("non-retracting-full-spill-search", figure_search),
];

fn spill_retracting_hosts(ctx: &Ctx) -> Result<Found, CliError> {
    let mut found = Found::default();
    let cycle = dc3();
    for h in tournaments_up_to(ctx.max_n)? {
        if h.n() < 3 {
            continue;
        }
        for e in iso_embeddings(&cycle, &h, &ctx.limits)? {
            let hc: Vec<usize> = e.table().to_vec();
            let mut core = hc.clone();
            core.sort_unstable();
            if retraction_to(&h, &core, &ctx.limits)?.is_none() {
                continue;
            }
            found.case();
            let report = spill(&h, &core, &hc, false, &ctx.limits)?;
            let repro = || json!({ "template": graph_json(&h), "cycle": hc });
            if !report.full {
                found.fail(format!("spill union {:?} is not everything", report.union), repro());
            }
            for (x, set) in &report.per_top_vertex {
                if !core.iter().all(|v| set.contains(v)) {
                    found.fail(format!("spill of {x} is {set:?}, missing part of the core"), repro());
                }
            }
        }
    }
    Ok(found)
}

/// A 3-cycle followed by `extra` vertices it dominates, ordered transitively.
fn cycle_then_chain(extra: usize) -> Tournament {
    let n = 3 + extra;
    let mut edges = vec![(0, 1), (1, 2), (2, 0)];
    for v in 3..n {
        edges.extend((0..v).map(|u| (u, v)));
    }
    Tournament::new(Digraph::new(n, edges, true).expect("ids")).expect("tournament")
}

fn spill_plus_extensions(ctx: &Ctx) -> Result<Found, CliError> {
    let mut found = Found::default();
    let base = spill(&dc3(), &[0, 1, 2], &[0, 1, 2], true, &ctx.limits)?;
    found.case();
    if !base.full {
        found.fail("plus spill of DC*_3 is not full", json!({}));
        return Ok(found);
    }
    for extra in 1..=2 {
        found.case();
        let h = cycle_then_chain(extra);
        let report = spill(&h, &[0, 1, 2], &[0, 1, 2], true, &ctx.limits)?;
        if !report.full {
            found.fail(
                format!("plus spill {:?} is not everything", report.union),
                json!({ "template": graph_json(&h), "cycle": [0, 1, 2] }),
            );
        }
    }
    Ok(found)
}

fn figure_search(ctx: &Ctx) -> Result<Found, CliError> {
    let mut found = Found::default();
    found.cases = 1 << 12;
    let witnesses = free_pair_witnesses(&ctx.limits)?;
    match witnesses.first() {
        None => found.fail("no 6-vertex extension with full spill and no retraction", json!({})),
        Some(w) => {
            let edges: Vec<String> = w
                .edges
                .iter()
                .filter(|(u, v)| u != v)
                .map(|(u, v)| format!("{u}->{v}"))
                .collect();
            eprintln!("least witness (code {}): {}", w.code, edges.join(" "));
            found.note = Some(format!(
                "{} witnesses; least code {}: {}",
                witnesses.len(),
                w.code,
                edges.join(" ")
            ));
        }
    }
    Ok(found)
}

// ------------------------------------------------------------- reduction

const REDUCTION: &[Check] = &[
    ("reduction-structure", reduction_structure),
    ("canonical-query-vs-hom", canonical_query_vs_hom),
    ("pp-closure-monotone-idempotent", closure_laws),
    ("containment-reflexive", containment_reflexive),
];

/// 0 -> 1 -> 2 -> 0 plus 3 with 0, 1 -> 3 -> 2.
fn cycle_plus_one() -> Tournament {
    let g = Digraph::new(4, [(0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (3, 2)], true).expect("ids");
    Tournament::new(g).expect("tournament")
}

fn sample_configs(limits: &Limits) -> Vec<ReductionConfig> {
    let h = cycle_plus_one();
    let mut with_sink = h.edge_list();
    with_sink.extend((0..4).map(|v| (v, 4)));
    let pendant = Tournament::new(Digraph::new(5, with_sink, true).expect("ids")).expect("tournament");
    let two = LambdaList::Explicit(vec![vec![0, 1, 2, 3], vec![3, 3, 0, 1]]);
    let make = |kind: ReductionKind, template: &Tournament, levels: Vec<Vec<usize>>, lambdas: &LambdaList| {
        let marked_level = if kind.glues() {
            levels[levels.len() - 2].clone()
        } else {
            levels[levels.len() - 1].clone()
        };
        ReductionConfig {
            kind,
            template: template.clone(),
            instance: template.induced(&marked_level).expect("level").0,
            marked: (0..marked_level.len()).collect(),
            levels,
            cycles: None,
            lambdas: lambdas.clone(),
            limits: *limits,
        }
    };
    let base = vec![vec![0, 1, 2], vec![0, 1, 2, 3]];
    let general = vec![vec![0, 1, 2], vec![0, 1, 2], vec![0, 1, 2, 3]];
    vec![
        make(ReductionKind::BaseI, &h, base.clone(), &two),
        make(ReductionKind::BaseII, &h, base.clone(), &two),
        make(ReductionKind::GeneralI, &h, general.clone(), &two),
        make(ReductionKind::GeneralII, &h, general, &two),
        make(ReductionKind::AI, &pendant, base.clone(), &two),
        make(ReductionKind::AII, &pendant, base, &two),
    ]
}

fn reduction_structure(ctx: &Ctx) -> Result<Found, CliError> {
    let mut found = Found::default();
    for cfg in sample_configs(&ctx.limits) {
        found.case();
        let r = build_reduction(&cfg)?;
        let s = &r.stats;
        let levels = &cfg.levels;
        let k = levels.len() - 2;
        let top = levels[k + 1].len();
        let mut problems = Vec::new();
        if r.constants.len() != s.n || s.n != top {
            problems.push(format!("{} constants for n = {}", r.constants.len(), s.n));
        }
        if s.universals != s.n || r.sentence.universal_count() != s.n {
            problems.push(format!("{} universals for n = {}", s.universals, s.n));
        }
        let second = top.pow(s.factor_count as u32) - levels[k].len();
        if s.gadgets.second_stage != second {
            problems.push(format!("second stage {} expected {second}", s.gadgets.second_stage));
        }
        let chain: Vec<usize> = (1..=k).map(|i| levels[i].len() - levels[i - 1].len()).collect();
        if s.gadgets.chain != chain {
            problems.push(format!("chain gadgets {:?} expected {chain:?}", s.gadgets.chain));
        }
        let third = if cfg.kind == ReductionKind::AI { s.n } else { 0 };
        if s.gadgets.third_stage != third {
            problems.push(format!("third stage {} expected {third}", s.gadgets.third_stage));
        }
        let head: Vec<usize> = (0..s.product_vertices).collect();
        let square = power(&r.factor, s.factor_count, &ctx.limits)?;
        if r.graph.induced(&head)?.0 != square {
            problems.push("product head is not the factor power".into());
        }
        if r.constants.iter().any(|&c| c >= s.product_vertices) {
            problems.push(format!("constants {:?} outside the product", r.constants));
        }
        if !problems.is_empty() {
            found.fail(
                format!("{}: {}", cfg.kind, problems.join("; ")),
                json!({ "kind": cfg.kind.to_string(), "template": graph_json(&cfg.template), "levels": cfg.levels }),
            );
        }
    }
    Ok(found)
}

fn small_digraphs(seed: u64, count: usize) -> Vec<LabeledGraph> {
    // A small xorshift keeps this independent of the sentence generator.
    let mut state = seed | 1;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    (0..count)
        .map(|_| {
            let n = 1 + (next() % 4) as usize;
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (0..n).map(move |v| (u, v)))
                .filter(|_| next() % 3 == 0)
                .collect();
            let constants: Vec<usize> = (0..1 + next() % 2).map(|_| (next() % n as u64) as usize).collect();
            let g = Digraph::new(n, edges, true).expect("ids");
            LabeledGraph::new(g, constants).expect("constants in range")
        })
        .collect()
}

fn canonical_query_vs_hom(ctx: &Ctx) -> Result<Found, CliError> {
    let mut found = Found::default();
    let templates = vec![dc3(), transitive_tournament(2)?, cycle_plus_one()];
    for g in small_digraphs(ctx.seed, 40) {
        let q = canonical_query(&g);
        for t in &templates {
            for values in tuples_over(&(0..t.n()).collect::<Vec<_>>(), g.constants.len()) {
                found.case();
                let mut c = HomConstraints::new();
                let mut consistent = true;
                for (&v, &x) in g.constants.iter().zip(&values) {
                    match c.pinned.get(&v) {
                        Some(&y) if y != x => consistent = false,
                        _ => c = c.pin(v, x),
                    }
                }
                let hom = consistent && find_hom(&g.graph, t, &c, &ctx.limits)?.is_some();
                let sat = solve(&q.bind(&values), t, Engine::Game, &ctx.limits)?.answer;
                if hom != sat {
                    found.fail(
                        format!("query says {sat}, homomorphism search says {hom}"),
                        json!({
                            "graph": graph_json(&g.graph),
                            "constants": g.constants,
                            "values": values,
                            "template": graph_json(t),
                        }),
                    );
                }
            }
        }
    }
    Ok(found)
}

const CLOSURE_RECHECK_TUPLES: usize = 6;

fn closure_laws(ctx: &Ctx) -> Result<Found, CliError> {
    let mut found = Found::default();
    let templates = vec![dc3(), transitive_tournament(3)?, cycle_plus_one()];
    for t in &templates {
        let n = t.n();
        let all_pairs: Vec<Vec<usize>> = tuples_over(&(0..n).collect::<Vec<_>>(), 2).collect();
        let singles: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
        for universe in [singles, all_pairs] {
            // Relations: every prefix of the universe, so each is contained in the next.
            let mut previous: Option<(Vec<Vec<usize>>, Vec<Vec<usize>>)> = None;
            for len in 1..=universe.len().min(4) {
                found.case();
                let r: Vec<Vec<usize>> = universe[..len].to_vec();
                let closed = pp_closure(t, &r, &ctx.limits)?;
                let repro = || json!({ "template": graph_json(t), "relation": r });
                if !r.iter().all(|x| closed.contains(x)) {
                    found.fail("closure does not contain the relation", repro());
                }
                // Closing the closure again needs one factor per tuple.
                if closed.len() <= CLOSURE_RECHECK_TUPLES && pp_closure(t, &closed, &ctx.limits)? != closed {
                    found.fail("closure is not idempotent", repro());
                }
                if let Some((_, prev_closed)) = &previous {
                    if !prev_closed.iter().all(|x| closed.contains(x)) {
                        found.fail("closure is not monotone", repro());
                    }
                }
                previous = Some((r, closed));
            }
        }
    }
    Ok(found)
}

fn containment_reflexive(ctx: &Ctx) -> Result<Found, CliError> {
    let mut found = Found::default();
    for t in tournaments_up_to(ctx.max_n.min(2))? {
        found.case();
        if !qcsp_containment(&t, &t, &ctx.limits)? {
            found.fail(
                "containment of a template in itself fails",
                json!({ "template": graph_json(&t) }),
            );
        }
    }
    Ok(found)
}

// ---------------------------------------------------------------- solver

const SOLVER: &[Check] = &[
    ("q2sat-vs-game", q2sat_vs_game),
    ("nl-template-transfer", nl_transfer),
    ("equality-elimination", equality_elimination),
];

fn sentence_repro(s: &QcspSentence, t: &Digraph) -> Value {
    json!({ "template": graph_json(t), "sentence": s.to_text() })
}

fn q2sat_vs_game(ctx: &Ctx) -> Result<Found, CliError> {
    let mut found = Found::default();
    let tt2 = transitive_tournament(2)?;
    for s in random_sentences(ctx.seed, 1000, &RandomSpec::new(12, 14)) {
        found.case();
        let game = solve_game(&s, &tt2, &ctx.limits)?;
        let q2 = solve_q2sat(&tt2_implication_form(&s)?);
        if game != q2 {
            found.fail(format!("game {game}, q2sat {q2}"), sentence_repro(&s, &tt2));
        }
    }
    Ok(found)
}

/// Source, then a 3-cycle, then a sink.
fn source_cycle_sink() -> Tournament {
    let mut edges = vec![(1, 2), (2, 3), (3, 1)];
    edges.extend((1..5).map(|v| (0, v)));
    edges.extend((1..4).map(|v| (v, 4)));
    Tournament::new(Digraph::new(5, edges, true).expect("ids")).expect("tournament")
}

fn nl_transfer(ctx: &Ctx) -> Result<Found, CliError> {
    let mut found = Found::default();
    let t = source_cycle_sink();
    let tt2 = transitive_tournament(2)?;
    for s in random_sentences(ctx.seed, 200, &RandomSpec::new(7, 10)) {
        found.case();
        let on_t = solve_game(&s, &t, &ctx.limits)?;
        let on_tt2 = solve_game(&s, &tt2, &ctx.limits)?;
        let q2 = solve_q2sat(&tt2_implication_form(&s)?);
        if on_t != on_tt2 || on_tt2 != q2 {
            found.fail(
                format!("game on template {on_t}, game on TT_2 {on_tt2}, q2sat {q2}"),
                sentence_repro(&s, &t),
            );
        }
    }
    Ok(found)
}

/// Plain game-tree evaluation that understands equality atoms and domains.
pub(crate) fn naive_models(s: &QcspSentence, t: &Digraph) -> bool {
    fn holds(atom: &Atom, values: &[usize], t: &Digraph) -> bool {
        match *atom {
            Atom::Edge(a, b) => t.has_edge(values[a], values[b]),
            Atom::Eq(a, b) => values[a] == values[b],
        }
    }
    fn go(s: &QcspSentence, t: &Digraph, values: &mut Vec<usize>) -> bool {
        let depth = values.len();
        if s
            .atoms()
            .iter()
            .filter(|a| match **a {
                Atom::Edge(x, y) | Atom::Eq(x, y) => x.max(y) + 1 == depth,
            })
            .any(|a| !holds(a, values, t))
        {
            return false;
        }
        if depth == s.var_count() {
            return true;
        }
        let choices: Vec<usize> = match s.domains().get(&depth) {
            Some(d) => d.clone(),
            None => (0..t.n()).collect(),
        };
        let mut branch = |x: usize| {
            values.push(x);
            let r = go(s, t, values);
            values.pop();
            r
        };
        match s.quantifier(depth) {
            Quantifier::Forall => choices.into_iter().all(&mut branch),
            Quantifier::Exists => choices.into_iter().any(&mut branch),
        }
    }
    go(s, t, &mut Vec::new())
}

fn equality_elimination(ctx: &Ctx) -> Result<Found, CliError> {
    let mut found = Found::default();
    let templates = tournaments_up_to(ctx.max_n.min(4))?;
    let spec = RandomSpec::new(8, 10).with_equality_rate(0.3);
    for (i, s) in random_sentences(ctx.seed, 300, &spec).into_iter().enumerate() {
        found.case();
        let t = &templates[i % templates.len()];
        let expected = naive_models(&s, t);
        let got = solve(&s, t, Engine::Game, &ctx.limits)?.answer;
        if got != expected {
            found.fail(
                format!("solver {got}, direct evaluation {expected}"),
                sentence_repro(&s, t),
            );
        }
    }
    Ok(found)
}

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::json;

use qct_core::gadgets::{
    build_cyl, build_reduction, find_hardness_certificate, spill as spill_sets, verify_certificate,
    LambdaList, ReductionConfig, ReductionKind,
};
use qct_core::graph::format::{to_text, GraphJson};
use qct_core::graph::{enumerate_tournaments, hamilton_cycle, MAX_ENUMERATE_N};
use qct_core::limits::Limits;
use qct_core::qcsp::{classify as classify_template, solve as solve_sentence, Engine, Verdict};
use qct_core::{SccChain, Tournament};

use crate::error::{CliError, CHECK_FAILED, USAGE};
use crate::input::{self, GraphSource};
use crate::{EngineArg, Format};

pub fn emit(value: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable report"));
}

fn write(path: &str, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::usage(format!("{path}: {e}")))
}

pub fn classify(path: &str) -> Result<i32, CliError> {
    let t = input::tournament(path)?;
    let c = classify_template(&t)?;
    let chain = SccChain::new(&t)?;
    emit(&json!({
        "verdict": c.verdict,
        "chain_endpoint_sizes": c.chain_endpoint_sizes,
        "components": chain.components(),
    }));
    eprintln!(
        "{:?}: initial component {} vertices, final component {}",
        c.verdict, c.chain_endpoint_sizes.0, c.chain_endpoint_sizes.1
    );
    Ok(0)
}

pub fn solve(template: &str, sentence: &str, engine: EngineArg, limits: &Limits) -> Result<i32, CliError> {
    let t = input::tournament(template)?;
    let s = input::sentence(sentence)?;
    let engine = match engine {
        EngineArg::Auto => Engine::Auto,
        EngineArg::Game => Engine::Game,
        EngineArg::Q2sat => Engine::Q2sat,
    };
    let solved = solve_sentence(&s, &t, engine, limits)?;
    emit(&json!({
        "outcome": "solved",
        "answer": solved.answer,
        "engine": solved.engine,
    }));
    eprintln!("{} ({:?})", solved.answer, solved.engine);
    Ok(0)
}

pub fn spill(
    template: &str,
    core: &[usize],
    cycle: Option<&[usize]>,
    plus: bool,
    limits: &Limits,
) -> Result<i32, CliError> {
    let t = input::tournament(template)?;
    let cycle = match cycle {
        Some(c) => c.to_vec(),
        None => {
            let sub = t.subtournament(core)?;
            hamilton_cycle(&sub)?.into_iter().map(|i| core[i]).collect()
        }
    };
    let report = spill_sets(&t, core, &cycle, plus, limits)?;
    emit(&json!({
        "core": core,
        "cycle": cycle,
        "plus": plus,
        "per_top_vertex": report.per_top_vertex,
        "union": report.union,
        "full": report.full,
        "uniform": report.uniform(),
    }));
    eprintln!("spill {:?} (full: {})", report.union, report.full);
    Ok(0)
}

pub fn gadget(m: usize, plus: bool, out: Option<&str>, format: Format) -> Result<i32, CliError> {
    let g = build_cyl(m, plus)?;
    let meta = g.meta();
    let body = match format {
        Format::Text => to_text(&g.graph, &[]),
        Format::Json => serde_json::to_string(&GraphJson::from_graph(&g.graph, &[]))?,
    };
    match out {
        Some(path) => {
            write(path, &body)?;
            write(&format!("{path}.meta.json"), &serde_json::to_string_pretty(&meta)?)?;
            emit(&json!({
                "vertices": g.graph.n(),
                "edges": g.graph.edge_count(),
                "output": path,
                "meta": meta,
            }));
        }
        None => emit(&json!({
            "vertices": g.graph.n(),
            "edges": g.graph.edge_count(),
            "graph": GraphJson::from_graph(&g.graph, &[]),
            "meta": meta,
        })),
    }
    eprintln!("{}: {} vertices, {} edges", g.graph.name().unwrap_or("gadget"), g.graph.n(), g.graph.edge_count());
    Ok(0)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum LambdaSource {
    Keyword(String),
    List(Vec<Vec<usize>>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ReduceFile {
    kind: String,
    template: GraphSource,
    levels: Vec<Vec<usize>>,
    #[serde(default)]
    cycles: Option<Vec<Vec<usize>>>,
    instance: GraphSource,
    marked: Vec<usize>,
    lambdas: LambdaSource,
    #[serde(default)]
    max_vertices: Option<usize>,
}

pub fn reduce(config: &str, out: Option<&str>, limits: &Limits) -> Result<i32, CliError> {
    let raw: ReduceFile = serde_json::from_str(&input::read(config)?)
        .map_err(|e| CliError::usage(format!("{config}: {e}")))?;
    let base = Path::new(config).parent().unwrap_or(Path::new("."));
    let kind: ReductionKind = raw.kind.parse().map_err(CliError::usage)?;
    let template = Tournament::new(raw.template.load(base)?)?;
    let lambdas = match raw.lambdas {
        LambdaSource::Keyword(k) if k.eq_ignore_ascii_case("all") => LambdaList::All,
        LambdaSource::Keyword(k) => {
            return Err(CliError::usage(format!("lambdas must be \"all\" or a list, got `{k}`")))
        }
        LambdaSource::List(list) => LambdaList::Explicit(list),
    };
    let cfg = ReductionConfig {
        kind,
        template,
        levels: raw.levels,
        cycles: raw.cycles,
        instance: raw.instance.load(base)?,
        marked: raw.marked,
        lambdas,
        limits: Limits {
            max_vertices: raw.max_vertices.unwrap_or(limits.max_vertices),
            ..*limits
        },
    };
    let r = build_reduction(&cfg)?;
    let meta = json!({
        "constants": r.constants,
        "universal_vertices": r.universal_vertices,
        "variable_of": r.variable_of,
        "stats": r.stats,
    });
    match out {
        Some(stem) => {
            write(stem, &to_text(&r.graph, &r.constants))?;
            write(&format!("{stem}.qcsp"), &format!("{}\n", r.sentence.to_text()))?;
            write(&format!("{stem}.meta.json"), &serde_json::to_string_pretty(&meta)?)?;
            emit(&json!({ "output": stem, "stats": r.stats }));
        }
        None => emit(&json!({
            "stats": r.stats,
            "graph": GraphJson::from_graph(&r.graph, &r.constants),
            "sentence": r.sentence.to_text(),
            "meta": meta,
        })),
    }
    eprintln!(
        "{}: {} factors, {} vertices, {} universals",
        kind, r.stats.factor_count, r.stats.vertices, r.stats.universals
    );
    Ok(0)
}

pub fn certify(path: &str, limits: &Limits) -> Result<i32, CliError> {
    let t = input::tournament(path)?;
    if classify_template(&t)?.verdict == Verdict::NL {
        return Err(CliError::new(
            CHECK_FAILED,
            "template is in NL: both end components are single vertices",
        ));
    }
    let cert = find_hardness_certificate(&t, limits)?;
    let checks = verify_certificate(&t, &cert, limits)?;
    let failed = checks.iter().filter(|c| !c.ok).count();
    emit(&json!({
        "certificate": cert,
        "facts_checked": checks.len(),
        "facts_failed": failed,
    }));
    eprintln!(
        "route {:?} over {} levels; {} of {} facts re-verified",
        cert.route,
        cert.levels.len(),
        checks.len() - failed,
        checks.len()
    );
    Ok(if failed == 0 { 0 } else { CHECK_FAILED })
}

pub fn enumerate(n: usize) -> Result<i32, CliError> {
    if n == 0 || n > MAX_ENUMERATE_N {
        return Err(CliError::new(
            USAGE,
            format!("n must be between 1 and {MAX_ENUMERATE_N}"),
        ));
    }
    let all = enumerate_tournaments(n)?;
    let mut listed = Vec::with_capacity(all.len());
    for t in &all {
        listed.push(json!({
            "edges": t.edge_list(),
            "verdict": classify_template(t)?.verdict,
        }));
    }
    emit(&json!({ "n": n, "count": all.len(), "tournaments": listed }));
    eprintln!("{} tournaments on {n} vertices", all.len());
    Ok(0)
}

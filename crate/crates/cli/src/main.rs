//! `qct`: command-line front end for reflexive-tournament QCSP tools.

mod commands;
mod error;
mod input;
mod suites;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qct_core::limits::{Limits, DEFAULT_MAX_VERTICES, DEFAULT_NODE_BUDGET};

use error::CliError;

#[derive(Parser)]
#[command(name = "qct", version, about = "Reflexive-tournament QCSP toolkit")]
struct Cli {
    /// Node budget for searches (overrides QCT_NODE_BUDGET).
    #[arg(long, global = true)]
    node_budget: Option<u64>,
    /// Cap on the vertices of any built product or instance.
    #[arg(long, global = true)]
    max_vertices: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum EngineArg {
    Auto,
    Game,
    Q2sat,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GadgetKind {
    Cyl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lemmas,
    Spill,
    Reduction,
    Solver,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a template as NL or NP-hard.
    Classify { template: String },
    /// Decide a sentence on a template.
    Solve {
        template: String,
        sentence: String,
        #[arg(long, value_enum, default_value = "auto")]
        engine: EngineArg,
    },
    /// Spill sets of a core with a Hamilton cycle.
    Spill {
        template: String,
        /// Core vertices, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        core: Vec<usize>,
        /// Hamilton cycle of the core (default: the computed one).
        #[arg(long, value_delimiter = ',')]
        cycle: Option<Vec<usize>>,
        #[arg(long)]
        plus: bool,
    },
    /// Build a gadget.
    Gadget {
        #[arg(value_enum)]
        kind: GadgetKind,
        #[arg(short)]
        m: usize,
        #[arg(long)]
        plus: bool,
        /// Graph output file; metadata goes to `<file>.meta.json`.
        #[arg(short)]
        o: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Build a reduction instance from a JSON config.
    Reduce {
        config: String,
        /// Output stem: `<stem>` (graph), `<stem>.qcsp`, `<stem>.meta.json`.
        #[arg(short)]
        o: Option<String>,
    },
    /// Search for a hardness certificate and re-verify it.
    Certify { template: String },
    /// List the tournaments on n vertices up to isomorphism.
    Enum {
        #[arg(short)]
        n: usize,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn limits(cli: &Cli) -> Result<Limits, CliError> {
    let env_budget = match std::env::var("QCT_NODE_BUDGET") {
        Ok(v) => Some(
            v.trim()
                .parse::<u64>()
                .map_err(|_| CliError::usage(format!("QCT_NODE_BUDGET is not a number: `{v}`")))?,
        ),
        Err(_) => None,
    };
    Ok(Limits {
        max_vertices: cli.max_vertices.unwrap_or(DEFAULT_MAX_VERTICES),
        node_budget: cli.node_budget.or(env_budget).unwrap_or(DEFAULT_NODE_BUDGET),
    })
}

fn run(cli: &Cli) -> Result<i32, CliError> {
    let limits = limits(cli)?;
    match &cli.command {
        Command::Classify { template } => commands::classify(template),
        Command::Solve {
            template,
            sentence,
            engine,
        } => commands::solve(template, sentence, *engine, &limits),
        Command::Spill {
            template,
            core,
            cycle,
            plus,
        } => commands::spill(template, core, cycle.as_deref(), *plus, &limits),
        Command::Gadget {
            kind: GadgetKind::Cyl,
            m,
            plus,
            o,
            format,
        } => commands::gadget(*m, *plus, o.as_deref(), *format),
        Command::Reduce { config, o } => commands::reduce(config, o.as_deref(), &limits),
        Command::Certify { template } => commands::certify(template, &limits),
        Command::Enum { n } => commands::enumerate(*n),
        Command::Verify { suite, max_n, seed } => suites::run(*suite, *max_n, *seed, &limits),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            let body = serde_json::json!({ "outcome": e.outcome(), "message": e.message });
            println!("{}", serde_json::to_string_pretty(&body).expect("json"));
            eprintln!("qct: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}

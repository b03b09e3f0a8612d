use std::path::{Path, PathBuf};

use qct_core::graph::format::{parse_any, GraphJson};
use qct_core::graph::{LabeledGraph, Tournament};
use qct_core::qcsp::QcspSentence;
use qct_core::Digraph;

use crate::error::CliError;

pub fn read(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{path}: {e}")))
}

pub fn graph(path: &str) -> Result<LabeledGraph, CliError> {
    parse_any(&read(path)?).map_err(|e| CliError::usage(format!("{path}: {e}")))
}

pub fn tournament(path: &str) -> Result<Tournament, CliError> {
    Tournament::new(graph(path)?.graph).map_err(|e| CliError::usage(format!("{path}: {e}")))
}

pub fn sentence(path: &str) -> Result<QcspSentence, CliError> {
    QcspSentence::parse_any(&read(path)?).map_err(|e| CliError::usage(format!("{path}: {e}")))
}

pub fn from_json(raw: GraphJson) -> Result<Digraph, CliError> {
    Ok(Digraph::new(raw.n, raw.edges, false)?)
}

/// A graph given inline as JSON or as a path relative to `base`.
#[derive(serde::Deserialize)]
#[serde(untagged)]
pub enum GraphSource {
    Inline(GraphJson),
    Path(String),
}

impl GraphSource {
    pub fn load(self, base: &Path) -> Result<Digraph, CliError> {
        match self {
            GraphSource::Inline(raw) => from_json(raw),
            GraphSource::Path(p) => {
                let full: PathBuf = base.join(p);
                Ok(graph(&full.to_string_lossy())?.graph)
            }
        }
    }
}

//! Text and JSON forms of graphs.
//!
//! Text form:
//!
//! ```text
//! # comment
//! n 3 reflexive
//! 0 1
//! 1 2
//! 2 0
//! constants 0 1
//! ```
//!
//! With `reflexive` every vertex gets a loop and loops are not listed. The
//! `constants` line is optional. The JSON mirror is
//! `{"n":3,"edges":[[0,0],[0,1],...],"constants":[0,1]}` with loops explicit.

use serde::{Deserialize, Serialize};

use super::{Digraph, GraphError, LabeledGraph};

fn parse_err(line: usize, message: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_usize(token: &str, line: usize) -> Result<usize, GraphError> {
    token
        .parse()
        .map_err(|_| parse_err(line, format!("expected a vertex id, found `{token}`")))
}

pub fn parse_text(text: &str) -> Result<LabeledGraph, GraphError> {
    let mut header: Option<(usize, bool)> = None;
    let mut edges = Vec::new();
    let mut constants = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = body.split_whitespace().collect();
        match (header, tokens[0]) {
            (None, "n") => {
                let n = tokens
                    .get(1)
                    .ok_or_else(|| parse_err(line, "missing vertex count"))
                    .and_then(|t| parse_usize(t, line))?;
                let reflexive = match tokens.get(2) {
                    None => false,
                    Some(&"reflexive") => true,
                    Some(other) => {
                        return Err(parse_err(line, format!("unexpected `{other}` in header")))
                    }
                };
                if tokens.len() > 3 {
                    return Err(parse_err(line, "trailing tokens in header"));
                }
                header = Some((n, reflexive));
            }
            (None, _) => return Err(parse_err(line, "expected header `n <N> [reflexive]`")),
            (Some(_), "constants") => {
                constants = tokens[1..]
                    .iter()
                    .map(|t| parse_usize(t, line))
                    .collect::<Result<_, _>>()?;
            }
            (Some((n, _)), _) => {
                if tokens.len() != 2 {
                    return Err(parse_err(line, "expected an edge `<u> <v>`"));
                }
                let u = parse_usize(tokens[0], line)?;
                let v = parse_usize(tokens[1], line)?;
                if u >= n || v >= n {
                    return Err(parse_err(line, format!("edge ({u}, {v}) outside 0..{n}")));
                }
                edges.push((u, v));
            }
        }
    }
    let (n, reflexive) = header.ok_or_else(|| parse_err(0, "empty graph file"))?;
    LabeledGraph::new(Digraph::new(n, edges, reflexive)?, constants)
}

/// Normalized text form: sorted edges, loops folded into `reflexive`.
pub fn to_text(g: &Digraph, constants: &[usize]) -> String {
    let reflexive = g.n() > 0 && g.is_reflexive();
    let mut s = format!("n {}{}\n", g.n(), if reflexive { " reflexive" } else { "" });
    for (u, v) in g.edges() {
        if reflexive && u == v {
            continue;
        }
        s.push_str(&format!("{u} {v}\n"));
    }
    if !constants.is_empty() {
        let list: Vec<String> = constants.iter().map(usize::to_string).collect();
        s.push_str(&format!("constants {}\n", list.join(" ")));
    }
    s
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(default)]
    pub constants: Vec<usize>,
}

impl GraphJson {
    pub fn from_graph(g: &Digraph, constants: &[usize]) -> Self {
        GraphJson {
            n: g.n(),
            edges: g.edge_list(),
            constants: constants.to_vec(),
        }
    }
}

pub fn to_json(g: &Digraph, constants: &[usize]) -> String {
    serde_json::to_string(&GraphJson::from_graph(g, constants)).expect("graph json")
}

pub fn parse_json(text: &str) -> Result<LabeledGraph, GraphError> {
    let raw: GraphJson = serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))?;
    LabeledGraph::new(Digraph::new(raw.n, raw.edges, false)?, raw.constants)
}

/// JSON if the first non-blank character is `{`, text otherwise.
pub fn parse_any(text: &str) -> Result<LabeledGraph, GraphError> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_text(text)
    }
}

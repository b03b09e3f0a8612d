//! Quantified sentences over a template: model, solvers and classifier.

mod classify;
mod game;
mod q2sat;
mod random;
mod sentence;
mod solve;

use thiserror::Error;

use crate::graph::GraphError;

pub use classify::{classify, sur_hom_to_tt2, sur_hom_tt2_power, Classification, Verdict};
pub use game::solve_game;
pub use q2sat::{is_contraposition_closed, solve_q2sat, tt2_implication_form, ImplicationSystem};
pub use random::{random_sentence, random_sentences, RandomSpec};
pub use sentence::{eliminate_equality, parse_sentence, Atom, Eliminated, QcspSentence, Quantifier};
pub use solve::{solve, Engine, EngineUsed, Solved};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QcspError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}, column {column}: undeclared variable `{name}`")]
    Undeclared {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("variable `{0}` declared twice")]
    DuplicateVariable(String),
    #[error("game budget exhausted after {nodes} nodes")]
    Budget { nodes: u64 },
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("engine refused: {0}")]
    EngineRefused(String),
    #[error("no surjection from (TT_2)^{m}: too few middle vertices")]
    TooSmallForSurjection { m: usize },
    #[error("construction check failed: {0}")]
    ConstructionCheck(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

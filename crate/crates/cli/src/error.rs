use std::fmt;

use qct_core::gadgets::GadgetError;
use qct_core::graph::GraphError;
use qct_core::morphisms::MorphismError;
use qct_core::qcsp::QcspError;

pub const CHECK_FAILED: i32 = 1;
pub const USAGE: i32 = 2;
pub const REFUSED: i32 = 3;
pub const BUDGET: i32 = 4;

/// An error with the exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        CliError::new(USAGE, message)
    }

    /// `budget` or `error`, the JSON outcome for this failure.
    pub fn outcome(&self) -> &'static str {
        match self.code {
            BUDGET => "budget",
            REFUSED => "refused",
            _ => "error",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn graph_code(e: &GraphError) -> i32 {
    match e {
        GraphError::CapExceeded { .. } | GraphError::EdgeCapExceeded { .. } => BUDGET,
        GraphError::Internal(_) => CHECK_FAILED,
        _ => USAGE,
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::new(graph_code(&e), e.to_string())
    }
}

impl From<MorphismError> for CliError {
    fn from(e: MorphismError) -> Self {
        let code = match &e {
            MorphismError::Budget { .. } | MorphismError::TooLarge { .. } => BUDGET,
            MorphismError::Graph(g) => graph_code(g),
            MorphismError::InvalidConstraint(_) => USAGE,
            _ => CHECK_FAILED,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<QcspError> for CliError {
    fn from(e: QcspError) -> Self {
        let code = match &e {
            QcspError::Budget { .. } => BUDGET,
            QcspError::EngineRefused(_) | QcspError::Unsupported(_) => REFUSED,
            QcspError::Parse { .. } | QcspError::Undeclared { .. } | QcspError::DuplicateVariable(_) => USAGE,
            QcspError::Graph(g) => graph_code(g),
            QcspError::TooSmallForSurjection { .. } | QcspError::ConstructionCheck(_) => CHECK_FAILED,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<GadgetError> for CliError {
    fn from(e: GadgetError) -> Self {
        match e {
            GadgetError::Graph(g) => g.into(),
            GadgetError::Morphism(m) => m.into(),
            GadgetError::Qcsp(q) => q.into(),
            GadgetError::ConstructionCheck(_) => CliError::new(CHECK_FAILED, e.to_string()),
            other => CliError::usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::usage(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::usage(format!("invalid JSON: {e}"))
    }
}

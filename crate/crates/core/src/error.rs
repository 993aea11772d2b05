use std::fmt;

use thiserror::Error;

/// A location in a PDDL source text.
#[derive(Clone, Copy, Debug, Default)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

/// Positions never participate in equality so that re-parsed ASTs compare
/// equal to the originals.
impl PartialEq for Pos {
    fn eq(&self, _: &Pos) -> bool {
        true
    }
}

impl Eq for Pos {}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("action {0}: add and delete lists intersect")]
    Contradictory(String),
    #[error("action {0}: cost must be positive")]
    NonPositiveCost(String),
    #[error("action {0}: negative duration")]
    NegativeDuration(String),
    #[error("atom id {0} is not declared")]
    UnknownAtom(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PddlError {
    #[error("{pos}: syntax error: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error("{pos}: unsupported feature `{feature}`")]
    Unsupported { pos: Pos, feature: String },
    #[error("{pos}: undeclared {kind} `{name}`")]
    Undeclared { pos: Pos, kind: &'static str, name: String },
    #[error("{pos}: {msg}")]
    Invalid { pos: Pos, msg: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl PddlError {
    /// Prefixes the position with a file name, `file:line:col: ...`.
    pub fn with_file(&self, file: &str) -> String {
        format!("{file}:{self}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("planner produced an invalid plan: {0}")]
    InvalidPlan(String),
}

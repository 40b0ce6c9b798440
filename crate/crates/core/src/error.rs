use thiserror::Error;

use crate::word::Var;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("'{0}' is not a letter (expected A-Z)")]
    InvalidLetter(char),
    #[error("'{0}' is not a variable (expected a-z)")]
    InvalidVar(char),
    #[error("'{0}' is neither a letter nor a variable")]
    InvalidTerm(char),
    #[error("narrowing {0} -> {0} {0} prepends a variable to itself")]
    SelfPrepend(Var),
    #[error("expected an equation list, found the {0}")]
    NotAnEquationList(&'static str),
    #[error("the base scheme takes exactly one equation, got {0}")]
    BaseArity(usize),
    #[error("no narrowing applies: {0}")]
    NarrowingPrecondition(&'static str),
    #[error("narrowing `{0}` is not compatible with the current state")]
    Incompatible(String),
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("budget limits must be at least 1")]
    InvalidBudget,
    #[error("the system has no equations")]
    EmptySystem,
}

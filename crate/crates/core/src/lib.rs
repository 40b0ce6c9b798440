//! Word equation solving by narrowing.
//!
//! A system of equations over letters (`A`..`Z`) and variables (`a`..`z`) is
//! unfolded into a tree of simplified equation lists, one child per
//! compatible elementary narrowing. A node whose label textually repeats an
//! ancestor's label is folded back onto that ancestor, which turns many
//! infinite trees into finite solution graphs. Every solution corresponds to
//! a path from the root to an accepting leaf.

pub mod error;
pub mod graph;
pub mod narrow;
pub mod oracle;
pub mod parse;
pub mod rewrite;
pub mod solutions;
pub mod witness;
pub mod word;

pub use error::Error;
pub use graph::{
    build, build_with, verdict, Budget, BuildOptions, BuildOutcome, BuildStatus, Exhaustion,
    FoldMode, NodeId, NodeKind, SolutionGraph, Verdict,
};
pub use narrow::{compatible_narrowings, step};
pub use parse::{parse_program, parse_system, serialize_program, serialize_system};
pub use rewrite::{simplify, Scheme};
pub use solutions::{enumerate_solutions, extract_program, min_witness, path_solution, Solution};
pub use witness::verify;
pub use word::{
    Equation, Letter, Narrowing, NarrowingKind, NarrowingProgram, SystemState, Term, Var, Word,
};

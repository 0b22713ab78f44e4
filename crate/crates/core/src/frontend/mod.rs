//! Input formats, proof export, the command line and the interaction
//! server.

pub mod cli;
pub mod dimacs;
pub mod json;
pub mod latex;
pub mod serve;
pub mod smt;

use std::collections::BTreeSet;

use crate::formulas::{Clause, Formula, PolarisationSet};
use crate::kernel::Sequent;
use crate::theories::TheoryKind;

pub use dimacs::{parse_dimacs, print_dimacs};
pub use smt::parse_mini_smt;

/// The result of parsing a problem file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParsedProblem {
    /// Present iff a complete problem was read.
    pub statement: Option<Sequent>,
    pub clauses: Option<BTreeSet<Clause>>,
    /// `Some(true)` when the problem is expected to be provable (unsat).
    pub expected: Option<bool>,
    pub theory: Option<TheoryKind>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Dimacs { line: usize, message: String },
    #[error("unsupported construct: {0}")]
    Unsupported(String),
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("sort mismatch: {0}")]
    Sort(String),
}

/// `φ' ⊢` with an empty polarisation.
pub fn clause_statement<'a>(clauses: impl IntoIterator<Item = &'a Clause>) -> Sequent {
    let gamma: BTreeSet<Formula> = clauses.into_iter().map(Clause::represent).collect();
    Sequent::developed(gamma, PolarisationSet::new())
}

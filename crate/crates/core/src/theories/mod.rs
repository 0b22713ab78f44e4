//! Ground decision procedures and the theory-entailment notions built on them.
//!
//! A procedure answers `None` when a finite set of literals is consistent
//! with its theory and `Some(s)` with an inconsistent subset `s` otherwise.

mod cc;
mod lra;
mod syntactic;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::formulas::Literal;

pub use cc::{cc_consistency, CongruenceClosure};
pub use lra::{lra_consistency, LinearArithmetic};
pub use syntactic::{syntactic_consistency, EmptyTheory};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TheoryError {
    #[error("theory {theory} does not support literal {literal}")]
    Unsupported { theory: &'static str, literal: String },
}

pub trait DecisionProcedure: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;

    fn consistency(
        &self,
        lits: &BTreeSet<Literal>,
    ) -> Result<Option<BTreeSet<Literal>>, TheoryError>;

    /// Whether entailment of `l` can differ from plain membership, i.e. whether
    /// the theory interprets the atom beyond its propositional identity.
    fn interprets(&self, _l: &Literal) -> bool {
        false
    }
}

pub type Theory = Arc<dyn DecisionProcedure>;

/// The three shipped procedures, selectable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TheoryKind {
    #[default]
    Empty,
    Lra,
    Cc,
}

impl TheoryKind {
    pub fn instantiate(self) -> Theory {
        match self {
            TheoryKind::Empty => Arc::new(EmptyTheory),
            TheoryKind::Lra => Arc::new(LinearArithmetic),
            TheoryKind::Cc => Arc::new(CongruenceClosure),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TheoryKind::Empty => "empty",
            TheoryKind::Lra => "lra",
            TheoryKind::Cc => "cc",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown theory `{0}` (expected empty, lra or cc)")]
pub struct UnknownTheory(pub String);

impl FromStr for TheoryKind {
    type Err = UnknownTheory;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "empty" => Ok(TheoryKind::Empty),
            "lra" => Ok(TheoryKind::Lra),
            "cc" => Ok(TheoryKind::Cc),
            other => Err(UnknownTheory(other.to_string())),
        }
    }
}

impl fmt::Display for TheoryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `l ∈ mSat(delta)`: `delta ∪ {¬l}` is inconsistent.
pub fn m_sat_member(
    dp: &dyn DecisionProcedure,
    delta: &BTreeSet<Literal>,
    l: &Literal,
) -> Result<bool, TheoryError> {
    if delta.contains(l) {
        return Ok(true);
    }
    let mut s = delta.clone();
    s.insert(l.negate());
    Ok(dp.consistency(&s)?.is_some())
}

/// `nSat_φ(delta)`: the members of `atoms` (the literals of `φ` and their
/// negations) entailed by `delta`.
pub fn n_sat(
    dp: &dyn DecisionProcedure,
    atoms: &BTreeSet<Literal>,
    delta: &BTreeSet<Literal>,
) -> Result<BTreeSet<Literal>, TheoryError> {
    let mut out = BTreeSet::new();
    if dp.consistency(delta)?.is_some() {
        return Ok(atoms.clone());
    }
    for l in atoms {
        if m_sat_member(dp, delta, l)? {
            out.insert(l.clone());
        }
    }
    Ok(out)
}

/// A complementary pair in `lits`, if any.
pub(crate) fn complementary_pair(lits: &BTreeSet<Literal>) -> Option<BTreeSet<Literal>> {
    lits.iter()
        .filter(|l| l.is_positive())
        .find(|l| lits.contains(&l.negate()))
        .map(|l| [l.clone(), l.negate()].into_iter().collect())
}

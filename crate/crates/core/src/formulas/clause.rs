use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::formula::Formula;
use super::literal::Literal;

/// A finite set of literals read as their disjunction; empty is `⊥`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Clause {
    literals: BTreeSet<Literal>,
}

impl Clause {
    pub fn new(lits: impl IntoIterator<Item = Literal>) -> Self {
        Clause { literals: lits.into_iter().collect() }
    }

    pub fn literals(&self) -> &BTreeSet<Literal> {
        &self.literals
    }

    pub fn iter(&self) -> impl Iterator<Item = &Literal> {
        self.literals.iter()
    }

    /// Number of literals.
    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn contains(&self, l: &Literal) -> bool {
        self.literals.contains(l)
    }

    /// `l1 ∨− (l2 ∨− (… ∨− ⊥−))` in canonical literal order.
    pub fn represent(&self) -> Formula {
        self.literals
            .iter()
            .rev()
            .fold(Formula::FalseNeg, |acc, l| Formula::or_neg(Formula::lit(l.clone()), acc))
    }

    /// Recovers the clause a formula represents, if it has that shape.
    pub fn from_representation(f: &Formula) -> Option<Clause> {
        let mut lits = Vec::new();
        let mut cur = f;
        loop {
            match cur {
                Formula::FalseNeg => break,
                Formula::OrNeg(a, b) => {
                    lits.push(a.as_literal()?.clone());
                    cur = b;
                }
                _ => return None,
            }
        }
        let c = Clause::new(lits.iter().cloned());
        // only the canonical right-nested order counts as a representation
        if c.len() == lits.len() && c.literals.iter().eq(lits.iter()) {
            Some(c)
        } else {
            None
        }
    }
}

impl FromIterator<Literal> for Clause {
    fn from_iter<T: IntoIterator<Item = Literal>>(iter: T) -> Self {
        Clause::new(iter)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return write!(f, "⊥");
        }
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, " ∨ ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

pub fn represent_clause(c: &Clause) -> Formula {
    c.represent()
}

/// Symbols of a clause representation: its literals and `∨−` connectives.
/// The closing `⊥−` unit is not counted.
pub fn representation_size(f: &Formula) -> usize {
    match f {
        Formula::OrNeg(a, b) => 1 + representation_size(a) + representation_size(b),
        Formula::FalseNeg => 0,
        other => other.size(),
    }
}

/// Sum of clause sizes.
pub fn clause_set_size<'a>(phi: impl IntoIterator<Item = &'a Clause>) -> usize {
    phi.into_iter().map(Clause::len).sum()
}

/// Literals occurring in `phi`, together with their negations.
pub fn atoms_of<'a>(phi: impl IntoIterator<Item = &'a Clause>) -> BTreeSet<Literal> {
    let mut out = BTreeSet::new();
    for c in phi {
        for l in c.iter() {
            out.insert(l.clone());
            out.insert(l.negate());
        }
    }
    out
}

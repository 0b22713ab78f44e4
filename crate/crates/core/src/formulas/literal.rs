use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::atom::Atom;

/// A signed atom. Negation flips the sign, so it is involutive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Literal {
    atom: Arc<Atom>,
    positive: bool,
}

impl Literal {
    pub fn new(atom: Atom, positive: bool) -> Self {
        Literal { atom: Arc::new(atom), positive }
    }

    pub fn pos(atom: Atom) -> Self {
        Literal::new(atom, true)
    }

    pub fn neg(atom: Atom) -> Self {
        Literal::new(atom, false)
    }

    /// Propositional variable shorthand.
    pub fn var(name: &str, positive: bool) -> Self {
        Literal::new(Atom::prop(name), positive)
    }

    pub fn atom(&self) -> &Atom {
        &self.atom
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }

    pub fn negate(&self) -> Literal {
        Literal { atom: Arc::clone(&self.atom), positive: !self.positive }
    }
}

// Atoms in structural order; the positive sign sorts first.
impl Ord for Literal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.atom
            .cmp(&other.atom)
            .then_with(|| other.positive.cmp(&self.positive))
    }
}

impl PartialOrd for Literal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::ops::Not for &Literal {
    type Output = Literal;
    fn not(self) -> Literal {
        self.negate()
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.atom)
        } else if self.atom.is_prop() {
            write!(f, "¬{}", self.atom)
        } else {
            write!(f, "¬({})", self.atom)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negation_is_involutive() {
        let l = Literal::var("a", true);
        assert_eq!(l.negate().negate(), l);
        assert_ne!(l.negate(), l);
    }

    #[test]
    fn positive_sorts_before_negative() {
        let a = Literal::var("a", true);
        let na = Literal::var("a", false);
        let b = Literal::var("b", true);
        assert!(a < na);
        assert!(na < b);
    }
}

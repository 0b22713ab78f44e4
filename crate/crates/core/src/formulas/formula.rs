use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::literal::Literal;

/// Polarised propositional formulae over literals.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Formula {
    Lit(Literal),
    AndPos(Arc<Formula>, Arc<Formula>),
    OrPos(Arc<Formula>, Arc<Formula>),
    TruePos,
    FalsePos,
    AndNeg(Arc<Formula>, Arc<Formula>),
    OrNeg(Arc<Formula>, Arc<Formula>),
    TrueNeg,
    FalseNeg,
}

/// Polarity of a formula relative to a polarisation set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarity {
    PPositive,
    PNegative,
    Unpolarised,
}

impl Formula {
    pub fn lit(l: Literal) -> Self {
        Formula::Lit(l)
    }

    pub fn and_pos(a: Formula, b: Formula) -> Self {
        Formula::AndPos(Arc::new(a), Arc::new(b))
    }

    pub fn or_pos(a: Formula, b: Formula) -> Self {
        Formula::OrPos(Arc::new(a), Arc::new(b))
    }

    pub fn and_neg(a: Formula, b: Formula) -> Self {
        Formula::AndNeg(Arc::new(a), Arc::new(b))
    }

    pub fn or_neg(a: Formula, b: Formula) -> Self {
        Formula::OrNeg(Arc::new(a), Arc::new(b))
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Formula::Lit(l) => Some(l),
            _ => None,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Formula::Lit(_))
    }

    /// De Morgan dual; involutive and size-preserving.
    pub fn negate(&self) -> Formula {
        match self {
            Formula::Lit(l) => Formula::Lit(l.negate()),
            Formula::AndPos(a, b) => Formula::or_neg(a.negate(), b.negate()),
            Formula::OrPos(a, b) => Formula::and_neg(a.negate(), b.negate()),
            Formula::AndNeg(a, b) => Formula::or_pos(a.negate(), b.negate()),
            Formula::OrNeg(a, b) => Formula::and_pos(a.negate(), b.negate()),
            Formula::TruePos => Formula::FalseNeg,
            Formula::FalsePos => Formula::TrueNeg,
            Formula::TrueNeg => Formula::FalsePos,
            Formula::FalseNeg => Formula::TruePos,
        }
    }

    /// Node count of the formula tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Lit(_)
            | Formula::TruePos
            | Formula::FalsePos
            | Formula::TrueNeg
            | Formula::FalseNeg => 1,
            Formula::AndPos(a, b)
            | Formula::OrPos(a, b)
            | Formula::AndNeg(a, b)
            | Formula::OrNeg(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Polarity by top connective, or by membership in `pol` for literals.
    pub fn classify(&self, pol: &PolarisationSet) -> Polarity {
        match self {
            Formula::Lit(l) => pol.classify(l),
            Formula::AndPos(..) | Formula::OrPos(..) | Formula::TruePos | Formula::FalsePos => {
                Polarity::PPositive
            }
            _ => Polarity::PNegative,
        }
    }

    /// Whether `l` or its negation occurs as a literal subformula.
    pub fn mentions(&self, l: &Literal) -> bool {
        match self {
            Formula::Lit(m) => m.atom() == l.atom(),
            Formula::AndPos(a, b)
            | Formula::OrPos(a, b)
            | Formula::AndNeg(a, b)
            | Formula::OrNeg(a, b) => a.mentions(l) || b.mentions(l),
            _ => false,
        }
    }

    /// Collects every literal subformula.
    pub fn literals_into(&self, out: &mut BTreeSet<Literal>) {
        match self {
            Formula::Lit(m) => {
                out.insert(m.clone());
            }
            Formula::AndPos(a, b)
            | Formula::OrPos(a, b)
            | Formula::AndNeg(a, b)
            | Formula::OrNeg(a, b) => {
                a.literals_into(out);
                b.literals_into(out);
            }
            _ => {}
        }
    }
}

impl From<Literal> for Formula {
    fn from(l: Literal) -> Self {
        Formula::Lit(l)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn sub(x: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match x {
                Formula::AndPos(..) | Formula::OrPos(..) | Formula::AndNeg(..) | Formula::OrNeg(..) => {
                    write!(f, "({x})")
                }
                _ => write!(f, "{x}"),
            }
        }
        match self {
            Formula::Lit(l) => write!(f, "{l}"),
            Formula::TruePos => write!(f, "⊤+"),
            Formula::FalsePos => write!(f, "⊥+"),
            Formula::TrueNeg => write!(f, "⊤−"),
            Formula::FalseNeg => write!(f, "⊥−"),
            Formula::AndPos(a, b) | Formula::OrPos(a, b) | Formula::AndNeg(a, b) | Formula::OrNeg(a, b) => {
                let op = match self {
                    Formula::AndPos(..) => "∧+",
                    Formula::OrPos(..) => "∨+",
                    Formula::AndNeg(..) => "∧−",
                    _ => "∨−",
                };
                sub(a, f)?;
                write!(f, " {op} ")?;
                // right-nested chains of the same connective print flat
                if std::mem::discriminant(self) == std::mem::discriminant(b.as_ref()) {
                    write!(f, "{b}")
                } else {
                    sub(b, f)
                }
            }
        }
    }
}

/// A syntactically consistent set of literals declared positive.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Literal>", into = "Vec<Literal>")]
pub struct PolarisationSet {
    positives: BTreeSet<Literal>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("polarisation set would contain both {0} and its negation")]
pub struct InconsistentPolarisation(pub Literal);

impl PolarisationSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_literals(
        lits: impl IntoIterator<Item = Literal>,
    ) -> Result<Self, InconsistentPolarisation> {
        let mut p = Self::new();
        for l in lits {
            p.insert(l)?;
        }
        Ok(p)
    }

    pub fn insert(&mut self, l: Literal) -> Result<(), InconsistentPolarisation> {
        if self.positives.contains(&l.negate()) {
            return Err(InconsistentPolarisation(l));
        }
        self.positives.insert(l);
        Ok(())
    }

    pub fn contains(&self, l: &Literal) -> bool {
        self.positives.contains(l)
    }

    pub fn classify(&self, l: &Literal) -> Polarity {
        if self.positives.contains(l) {
            Polarity::PPositive
        } else if self.positives.contains(&l.negate()) {
            Polarity::PNegative
        } else {
            Polarity::Unpolarised
        }
    }

    pub fn is_unpolarised(&self, l: &Literal) -> bool {
        self.classify(l) == Polarity::Unpolarised
    }

    /// `P ∪ {A}` when `A` is a `P`-unpolarised literal, `P` otherwise.
    pub fn polar(&self, a: &Formula) -> PolarisationSet {
        match a {
            Formula::Lit(l) if self.is_unpolarised(l) => {
                let mut p = self.clone();
                p.positives.insert(l.clone());
                p
            }
            _ => self.clone(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &Literal> {
        self.positives.iter()
    }

    pub fn literals(&self) -> &BTreeSet<Literal> {
        &self.positives
    }

    pub fn len(&self) -> usize {
        self.positives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positives.is_empty()
    }
}

impl TryFrom<Vec<Literal>> for PolarisationSet {
    type Error = InconsistentPolarisation;
    fn try_from(v: Vec<Literal>) -> Result<Self, Self::Error> {
        Self::from_literals(v)
    }
}

impl From<PolarisationSet> for Vec<Literal> {
    fn from(p: PolarisationSet) -> Self {
        p.positives.into_iter().collect()
    }
}

/// Size measure `size` as a free function.
pub fn size(a: &Formula) -> usize {
    a.size()
}

/// Free-function form of [`Formula::negate`].
pub fn negate_formula(a: &Formula) -> Formula {
    a.negate()
}

pub fn classify(a: &Formula, p: &PolarisationSet) -> Polarity {
    a.classify(p)
}

pub fn polar(p: &PolarisationSet, a: &Formula) -> PolarisationSet {
    p.polar(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Formula {
        Formula::lit(Literal::var(n, true))
    }

    #[test]
    fn negation_table() {
        assert_eq!(Formula::TruePos.negate(), Formula::FalseNeg);
        assert_eq!(Formula::FalseNeg.negate(), Formula::TruePos);
        assert_eq!(Formula::TrueNeg.negate(), Formula::FalsePos);
        assert_eq!(Formula::FalsePos.negate(), Formula::TrueNeg);
        let a = v("a");
        let b = v("b");
        assert_eq!(
            Formula::and_pos(a.clone(), b.clone()).negate(),
            Formula::or_neg(a.negate(), b.negate())
        );
        assert_eq!(
            Formula::or_pos(a.clone(), b.clone()).negate(),
            Formula::and_neg(a.negate(), b.negate())
        );
    }

    #[test]
    fn sizes() {
        assert_eq!(v("l").size(), 1);
        assert_eq!(Formula::and_pos(v("a"), v("b")).size(), 3);
    }

    #[test]
    fn classify_literals_and_connectives() {
        let a = Literal::var("a", true);
        let p = PolarisationSet::from_literals([a.clone()]).unwrap();
        assert_eq!(Formula::lit(a.clone()).classify(&p), Polarity::PPositive);
        assert_eq!(Formula::lit(a.negate()).classify(&p), Polarity::PNegative);
        assert_eq!(v("b").classify(&p), Polarity::Unpolarised);
        assert_eq!(Formula::FalsePos.classify(&p), Polarity::PPositive);
        assert_eq!(Formula::TrueNeg.classify(&p), Polarity::PNegative);
    }

    #[test]
    fn polar_cases() {
        let l = Literal::var("l", true);
        let empty = PolarisationSet::new();
        let with_l = PolarisationSet::from_literals([l.clone()]).unwrap();
        let with_nl = PolarisationSet::from_literals([l.negate()]).unwrap();
        assert_eq!(empty.polar(&l.clone().into()), with_l);
        assert_eq!(with_l.polar(&l.clone().into()), with_l);
        assert_eq!(with_nl.polar(&l.clone().into()), with_nl);
        assert_eq!(empty.polar(&Formula::TruePos), empty);
    }

    #[test]
    fn inconsistent_polarisation_is_rejected() {
        let l = Literal::var("l", true);
        assert!(PolarisationSet::from_literals([l.clone(), l.negate()]).is_err());
    }
}

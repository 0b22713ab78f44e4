use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::formulas::{Formula, Literal, PolarisationSet, Polarity};

/// An LKThp judgement: `Γ ⊢ Δ` (unfocused) or `Γ ⊢ [A]` (focused), both
/// under a polarisation set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sequent {
    Unfocused { gamma: BTreeSet<Formula>, delta: Vec<Formula>, pol: PolarisationSet },
    Focused { gamma: BTreeSet<Formula>, focus: Formula, pol: PolarisationSet },
}

impl Sequent {
    pub fn developed(gamma: BTreeSet<Formula>, pol: PolarisationSet) -> Self {
        Sequent::Unfocused { gamma, delta: Vec::new(), pol }
    }

    /// `⊢ Δ` with empty context and polarisation.
    pub fn goal(delta: Vec<Formula>) -> Self {
        Sequent::Unfocused { gamma: BTreeSet::new(), delta, pol: PolarisationSet::new() }
    }

    pub fn gamma(&self) -> &BTreeSet<Formula> {
        match self {
            Sequent::Unfocused { gamma, .. } | Sequent::Focused { gamma, .. } => gamma,
        }
    }

    pub fn pol(&self) -> &PolarisationSet {
        match self {
            Sequent::Unfocused { pol, .. } | Sequent::Focused { pol, .. } => pol,
        }
    }

    pub fn is_developed(&self) -> bool {
        matches!(self, Sequent::Unfocused { delta, .. } if delta.is_empty())
    }

    /// `atm_P(Γ)`: the `P`-positive literals of the context.
    pub fn positive_atoms(&self) -> BTreeSet<Literal> {
        positive_atoms(self.gamma(), self.pol())
    }

    /// Sum of the sizes of all formulae in the sequent.
    pub fn size(&self) -> usize {
        let g: usize = self.gamma().iter().map(Formula::size).sum();
        match self {
            Sequent::Unfocused { delta, .. } => g + delta.iter().map(Formula::size).sum::<usize>(),
            Sequent::Focused { focus, .. } => g + focus.size(),
        }
    }

    /// Checks that the context only holds `P`-negative formulae and
    /// `P`-positive literals.
    pub fn check_context(&self) -> Result<(), String> {
        let pol = self.pol();
        for f in self.gamma() {
            let ok = match f.as_literal() {
                Some(l) => pol.classify(l) != Polarity::Unpolarised,
                None => f.classify(pol) == Polarity::PNegative,
            };
            if !ok {
                return Err(format!("context formula {f} is neither negative nor a positive literal"));
            }
        }
        Ok(())
    }
}

pub fn positive_atoms(gamma: &BTreeSet<Formula>, pol: &PolarisationSet) -> BTreeSet<Literal> {
    gamma
        .iter()
        .filter_map(Formula::as_literal)
        .filter(|l| pol.contains(l))
        .cloned()
        .collect()
}

/// `l ⋿ Γ`: `l` or its negation occurs in some formula of `Γ`.
pub fn occurs_in(l: &Literal, gamma: &BTreeSet<Formula>) -> bool {
    gamma.iter().any(|f| f.mentions(l))
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pol = join(self.pol().iter());
        match self {
            Sequent::Unfocused { gamma, delta, .. } => {
                let sep = if delta.is_empty() { "" } else { " " };
                write!(f, "{} ⊢{sep}{} ; P = {{{pol}}}", join(gamma), join(delta))
            }
            Sequent::Focused { gamma, focus, .. } => {
                write!(f, "{} ⊢ [{focus}] ; P = {{{pol}}}", join(gamma))
            }
        }
    }
}

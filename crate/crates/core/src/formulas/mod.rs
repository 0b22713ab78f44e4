//! Polarised propositional syntax: atoms, literals, formulae, polarisation
//! sets and clauses.

mod atom;
mod clause;
mod formula;
mod literal;

pub use atom::{linear_atom, Atom, GroundTerm, Relation};
pub use clause::{atoms_of, clause_set_size, represent_clause, representation_size, Clause};
pub use formula::{
    classify, negate_formula, polar, size, Formula, InconsistentPolarisation, PolarisationSet,
    Polarity,
};
pub use literal::Literal;

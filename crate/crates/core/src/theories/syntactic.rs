use std::collections::BTreeSet;

use super::{complementary_pair, DecisionProcedure, TheoryError};
use crate::formulas::Literal;

/// The empty theory: a set is inconsistent iff it contains some `l` and `¬l`.
#[derive(Debug, Clone, Copy, Default)]
pub struct EmptyTheory;

impl DecisionProcedure for EmptyTheory {
    fn name(&self) -> &'static str {
        "empty"
    }

    fn consistency(
        &self,
        lits: &BTreeSet<Literal>,
    ) -> Result<Option<BTreeSet<Literal>>, TheoryError> {
        Ok(syntactic_consistency(lits))
    }
}

pub fn syntactic_consistency(s: &BTreeSet<Literal>) -> Option<BTreeSet<Literal>> {
    complementary_pair(s)
}

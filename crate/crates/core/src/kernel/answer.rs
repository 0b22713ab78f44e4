use std::collections::BTreeSet;

use serde::Serialize;

use super::proof::ProofTree;
use super::sequent::Sequent;
use crate::formulas::Formula;

/// A kernel verdict. Only the kernel can construct one; everyone can read it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Answer(Verdict);

#[derive(Clone, Debug, PartialEq, Eq)]
enum Verdict {
    Provable { statement: Sequent, proof: ProofTree },
    NotProvable { statement: Sequent },
}

/// Borrowed view of an [`Answer`] for pattern matching.
#[derive(Clone, Copy, Debug)]
pub enum AnswerView<'a> {
    Provable { statement: &'a Sequent, proof: &'a ProofTree },
    NotProvable { statement: &'a Sequent },
}

impl Answer {
    pub(crate) fn provable(statement: Sequent, proof: ProofTree) -> Self {
        Answer(Verdict::Provable { statement, proof })
    }

    pub(crate) fn not_provable(statement: Sequent) -> Self {
        Answer(Verdict::NotProvable { statement })
    }

    pub fn view(&self) -> AnswerView<'_> {
        match &self.0 {
            Verdict::Provable { statement, proof } => AnswerView::Provable { statement, proof },
            Verdict::NotProvable { statement } => AnswerView::NotProvable { statement },
        }
    }

    pub fn is_provable(&self) -> bool {
        matches!(self.0, Verdict::Provable { .. })
    }

    pub fn statement(&self) -> &Sequent {
        match &self.0 {
            Verdict::Provable { statement, .. } | Verdict::NotProvable { statement } => statement,
        }
    }

    pub fn proof(&self) -> Option<&ProofTree> {
        match &self.0 {
            Verdict::Provable { proof, .. } => Some(proof),
            Verdict::NotProvable { .. } => None,
        }
    }

    /// The context the verdict is about: the pruned context of the proof for
    /// provable answers, the statement's context otherwise.
    pub fn key(&self) -> &BTreeSet<Formula> {
        match &self.0 {
            Verdict::Provable { proof, .. } => proof.conclusion.gamma(),
            Verdict::NotProvable { statement } => statement.gamma(),
        }
    }

    /// Whether the verdict transfers to the developed sequent `goal`: a proof
    /// of a smaller context weakens to it; unprovability of a larger context
    /// restricts to it.
    pub fn applies_to(&self, goal: &Sequent) -> bool {
        if !goal.is_developed() || !self.statement().is_developed() {
            return false;
        }
        match &self.0 {
            Verdict::Provable { .. } => self.key().is_subset(goal.gamma()),
            Verdict::NotProvable { .. } => goal.gamma().is_subset(self.key()),
        }
    }
}

#[derive(Serialize)]
struct AnswerSummary {
    answer: &'static str,
    statement: String,
    pruned: Option<String>,
    proof_size: Option<usize>,
}

impl Serialize for Answer {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        AnswerSummary {
            answer: if self.is_provable() { "provable" } else { "notprovable" },
            statement: self.statement().to_string(),
            pruned: self.proof().map(|p| p.conclusion.to_string()),
            proof_size: self.proof().map(ProofTree::size),
        }
        .serialize(s)
    }
}

//! Proof export as nested JSON objects
//! `{rule, conclusion, certificate?, premises, memo?}`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::formulas::Literal;
use crate::kernel::{ProofTree, Rule, Sequent};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofJson {
    pub rule: Rule,
    pub conclusion: Sequent,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<BTreeSet<Literal>>,
    #[serde(default)]
    pub premises: Vec<ProofJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub memo: Option<Box<ProofJson>>,
}

#[derive(Debug, thiserror::Error)]
#[error("invalid proof document: {0}")]
pub struct ImportError(#[from] serde_json::Error);

impl From<&ProofTree> for ProofJson {
    fn from(p: &ProofTree) -> Self {
        ProofJson {
            rule: p.rule,
            conclusion: p.conclusion.clone(),
            certificate: p.certificate.clone(),
            premises: p.premises.iter().map(ProofJson::from).collect(),
            memo: p.memo.as_ref().map(|m| Box::new(ProofJson::from(m))),
        }
    }
}

impl ProofJson {
    /// Rebuilds the tree. Nothing is validated; run the result through
    /// `proofcheck::check`.
    pub fn to_tree(&self) -> ProofTree {
        ProofTree::new(
            self.rule,
            self.conclusion.clone(),
            self.premises.iter().map(ProofJson::to_tree).collect(),
            self.certificate.clone(),
            self.memo.as_ref().map(|m| m.to_tree()),
        )
    }
}

pub fn export_proof(p: &ProofTree) -> String {
    serde_json::to_string_pretty(&ProofJson::from(p)).expect("proofs always serialise")
}

/// Deep proofs nest deeper than serde_json's default limit, so the limit is
/// lifted here.
pub fn import_proof(text: &str) -> Result<ProofTree, ImportError> {
    let mut de = serde_json::Deserializer::from_str(text);
    de.disable_recursion_limit();
    let doc = ProofJson::deserialize(&mut de)?;
    de.end()?;
    Ok(doc.to_tree())
}

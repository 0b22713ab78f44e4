use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::sequent::Sequent;
use crate::formulas::{Formula, Literal};

/// Rule tags of LKThp, the two admissible rules, and memo reuse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rule {
    AndPos,
    OrPos1,
    OrPos2,
    TruePos,
    Init1,
    Release,
    AndNeg,
    OrNeg,
    FalseNeg,
    TrueNeg,
    Store,
    Select,
    Init2,
    Pol,
    Cut,
    MemoHit,
}

impl Rule {
    pub const ALL: [Rule; 16] = [
        Rule::AndPos,
        Rule::OrPos1,
        Rule::OrPos2,
        Rule::TruePos,
        Rule::Init1,
        Rule::Release,
        Rule::AndNeg,
        Rule::OrNeg,
        Rule::FalseNeg,
        Rule::TrueNeg,
        Rule::Store,
        Rule::Select,
        Rule::Init2,
        Rule::Pol,
        Rule::Cut,
        Rule::MemoHit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::AndPos => "AndPos",
            Rule::OrPos1 => "OrPos1",
            Rule::OrPos2 => "OrPos2",
            Rule::TruePos => "TruePos",
            Rule::Init1 => "Init1",
            Rule::Release => "Release",
            Rule::AndNeg => "AndNeg",
            Rule::OrNeg => "OrNeg",
            Rule::FalseNeg => "FalseNeg",
            Rule::TrueNeg => "TrueNeg",
            Rule::Store => "Store",
            Rule::Select => "Select",
            Rule::Init2 => "Init2",
            Rule::Pol => "Pol",
            Rule::Cut => "Cut",
            Rule::MemoHit => "MemoHit",
        }
    }

    pub fn from_name(s: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.name() == s)
    }

    /// Whether the rule advances a decomposition (and so counts against the
    /// per-phase step budget).
    pub fn is_decomposition(self) -> bool {
        !matches!(
            self,
            Rule::Select | Rule::Release | Rule::Init2 | Rule::Pol | Rule::Cut | Rule::MemoHit
        )
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A complete proof. Nodes are immutable and shared.
#[derive(Clone, PartialEq, Eq)]
pub struct ProofTree(Arc<ProofNode>);

#[derive(Debug, PartialEq, Eq)]
pub struct ProofNode {
    pub rule: Rule,
    pub conclusion: Sequent,
    pub premises: Vec<ProofTree>,
    /// Inconsistent literal set returned by the theory (Init1, Init2, Pol).
    pub certificate: Option<BTreeSet<Literal>>,
    /// The reused proof of a memo hit.
    pub memo: Option<ProofTree>,
    used: BTreeSet<Formula>,
    size: usize,
}

impl fmt::Debug for ProofTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProofTree")
            .field("rule", &self.0.rule)
            .field("conclusion", &self.0.conclusion.to_string())
            .field("premises", &self.0.premises)
            .finish()
    }
}

impl std::ops::Deref for ProofTree {
    type Target = ProofNode;
    fn deref(&self) -> &ProofNode {
        &self.0
    }
}

impl ProofTree {
    /// Builds a node. No validation happens here; see `proofcheck`.
    pub fn new(
        rule: Rule,
        conclusion: Sequent,
        premises: Vec<ProofTree>,
        certificate: Option<BTreeSet<Literal>>,
        memo: Option<ProofTree>,
    ) -> Self {
        let used = compute_used(rule, &conclusion, &premises, certificate.as_ref(), memo.as_ref());
        let size = 1 + premises.iter().map(|p| p.size).sum::<usize>();
        ProofTree(Arc::new(ProofNode { rule, conclusion, premises, certificate, memo, used, size }))
    }

    pub fn leaf(rule: Rule, conclusion: Sequent, certificate: Option<BTreeSet<Literal>>) -> Self {
        Self::new(rule, conclusion, Vec::new(), certificate, None)
    }

    /// Context formulae the proof actually depends on.
    pub fn used(&self) -> &BTreeSet<Formula> {
        &self.0.used
    }

    /// Number of nodes (memo hits count as one).
    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn ptr_eq(&self, other: &ProofTree) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Rebuilds the proof so that every context holds only what is used,
    /// i.e. eager weakening applied a posteriori.
    pub fn prune(&self) -> ProofTree {
        let gamma = self.used().clone();
        self.rebuild(gamma)
    }

    fn rebuild(&self, gamma: BTreeSet<Formula>) -> ProofTree {
        let conclusion = with_gamma(&self.conclusion, gamma.clone());
        let mut below = gamma;
        if let Some(f) = stored_formula(self) {
            below.insert(f);
        }
        let premises = self.premises.iter().map(|p| p.rebuild(below.clone())).collect();
        ProofTree::new(self.rule, conclusion, premises, self.certificate.clone(), self.memo.clone())
    }

    /// Pre-order traversal.
    pub fn nodes(&self) -> Vec<&ProofTree> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(n) = stack.pop() {
            out.push(n);
            stack.extend(n.premises.iter().rev());
        }
        out
    }
}

/// `¬A` for a Store node on `A, Δ`.
pub(crate) fn stored_formula(node: &ProofNode) -> Option<Formula> {
    match &node.conclusion {
        Sequent::Unfocused { delta, .. } if node.rule == Rule::Store => {
            delta.first().map(Formula::negate)
        }
        _ => None,
    }
}

fn with_gamma(s: &Sequent, gamma: BTreeSet<Formula>) -> Sequent {
    match s {
        Sequent::Unfocused { delta, pol, .. } => {
            Sequent::Unfocused { gamma, delta: delta.clone(), pol: pol.clone() }
        }
        Sequent::Focused { focus, pol, .. } => {
            Sequent::Focused { gamma, focus: focus.clone(), pol: pol.clone() }
        }
    }
}

/// The literal a Pol or Cut node introduces, read off its premises.
pub(crate) fn introduced_literal(rule: Rule, conclusion: &Sequent, premises: &[ProofTree]) -> Option<Literal> {
    match rule {
        Rule::Pol => {
            let prem = premises.first()?;
            prem.conclusion
                .pol()
                .iter()
                .find(|l| !conclusion.pol().contains(l))
                .cloned()
        }
        Rule::Cut => match &premises.first()?.conclusion {
            Sequent::Unfocused { delta, .. } => delta.first()?.as_literal().cloned(),
            _ => None,
        },
        _ => None,
    }
}

fn compute_used(
    rule: Rule,
    conclusion: &Sequent,
    premises: &[ProofTree],
    certificate: Option<&BTreeSet<Literal>>,
    memo: Option<&ProofTree>,
) -> BTreeSet<Formula> {
    let gamma = conclusion.gamma();
    let mut used: BTreeSet<Formula> = BTreeSet::new();
    for p in premises {
        used.extend(p.used().iter().cloned());
    }
    let cert_in_gamma = |used: &mut BTreeSet<Formula>| {
        if let Some(c) = certificate {
            for l in c {
                let f = Formula::Lit(l.clone());
                if gamma.contains(&f) {
                    used.insert(f);
                }
            }
        }
    };
    match rule {
        Rule::Init1 => {
            // `¬l` comes from the focus, not from the context
            if let (Some(c), Sequent::Focused { focus: Formula::Lit(l), .. }) = (certificate, conclusion) {
                let neg = l.negate();
                for m in c {
                    let f = Formula::Lit(m.clone());
                    if *m != neg && gamma.contains(&f) {
                        used.insert(f);
                    }
                }
            }
        }
        Rule::Init2 => cert_in_gamma(&mut used),
        Rule::Store => {
            let node_stored = match conclusion {
                Sequent::Unfocused { delta, .. } if !delta.is_empty() => Some(delta[0].negate()),
                _ => None,
            };
            if let Some(f) = node_stored {
                used.remove(&f);
            }
        }
        Rule::Select => {
            if let Some(Sequent::Focused { focus, .. }) = premises.first().map(|p| &p.conclusion) {
                used.insert(focus.negate());
            }
        }
        Rule::Pol | Rule::Cut => {
            if rule == Rule::Pol {
                if let Some(l) = introduced_literal(rule, conclusion, premises) {
                    if let Some(c) = certificate {
                        let neg = l.negate();
                        for m in c {
                            let f = Formula::Lit(m.clone());
                            if *m != neg && gamma.contains(&f) {
                                used.insert(f);
                            }
                        }
                    }
                }
            }
            if let Some(l) = introduced_literal(rule, conclusion, premises) {
                if !used.iter().any(|f| f.mentions(&l)) {
                    if let Some(w) = gamma.iter().find(|f| f.mentions(&l)) {
                        used.insert(w.clone());
                    }
                }
            }
        }
        Rule::MemoHit => {
            if let Some(m) = memo {
                used.extend(m.conclusion.gamma().iter().cloned());
            }
        }
        _ => {}
    }
    used.retain(|f| gamma.contains(f));
    used
}

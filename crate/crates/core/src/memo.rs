//! Memoisation of kernel answers with subsumption lookup.
//!
//! Provable entries are kept as an antichain under inclusion of their keys,
//! unprovable ones as an antichain under reverse inclusion, so that every
//! stored entry is maximally general.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::formulas::Formula;
use crate::kernel::{Answer, Sequent};

#[derive(Clone, Debug, Default)]
pub struct MemoStore {
    provable: Vec<Answer>,
    not_provable: Vec<Answer>,
    hits: usize,
}

impl MemoStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Stores `answer` unless an entry already covers it; entries it covers
    /// are evicted. Returns whether it was stored.
    pub fn insert(&mut self, answer: Answer) -> bool {
        if !answer.statement().is_developed() {
            return false;
        }
        let key = answer.key().clone();
        if answer.is_provable() {
            if self.provable.iter().any(|a| a.key().is_subset(&key)) {
                return false;
            }
            self.provable.retain(|a| !key.is_subset(a.key()));
            self.provable.push(answer);
        } else {
            if self.not_provable.iter().any(|a| key.is_subset(a.key())) {
                return false;
            }
            self.not_provable.retain(|a| !a.key().is_subset(&key));
            self.not_provable.push(answer);
        }
        true
    }

    /// An answer that applies to the developed sequent `goal`, provable
    /// entries first.
    pub fn lookup(&mut self, goal: &Sequent) -> Option<Answer> {
        let hit = self
            .provable
            .iter()
            .chain(&self.not_provable)
            .find(|a| a.applies_to(goal))
            .cloned();
        if hit.is_some() {
            self.hits += 1;
        }
        hit
    }

    /// Lookup on a bare context.
    pub fn lookup_gamma(&self, gamma: &BTreeSet<Formula>) -> Option<&Answer> {
        self.provable
            .iter()
            .find(|a| a.key().is_subset(gamma))
            .or_else(|| self.not_provable.iter().find(|a| gamma.is_subset(a.key())))
    }

    pub fn len(&self) -> usize {
        self.provable.len() + self.not_provable.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn hits(&self) -> usize {
        self.hits
    }

    pub fn provable_entries(&self) -> &[Answer] {
        &self.provable
    }

    pub fn not_provable_entries(&self) -> &[Answer] {
        &self.not_provable
    }

    /// One entry per line: tag, sorted key, proof size (or `-`).
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for a in self.provable.iter().chain(&self.not_provable) {
            let key: Vec<String> = a.key().iter().map(Formula::to_string).collect();
            let tag = if a.is_provable() { "provable" } else { "notprovable" };
            let size = a.proof().map_or("-".to_string(), |p| p.size().to_string());
            let _ = writeln!(out, "{tag}\t{{{}}}\t{size}", key.join(", "));
        }
        out
    }

    /// The antichain invariants.
    pub fn is_reduced(&self) -> bool {
        let anti = |v: &[Answer]| {
            v.iter().enumerate().all(|(i, a)| {
                v.iter().enumerate().all(|(j, b)| i == j || !a.key().is_subset(b.key()))
            })
        };
        anti(&self.provable) && anti(&self.not_provable)
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::formulas::{Literal, PolarisationSet};
    use crate::kernel::{ProofTree, Rule};

    fn ctx(names: &[&str]) -> BTreeSet<Formula> {
        names.iter().map(|n| Formula::lit(Literal::var(n, true))).collect()
    }

    fn seq(names: &[&str]) -> Sequent {
        let pol = PolarisationSet::from_literals(names.iter().map(|n| Literal::var(n, true))).unwrap();
        Sequent::developed(ctx(names), pol)
    }

    fn proved(names: &[&str]) -> Answer {
        let s = seq(names);
        Answer::provable(s.clone(), ProofTree::leaf(Rule::Init2, s, None))
    }

    fn refuted(names: &[&str]) -> Answer {
        Answer::not_provable(seq(names))
    }

    #[test]
    fn provable_entries_keep_the_smallest_keys() {
        let mut m = MemoStore::new();
        assert!(m.insert(proved(&["a", "b"])));
        assert!(!m.insert(proved(&["a", "b", "c"])));
        assert!(m.insert(proved(&["a"])));
        assert_eq!(m.provable_entries().len(), 1);
        assert_eq!(m.provable_entries()[0].key(), &ctx(&["a"]));
    }

    #[test]
    fn lookup_directions() {
        let mut m = MemoStore::new();
        m.insert(proved(&["a", "b"]));
        assert!(m.lookup(&seq(&["a", "b", "c"])).is_some());
        assert!(m.lookup(&seq(&["a"])).is_none());
        let mut m = MemoStore::new();
        m.insert(refuted(&["a", "b", "c"]));
        assert!(m.lookup(&seq(&["a", "b"])).is_some());
        assert!(m.lookup(&seq(&["a", "d"])).is_none());
        assert_eq!(m.hits(), 1);
        assert!(m.dump().starts_with("notprovable\t{a, b, c}\t-"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn inserts_keep_antichains(ops in prop::collection::vec((any::<bool>(), prop::collection::btree_set(0u8..5, 0..5)), 0..30)) {
            let names = ["a", "b", "c", "d", "e"];
            let mut m = MemoStore::new();
            for (provable, key) in ops {
                let ks: Vec<&str> = key.iter().map(|&i| names[i as usize]).collect();
                m.insert(if provable { proved(&ks) } else { refuted(&ks) });
                prop_assert!(m.is_reduced());
            }
        }
    }
}

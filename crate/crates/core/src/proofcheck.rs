//! Independent validation of finished proofs. Every node is matched against
//! its rule schema and theory certificates are re-verified by calling the
//! decision procedure again.

use std::collections::BTreeSet;
use std::fmt;

use crate::formulas::{Formula, Literal, Polarity};
use crate::kernel::{occurs_in, positive_atoms, Answer, ProofTree, Rule, Sequent};
use crate::theories::DecisionProcedure;

/// The first node that failed, identified by its path of premise indices
/// from the root.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct CheckFailure {
    pub path: Vec<usize>,
    pub rule: Rule,
    pub reason: String,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(usize::to_string).collect();
        write!(f, "{} at /{}: {}", self.rule, path.join("/"), self.reason)
    }
}

/// Checks a whole proof.
pub fn check(proof: &ProofTree, theory: &dyn DecisionProcedure) -> Result<(), CheckFailure> {
    let mut stack = vec![(proof, Vec::new())];
    while let Some((node, path)) = stack.pop() {
        if let Err(reason) = check_node(node, theory) {
            return Err(CheckFailure { path, rule: node.rule, reason });
        }
        for (i, p) in node.premises.iter().enumerate().rev() {
            let mut sub = path.clone();
            sub.push(i);
            stack.push((p, sub));
        }
    }
    Ok(())
}

pub fn is_valid(proof: &ProofTree, theory: &dyn DecisionProcedure) -> bool {
    check(proof, theory).is_ok()
}

/// Checks the proof of a provable answer and that it proves (a weakening
/// of) the answer's statement. Unprovable answers carry nothing to check.
pub fn check_answer(answer: &Answer, theory: &dyn DecisionProcedure) -> Result<(), CheckFailure> {
    let Some(proof) = answer.proof() else { return Ok(()) };
    check(proof, theory)?;
    let fail = |reason: &str| CheckFailure { path: Vec::new(), rule: proof.rule, reason: reason.into() };
    let (c, s) = (&proof.conclusion, answer.statement());
    if !c.gamma().is_subset(s.gamma()) {
        return Err(fail("the proof uses formulae absent from the statement"));
    }
    match (c, s) {
        (Sequent::Unfocused { delta: d1, pol: p1, .. }, Sequent::Unfocused { delta: d2, pol: p2, .. })
            if d1 == d2 && p1 == p2 =>
        {
            Ok(())
        }
        _ => Err(fail("the proof concludes a different sequent")),
    }
}

type Check = Result<(), String>;

fn ensure(cond: bool, why: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

fn arity(node: &ProofTree, n: usize) -> Check {
    ensure(node.premises.len() == n, || {
        format!("expected {n} premise(s), found {}", node.premises.len())
    })
}

fn focused(s: &Sequent) -> Result<&Formula, String> {
    match s {
        Sequent::Focused { focus, .. } => Ok(focus),
        _ => Err(format!("expected a focused sequent, found {s}")),
    }
}

fn unfocused(s: &Sequent) -> Result<&[Formula], String> {
    match s {
        Sequent::Unfocused { delta, .. } => Ok(delta),
        _ => Err(format!("expected an unfocused sequent, found {s}")),
    }
}

fn developed(s: &Sequent) -> Check {
    ensure(s.is_developed(), || format!("expected a developed sequent, found {s}"))
}

fn same_context(c: &Sequent, p: &Sequent) -> Check {
    ensure(c.gamma() == p.gamma(), || "premise context differs from the conclusion's".into())?;
    ensure(c.pol() == p.pol(), || "premise polarisation differs from the conclusion's".into())
}

fn expect_premise(actual: &Sequent, expected: Sequent) -> Check {
    ensure(*actual == expected, || format!("premise should be {expected}, found {actual}"))
}

/// The certificate must be drawn from `allowed` and be theory-inconsistent.
fn certificate(node: &ProofTree, allowed: &BTreeSet<Literal>, theory: &dyn DecisionProcedure) -> Check {
    let cert = node.certificate.as_ref().ok_or("missing theory certificate")?;
    ensure(cert.is_subset(allowed), || "certificate mentions literals outside the side condition".into())?;
    match theory.consistency(cert) {
        Ok(Some(_)) => Ok(()),
        Ok(None) => Err("certificate is theory-consistent".into()),
        Err(e) => Err(format!("theory refused the certificate: {e}")),
    }
}

fn check_node(node: &ProofTree, theory: &dyn DecisionProcedure) -> Check {
    let c = &node.conclusion;
    c.check_context()?;
    if node.rule != Rule::MemoHit {
        ensure(node.memo.is_none(), || "only memo hits embed a proof".into())?;
    }
    let gamma = c.gamma();
    let pol = c.pol();
    let ps: Vec<&Sequent> = node.premises.iter().map(|p| &p.conclusion).collect();
    match node.rule {
        Rule::AndPos | Rule::OrPos1 | Rule::OrPos2 | Rule::TruePos => {
            let focus = focused(c)?;
            let parts: Vec<&Formula> = match (node.rule, focus) {
                (Rule::AndPos, Formula::AndPos(a, b)) => vec![a, b],
                (Rule::OrPos1, Formula::OrPos(a, _)) => vec![a],
                (Rule::OrPos2, Formula::OrPos(_, b)) => vec![b],
                (Rule::TruePos, Formula::TruePos) => vec![],
                _ => return Err(format!("focus {focus} does not match the rule")),
            };
            arity(node, parts.len())?;
            for (p, a) in ps.iter().zip(parts) {
                expect_premise(
                    p,
                    Sequent::Focused { gamma: gamma.clone(), focus: a.clone(), pol: pol.clone() },
                )?;
            }
            Ok(())
        }
        Rule::Init1 => {
            arity(node, 0)?;
            let focus = focused(c)?;
            let l = focus.as_literal().ok_or("Init1 needs a literal under focus")?;
            ensure(pol.contains(l), || format!("{l} is not positive"))?;
            let mut allowed = positive_atoms(gamma, pol);
            allowed.insert(l.negate());
            certificate(node, &allowed, theory)
        }
        Rule::Release => {
            arity(node, 1)?;
            let focus = focused(c)?;
            ensure(focus.classify(pol) != Polarity::PPositive, || {
                format!("{focus} is positive and cannot be released")
            })?;
            expect_premise(
                ps[0],
                Sequent::Unfocused { gamma: gamma.clone(), delta: vec![focus.clone()], pol: pol.clone() },
            )
        }
        Rule::AndNeg | Rule::OrNeg | Rule::FalseNeg | Rule::TrueNeg | Rule::Store => {
            let delta = unfocused(c)?;
            let (first, rest) = delta.split_first().ok_or("nothing to decompose")?;
            let with = |head: &[Formula]| -> Vec<Formula> {
                head.iter().chain(rest).cloned().collect()
            };
            let keep = |d: Vec<Formula>| Sequent::Unfocused { gamma: gamma.clone(), delta: d, pol: pol.clone() };
            let expected: Vec<Sequent> = match (node.rule, first) {
                (Rule::AndNeg, Formula::AndNeg(a, b)) => {
                    vec![keep(with(&[(**a).clone()])), keep(with(&[(**b).clone()]))]
                }
                (Rule::OrNeg, Formula::OrNeg(a, b)) => vec![keep(with(&[(**a).clone(), (**b).clone()]))],
                (Rule::FalseNeg, Formula::FalseNeg) => vec![keep(with(&[]))],
                (Rule::TrueNeg, Formula::TrueNeg) => vec![],
                (Rule::Store, a) if a.is_literal() || a.classify(pol) == Polarity::PPositive => {
                    let stored = a.negate();
                    let mut g = gamma.clone();
                    g.insert(stored.clone());
                    vec![Sequent::Unfocused { gamma: g, delta: with(&[]), pol: pol.polar(&stored) }]
                }
                _ => return Err(format!("{first} does not match the rule")),
            };
            arity(node, expected.len())?;
            for (p, e) in ps.iter().zip(expected) {
                expect_premise(p, e)?;
            }
            Ok(())
        }
        Rule::Select => {
            developed(c)?;
            arity(node, 1)?;
            same_context(c, ps[0])?;
            let focus = focused(ps[0])?;
            ensure(gamma.contains(&focus.negate()), || {
                format!("the negation of {focus} is not in the context")
            })?;
            ensure(focus.classify(pol) != Polarity::PNegative, || {
                format!("{focus} is negative and cannot be selected")
            })
        }
        Rule::Init2 => {
            developed(c)?;
            arity(node, 0)?;
            certificate(node, &positive_atoms(gamma, pol), theory)
        }
        Rule::Pol => {
            developed(c)?;
            arity(node, 1)?;
            developed(ps[0])?;
            ensure(ps[0].gamma() == gamma, || "Pol changes the context".into())?;
            let added: Vec<&Literal> = ps[0].pol().iter().filter(|l| !pol.contains(l)).collect();
            ensure(added.len() == 1 && ps[0].pol().len() == pol.len() + 1, || {
                "Pol must add exactly one literal to the polarisation".into()
            })?;
            let l = added[0];
            ensure(pol.is_unpolarised(l), || format!("{l} is already polarised"))?;
            ensure(occurs_in(l, gamma), || format!("{l} does not occur in the context"))?;
            let mut allowed = positive_atoms(gamma, pol);
            allowed.insert(l.negate());
            certificate(node, &allowed, theory)
        }
        Rule::Cut => {
            developed(c)?;
            arity(node, 2)?;
            let d = unfocused(ps[0])?;
            let l = match d {
                [f] => f.as_literal().ok_or("cut formula must be a literal")?.clone(),
                _ => return Err("left cut premise must have one formula".into()),
            };
            ensure(occurs_in(&l, gamma), || format!("{l} does not occur in the context"))?;
            let side = |f: Literal| Sequent::Unfocused {
                gamma: gamma.clone(),
                delta: vec![Formula::Lit(f)],
                pol: pol.clone(),
            };
            expect_premise(ps[0], side(l.clone()))?;
            expect_premise(ps[1], side(l.negate()))
        }
        Rule::MemoHit => {
            developed(c)?;
            arity(node, 0)?;
            let memo = node.memo.as_ref().ok_or("memo hit without a proof")?;
            developed(&memo.conclusion)?;
            ensure(memo.conclusion.gamma().is_subset(gamma), || {
                "the reused proof needs formulae absent from the context".into()
            })?;
            check(memo, theory).map_err(|f| format!("reused proof: {f}"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::PolarisationSet;
    use crate::theories::EmptyTheory;

    fn top() -> ProofTree {
        ProofTree::leaf(Rule::TrueNeg, Sequent::goal(vec![Formula::TrueNeg]), None)
    }

    #[test]
    fn axiom_checks() {
        assert!(is_valid(&top(), &EmptyTheory));
    }

    #[test]
    fn schema_mismatch_is_reported() {
        let bad = ProofTree::leaf(Rule::TrueNeg, Sequent::goal(vec![Formula::FalseNeg]), None);
        let err = check(&bad, &EmptyTheory).unwrap_err();
        assert_eq!(err.rule, Rule::TrueNeg);
        assert!(err.path.is_empty());
    }

    #[test]
    fn consistent_certificates_are_rejected() {
        let x = Literal::var("x", true);
        let pol = PolarisationSet::from_literals([x.clone()]).unwrap();
        let s = Sequent::developed([Formula::Lit(x.clone())].into(), pol);
        let p = ProofTree::leaf(Rule::Init2, s, Some([x].into()));
        let err = check(&p, &EmptyTheory).unwrap_err();
        assert!(err.reason.contains("consistent"), "{err}");
    }

    #[test]
    fn diagnostics_point_at_the_failing_premise() {
        let wrong = ProofTree::leaf(Rule::FalseNeg, Sequent::goal(vec![Formula::TrueNeg]), None);
        let root = ProofTree::new(
            Rule::FalseNeg,
            Sequent::goal(vec![Formula::FalseNeg, Formula::TrueNeg]),
            vec![wrong],
            None,
            None,
        );
        let err = check(&root, &EmptyTheory).unwrap_err();
        assert_eq!(err.path, vec![0]);
    }
}

//! Bottom-up application of LKThp rules, shared by the kernel and by the
//! bisimulation harness. Phases run until every branch closes, pauses on a
//! developed sequent or a `∨+` under focus, or loses.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};

use super::proof::{ProofTree, Rule};
use super::sequent::{positive_atoms, Sequent};
use crate::formulas::{Formula, Literal, PolarisationSet, Polarity};
use crate::theories::{DecisionProcedure, TheoryError};

/// A proof tree under construction: closed subtrees are nodes without open
/// leaves; `Leaf` marks a hole.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Derivation<L> {
    Node {
        rule: Rule,
        conclusion: Sequent,
        premises: Vec<Derivation<L>>,
        certificate: Option<BTreeSet<Literal>>,
    },
    Leaf(L),
}

impl<L> Derivation<L> {
    pub fn node(rule: Rule, conclusion: Sequent, premises: Vec<Derivation<L>>) -> Self {
        Derivation::Node { rule, conclusion, premises, certificate: None }
    }

    pub fn leaves(&self) -> Vec<&L> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a L>) {
        match self {
            Derivation::Leaf(l) => out.push(l),
            Derivation::Node { premises, .. } => {
                for p in premises {
                    p.collect_leaves(out);
                }
            }
        }
    }

    /// Node count, leaves included.
    pub fn size(&self) -> usize {
        match self {
            Derivation::Leaf(_) => 1,
            Derivation::Node { premises, .. } => 1 + premises.iter().map(Self::size).sum::<usize>(),
        }
    }

    /// Turns the derivation into a proof, filling each hole with `fill`.
    pub fn close(&self, fill: &mut impl FnMut(&L) -> ProofTree) -> ProofTree {
        match self {
            Derivation::Leaf(l) => fill(l),
            Derivation::Node { rule, conclusion, premises, certificate } => {
                let ps = premises.iter().map(|p| p.close(fill)).collect();
                ProofTree::new(*rule, conclusion.clone(), ps, certificate.clone(), None)
            }
        }
    }

    pub fn map_leaves<M>(self, f: &mut impl FnMut(L) -> M) -> Derivation<M> {
        match self {
            Derivation::Leaf(l) => Derivation::Leaf(f(l)),
            Derivation::Node { rule, conclusion, premises, certificate } => Derivation::Node {
                rule,
                conclusion,
                premises: premises.into_iter().map(|p| p.map_leaves(f)).collect(),
                certificate,
            },
        }
    }
}

/// Why a branch of a phase cannot close.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Loss {
    #[error("Init1 on {0}: the context does not entail it")]
    Init1Consistent(Literal),
    #[error("no rule decomposes ⊥+ under focus")]
    FalseUnderFocus,
    #[error("the phase returned to the sequent it started from")]
    NoProgress,
    #[error("Init2: the positive literals are theory-consistent")]
    Init2Consistent,
    #[error("both sides of the disjunction failed")]
    SidesExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stop {
    Lost(Loss),
    Theory(TheoryError),
}

impl From<TheoryError> for Stop {
    fn from(e: TheoryError) -> Self {
        Stop::Theory(e)
    }
}

/// Decides what a hole becomes.
pub trait LeafSink {
    type Leaf;
    fn developed(&mut self, s: Sequent) -> Result<Self::Leaf, Stop>;
    fn disjunction(&mut self, s: Sequent) -> Result<Self::Leaf, Stop>;
}

static PHASES: AtomicUsize = AtomicUsize::new(0);
static MAX_STEPS: AtomicUsize = AtomicUsize::new(0);
static TIGHTEST: AtomicUsize = AtomicUsize::new(usize::MAX);

/// Process-wide counters of the phase step bound instrumentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepStatistics {
    pub phases: usize,
    pub max_steps: usize,
    /// Smallest `budget - steps` seen over all phases.
    pub tightest_margin: usize,
}

pub fn step_statistics() -> StepStatistics {
    StepStatistics {
        phases: PHASES.load(Ordering::Relaxed),
        max_steps: MAX_STEPS.load(Ordering::Relaxed),
        tightest_margin: TIGHTEST.load(Ordering::Relaxed),
    }
}

/// The per-call budget: the summed size of the formulae of the sequent.
pub fn step_bound(s: &Sequent) -> usize {
    s.size()
}

/// Runs one phase. Decomposition steps are counted along each branch; the
/// count must stay within `budget`.
pub struct Engine<'a> {
    pub theory: &'a dyn DecisionProcedure,
    budget: usize,
    max_steps: usize,
}

impl<'a> Engine<'a> {
    pub fn new(theory: &'a dyn DecisionProcedure, budget: usize) -> Self {
        Engine { theory, budget, max_steps: 0 }
    }

    pub fn max_steps(&self) -> usize {
        self.max_steps
    }

    fn tick(&mut self, steps: usize) -> usize {
        let s = steps + 1;
        assert!(
            s <= self.budget,
            "kernel phase exceeded its step bound ({s} > {})",
            self.budget
        );
        self.max_steps = self.max_steps.max(s);
        s
    }

    /// Records the phase in the global statistics.
    pub fn finish(&self) {
        PHASES.fetch_add(1, Ordering::Relaxed);
        MAX_STEPS.fetch_max(self.max_steps, Ordering::Relaxed);
        TIGHTEST.fetch_min(self.budget - self.max_steps, Ordering::Relaxed);
    }

    /// Synchronous decomposition of `Γ ⊢ [focus]`.
    pub fn sync<S: LeafSink>(
        &mut self,
        sink: &mut S,
        gamma: &BTreeSet<Formula>,
        focus: &Formula,
        pol: &PolarisationSet,
        steps: usize,
    ) -> Result<Derivation<S::Leaf>, Stop> {
        let conclusion =
            || Sequent::Focused { gamma: gamma.clone(), focus: focus.clone(), pol: pol.clone() };
        match focus {
            Formula::AndPos(a, b) => {
                let s = self.tick(steps);
                let left = self.sync(sink, gamma, a, pol, s)?;
                let right = self.sync(sink, gamma, b, pol, s)?;
                Ok(Derivation::node(Rule::AndPos, conclusion(), vec![left, right]))
            }
            Formula::OrPos(..) => Ok(Derivation::Leaf(sink.disjunction(conclusion())?)),
            Formula::TruePos => {
                self.tick(steps);
                Ok(Derivation::node(Rule::TruePos, conclusion(), Vec::new()))
            }
            Formula::FalsePos => Err(Stop::Lost(Loss::FalseUnderFocus)),
            Formula::Lit(l) if pol.contains(l) => {
                self.tick(steps);
                let mut lits = positive_atoms(gamma, pol);
                lits.insert(l.negate());
                match self.theory.consistency(&lits)? {
                    Some(cert) => Ok(Derivation::Node {
                        rule: Rule::Init1,
                        conclusion: conclusion(),
                        premises: Vec::new(),
                        certificate: Some(cert),
                    }),
                    None => Err(Stop::Lost(Loss::Init1Consistent(l.clone()))),
                }
            }
            // not P-positive
            _ => {
                let inner = self.asyn(sink, gamma.clone(), vec![focus.clone()], pol.clone(), steps)?;
                Ok(Derivation::node(Rule::Release, conclusion(), vec![inner]))
            }
        }
    }

    /// Asynchronous decomposition of `Γ ⊢ Δ`, always on the first formula.
    pub fn asyn<S: LeafSink>(
        &mut self,
        sink: &mut S,
        gamma: BTreeSet<Formula>,
        delta: Vec<Formula>,
        pol: PolarisationSet,
        steps: usize,
    ) -> Result<Derivation<S::Leaf>, Stop> {
        let Some(first) = delta.first().cloned() else {
            return Ok(Derivation::Leaf(sink.developed(Sequent::developed(gamma, pol))?));
        };
        let rest = &delta[1..];
        let s = self.tick(steps);
        let with = |head: &[Formula]| -> Vec<Formula> {
            head.iter().cloned().chain(rest.iter().cloned()).collect()
        };
        let conclusion = Sequent::Unfocused { gamma: gamma.clone(), delta: delta.clone(), pol: pol.clone() };
        match &first {
            Formula::AndNeg(a, b) => {
                let left = self.asyn(sink, gamma.clone(), with(&[(**a).clone()]), pol.clone(), s)?;
                let right = self.asyn(sink, gamma, with(&[(**b).clone()]), pol, s)?;
                Ok(Derivation::node(Rule::AndNeg, conclusion, vec![left, right]))
            }
            Formula::OrNeg(a, b) => {
                let prem = self.asyn(sink, gamma, with(&[(**a).clone(), (**b).clone()]), pol, s)?;
                Ok(Derivation::node(Rule::OrNeg, conclusion, vec![prem]))
            }
            Formula::FalseNeg => {
                let prem = self.asyn(sink, gamma, with(&[]), pol, s)?;
                Ok(Derivation::node(Rule::FalseNeg, conclusion, vec![prem]))
            }
            Formula::TrueNeg => Ok(Derivation::node(Rule::TrueNeg, conclusion, Vec::new())),
            // a literal or a P-positive formula
            a => {
                debug_assert!(a.is_literal() || a.classify(&pol) == Polarity::PPositive);
                let stored = a.negate();
                let new_pol = pol.polar(&stored);
                let mut g = gamma;
                g.insert(stored);
                let prem = self.asyn(sink, g, with(&[]), new_pol, s)?;
                Ok(Derivation::node(Rule::Store, conclusion, vec![prem]))
            }
        }
    }

    /// `Select` on the context formula `negated` (focusing on its negation).
    pub fn select<S: LeafSink>(
        &mut self,
        sink: &mut S,
        goal: &Sequent,
        negated: &Formula,
    ) -> Result<Derivation<S::Leaf>, Stop> {
        let focus = negated.negate();
        let prem = self.sync(sink, goal.gamma(), &focus, goal.pol(), 0)?;
        Ok(Derivation::node(Rule::Select, goal.clone(), vec![prem]))
    }

    /// `∨+` on the focused goal, choosing side `side` (1 or 2).
    pub fn side<S: LeafSink>(
        &mut self,
        sink: &mut S,
        goal: &Sequent,
        side: u8,
    ) -> Result<Derivation<S::Leaf>, Stop> {
        let Sequent::Focused { gamma, focus: Formula::OrPos(a, b), pol } = goal else {
            panic!("side choice on a sequent not focused on a positive disjunction");
        };
        let s = self.tick(0);
        let (chosen, rule) = if side == 1 { (a, Rule::OrPos1) } else { (b, Rule::OrPos2) };
        let prem = self.sync(sink, gamma, chosen, pol, s)?;
        Ok(Derivation::node(rule, goal.clone(), vec![prem]))
    }

    /// `Init2` on a developed goal.
    pub fn init2<L>(&mut self, goal: &Sequent) -> Result<Derivation<L>, Stop> {
        match self.theory.consistency(&goal.positive_atoms())? {
            Some(cert) => Ok(Derivation::Node {
                rule: Rule::Init2,
                conclusion: goal.clone(),
                premises: Vec::new(),
                certificate: Some(cert),
            }),
            None => Err(Stop::Lost(Loss::Init2Consistent)),
        }
    }

    /// The theory certificate for `Pol` on `l`, if its side condition holds.
    pub fn pol_certificate(
        &self,
        goal: &Sequent,
        l: &Literal,
    ) -> Result<Option<BTreeSet<Literal>>, TheoryError> {
        let mut lits = goal.positive_atoms();
        lits.insert(l.negate());
        self.theory.consistency(&lits)
    }

    /// `Pol` on `l`, given its certificate; the premise is a hole.
    pub fn pol<S: LeafSink>(
        &mut self,
        sink: &mut S,
        goal: &Sequent,
        l: &Literal,
        certificate: BTreeSet<Literal>,
    ) -> Result<Derivation<S::Leaf>, Stop> {
        let mut pol = goal.pol().clone();
        pol.insert(l.clone()).expect("Pol on an unpolarised literal");
        let prem = sink.developed(Sequent::developed(goal.gamma().clone(), pol))?;
        Ok(Derivation::Node {
            rule: Rule::Pol,
            conclusion: goal.clone(),
            premises: vec![Derivation::Leaf(prem)],
            certificate: Some(certificate),
        })
    }

    /// `cut` on `l`: premises `Γ ⊢ l` then `Γ ⊢ ¬l`.
    pub fn cut<S: LeafSink>(
        &mut self,
        sink: &mut S,
        goal: &Sequent,
        l: &Literal,
    ) -> Result<Derivation<S::Leaf>, Stop> {
        let g = goal.gamma();
        let p = goal.pol();
        let left = self.asyn(sink, g.clone(), vec![Formula::Lit(l.clone())], p.clone(), 0)?;
        let right = self.asyn(sink, g.clone(), vec![Formula::Lit(l.negate())], p.clone(), 0)?;
        Ok(Derivation::node(Rule::Cut, goal.clone(), vec![left, right]))
    }
}

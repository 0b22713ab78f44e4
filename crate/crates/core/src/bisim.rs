//! Executable bisimulation between elementary DPLL(T) runs and incomplete
//! LKThp proof trees.
//!
//! An incomplete tree is a [`Derivation`] whose holes carry the developed
//! sequent of an open leaf.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::dpll_oracle::{self, DpllError, DpllState, Strategy, Transition};
use crate::formulas::{atoms_of, clause_set_size, Clause, Formula, Literal, PolarisationSet};
use crate::kernel::{step_bound, Derivation, Engine, LeafSink, Loss, ProofTree, Rule, Sequent, Stop};
use crate::theories::{n_sat, DecisionProcedure, TheoryError};

pub type IncompleteProofTree = Derivation<Sequent>;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BisimError {
    #[error("the tree has no open leaf")]
    NoOpenLeaf,
    #[error("transition does not apply: {0}")]
    Transition(#[from] DpllError),
    #[error("the extension of the leftmost leaf failed: {0}")]
    Lost(Loss),
    #[error("the tree does not correspond to the state: {0}")]
    Correspondence(String),
    #[error("extension grew the tree by {delta} nodes, more than {bound}")]
    TooLarge { delta: usize, bound: usize },
    #[error(transparent)]
    Theory(#[from] TheoryError),
}

/// Why a tree is not a DPLL(T)-extension of another.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExtensionError {
    #[error("the original tree has no open leaf")]
    NoOpenLeaf,
    #[error("clause 1: the trees differ outside the leftmost open leaf")]
    NotLeftmost,
    #[error("clause 2: the extension goes beyond a single transition")]
    NotMinimal,
    #[error("shape: {0}")]
    Shape(String),
    #[error(transparent)]
    Theory(#[from] TheoryError),
}

/// The one-node tree `φ' ⊢` for the initial state `∅ ∥ φ`.
pub fn initial_tree<'a>(phi: impl IntoIterator<Item = &'a Clause>) -> IncompleteProofTree {
    Derivation::Leaf(clause_sequent(phi))
}

/// `φ' ⊢` with an empty polarisation.
pub fn clause_sequent<'a>(phi: impl IntoIterator<Item = &'a Clause>) -> Sequent {
    Sequent::developed(phi.into_iter().map(Clause::represent).collect(), PolarisationSet::new())
}

pub fn open_leaves(tree: &IncompleteProofTree) -> Vec<&Sequent> {
    tree.leaves()
}

/// Checks the correspondence between a tree and a state, explaining the
/// first mismatch.
pub fn correspondence(
    tree: &IncompleteProofTree,
    state: &DpllState,
    dp: &dyn DecisionProcedure,
) -> Result<(), String> {
    let leaves = tree.leaves();
    let DpllState::Pair { delta, phi } = state else {
        return if leaves.is_empty() {
            Ok(())
        } else {
            Err(format!("{} open leaves remain for the unsat state", leaves.len()))
        };
    };
    let mut expected = vec![delta.iter().map(|t| t.literal.clone()).collect::<BTreeSet<_>>()];
    expected.extend(dpll_oracle::backtrack_points(delta));
    if expected.len() != leaves.len() {
        return Err(format!("{} open leaves for {} expected", leaves.len(), expected.len()));
    }
    let represented: BTreeSet<Formula> = phi.iter().map(Clause::represent).collect();
    let atoms = atoms_of(phi);
    for (i, (leaf, delta_i)) in leaves.iter().zip(&expected).enumerate() {
        if !leaf.is_developed() {
            return Err(format!("open leaf {i} is not developed"));
        }
        let (lits, rest): (BTreeSet<&Formula>, BTreeSet<&Formula>) =
            leaf.gamma().iter().partition(|f| f.is_literal());
        if rest != represented.iter().collect() {
            return Err(format!("open leaf {i} does not represent φ"));
        }
        if leaf.pol().literals() != delta_i {
            return Err(format!("open leaf {i} is not polarised by its assignment"));
        }
        let lits: BTreeSet<Literal> = lits.into_iter().filter_map(|f| f.as_literal().cloned()).collect();
        let lhs = n_sat(dp, &atoms, delta_i).map_err(|e| e.to_string())?;
        let rhs = n_sat(dp, &atoms, &lits).map_err(|e| e.to_string())?;
        if lhs != rhs {
            return Err(format!("open leaf {i} entails different literals of φ"));
        }
    }
    Ok(())
}

pub fn corresponds(tree: &IncompleteProofTree, state: &DpllState, dp: &dyn DecisionProcedure) -> bool {
    correspondence(tree, state, dp).is_ok()
}

/// Every hole becomes an open leaf; the clause encoding never focuses on a
/// positive disjunction.
struct OpenLeaves;

impl LeafSink for OpenLeaves {
    type Leaf = Sequent;

    fn developed(&mut self, s: Sequent) -> Result<Sequent, Stop> {
        Ok(s)
    }

    fn disjunction(&mut self, s: Sequent) -> Result<Sequent, Stop> {
        panic!("clause representations have no positive disjunction: {s}")
    }
}

/// The subtree a transition puts in place of the open leaf `leaf`.
fn extend_leaf(
    leaf: &Sequent,
    t: &Transition,
    dp: &dyn DecisionProcedure,
) -> Result<IncompleteProofTree, BisimError> {
    let mut engine = Engine::new(dp, step_bound(leaf));
    let stop = |s: Stop| match s {
        Stop::Lost(l) => BisimError::Lost(l),
        Stop::Theory(e) => BisimError::Theory(e),
    };
    let result = match t {
        Transition::Decide(l) => engine.cut(&mut OpenLeaves, leaf, &l.negate()),
        Transition::Propagate { clause, .. } | Transition::Fail(clause) | Transition::Backtrack(clause) => {
            engine.select(&mut OpenLeaves, leaf, &clause.represent())
        }
        Transition::PropagateT(l) => match engine.pol_certificate(leaf, l)? {
            Some(cert) => engine.pol(&mut OpenLeaves, leaf, l, cert),
            None => return Err(BisimError::Correspondence(format!("the leaf does not entail {l}"))),
        },
        Transition::FailT | Transition::BacktrackT => engine.init2(leaf),
    };
    engine.finish();
    result.map_err(stop)
}

/// Replaces the leftmost open leaf with `f(leaf)`.
fn replace_leftmost<E>(
    tree: &IncompleteProofTree,
    f: &mut impl FnMut(&Sequent) -> Result<IncompleteProofTree, E>,
) -> Option<Result<IncompleteProofTree, E>> {
    match tree {
        Derivation::Leaf(s) => Some(f(s)),
        Derivation::Node { rule, conclusion, premises, certificate } => {
            for (i, p) in premises.iter().enumerate() {
                if let Some(r) = replace_leftmost(p, f) {
                    return Some(r.map(|sub| {
                        let mut ps = premises.clone();
                        ps[i] = sub;
                        Derivation::Node {
                            rule: *rule,
                            conclusion: conclusion.clone(),
                            premises: ps,
                            certificate: certificate.clone(),
                        }
                    }));
                }
            }
            None
        }
    }
}

/// Extends the leftmost open leaf by the rule pattern of `t`. The
/// transition must apply to `state`, and the resulting tree is checked to
/// correspond to the successor state.
pub fn simulate_step(
    tree: &IncompleteProofTree,
    state: &DpllState,
    t: &Transition,
    dp: &dyn DecisionProcedure,
) -> Result<(IncompleteProofTree, DpllState), BisimError> {
    correspondence(tree, state, dp).map_err(BisimError::Correspondence)?;
    let next = dpll_oracle::apply(state, t, dp)?;
    let grown = replace_leftmost(tree, &mut |leaf| extend_leaf(leaf, t, dp)).ok_or(BisimError::NoOpenLeaf)??;
    correspondence(&grown, &next, dp).map_err(BisimError::Correspondence)?;
    Ok((grown, next))
}

/// The bound on the growth of one step, `2‖φ‖ + 3`.
pub fn size_bound<'a>(phi: impl IntoIterator<Item = &'a Clause>) -> usize {
    2 * clause_set_size(phi) + 3
}

fn erase_certificates(t: &IncompleteProofTree) -> IncompleteProofTree {
    match t {
        Derivation::Leaf(s) => Derivation::Leaf(s.clone()),
        Derivation::Node { rule, conclusion, premises, .. } => Derivation::Node {
            rule: *rule,
            conclusion: conclusion.clone(),
            premises: premises.iter().map(erase_certificates).collect(),
            certificate: None,
        },
    }
}

/// `big` is `small` with some open leaves developed further.
fn grows(small: &IncompleteProofTree, big: &IncompleteProofTree) -> bool {
    match (small, big) {
        (Derivation::Leaf(s), Derivation::Leaf(b)) => s == b,
        (Derivation::Leaf(s), Derivation::Node { conclusion, .. }) => s == conclusion,
        (
            Derivation::Node { rule: r1, conclusion: c1, premises: p1, .. },
            Derivation::Node { rule: r2, conclusion: c2, premises: p2, .. },
        ) => r1 == r2 && c1 == c2 && p1.len() == p2.len() && p1.iter().zip(p2).all(|(a, b)| grows(a, b)),
        _ => false,
    }
}

/// Splits `big` along the leftmost open leaf of `small`: returns the
/// subtree of `big` at that position, or `None` if they differ elsewhere.
fn at_leftmost<'a>(small: &IncompleteProofTree, big: &'a IncompleteProofTree) -> Option<&'a IncompleteProofTree> {
    fn walk<'a>(
        small: &IncompleteProofTree,
        big: &'a IncompleteProofTree,
        found: &mut Option<&'a IncompleteProofTree>,
    ) -> bool {
        match (small, big) {
            (Derivation::Leaf(_), _) if found.is_none() => {
                *found = Some(big);
                true
            }
            (Derivation::Leaf(a), Derivation::Leaf(b)) => a == b,
            (
                Derivation::Node { rule: r1, conclusion: c1, premises: p1, certificate: k1 },
                Derivation::Node { rule: r2, conclusion: c2, premises: p2, certificate: k2 },
            ) => {
                r1 == r2
                    && c1 == c2
                    && k1 == k2
                    && p1.len() == p2.len()
                    && p1.iter().zip(p2).all(|(a, b)| walk(a, b, found))
            }
            _ => false,
        }
    }
    let mut found = None;
    if walk(small, big, &mut found) {
        found
    } else {
        None
    }
}

/// Recovers the transition that `after` simulates from `before`.
pub fn classify_extension(
    before: &IncompleteProofTree,
    after: &IncompleteProofTree,
    dp: &dyn DecisionProcedure,
) -> Result<Transition, ExtensionError> {
    let leaves = before.leaves();
    let leaf = *leaves.first().ok_or(ExtensionError::NoOpenLeaf)?;
    let sub = at_leftmost(before, after).ok_or(ExtensionError::NotLeftmost)?;
    let shape = |why: &str| ExtensionError::Shape(why.to_string());
    let Derivation::Node { rule, conclusion, premises, .. } = sub else {
        return Err(shape("the leftmost open leaf was not extended"));
    };
    if conclusion != leaf {
        return Err(shape("the extension does not start from the leaf"));
    }
    let pol = leaf.pol();
    let t = match rule {
        Rule::Init2 => {
            if leaves.len() > 1 {
                Transition::BacktrackT
            } else {
                Transition::FailT
            }
        }
        Rule::Pol => {
            let Some(Derivation::Node { conclusion: p, .. } | Derivation::Leaf(p)) = premises.first() else {
                return Err(shape("Pol without premise"));
            };
            let added: Vec<&Literal> = p.pol().iter().filter(|l| !pol.contains(l)).collect();
            match added.as_slice() {
                [l] => Transition::PropagateT((*l).clone()),
                _ => return Err(shape("Pol must polarise exactly one literal")),
            }
        }
        Rule::Cut => {
            let first = match premises.first() {
                Some(Derivation::Node { conclusion, .. } | Derivation::Leaf(conclusion)) => conclusion,
                None => return Err(shape("cut without premises")),
            };
            let Sequent::Unfocused { delta, .. } = first else { return Err(shape("cut premise is focused")) };
            match delta.as_slice() {
                [f] => match f.as_literal() {
                    Some(l) => Transition::Decide(l.negate()),
                    None => return Err(shape("cut formula is not a literal")),
                },
                _ => return Err(shape("cut premise must hold one formula")),
            }
        }
        Rule::Select => {
            let focus = match premises.first() {
                Some(Derivation::Node { conclusion: Sequent::Focused { focus, .. }, .. }) => focus,
                _ => return Err(shape("Select must focus")),
            };
            let clause = Clause::from_representation(&focus.negate())
                .ok_or_else(|| shape("the selected formula does not represent a clause"))?;
            let free: Vec<&Literal> = clause.iter().filter(|l| !pol.contains(&l.negate())).collect();
            match free.as_slice() {
                [] if leaves.len() > 1 => Transition::Backtrack(clause),
                [] => Transition::Fail(clause),
                [l] if pol.is_unpolarised(l) => {
                    Transition::Propagate { clause: clause.clone(), literal: (*l).clone() }
                }
                _ => return Err(shape("the focused conjunction has more than one literal outside 𝒫")),
            }
        }
        other => return Err(ExtensionError::Shape(format!("no extension starts with {other}"))),
    };
    let canonical = match extend_leaf(leaf, &t, dp) {
        Ok(c) => c,
        Err(BisimError::Theory(e)) => return Err(e.into()),
        Err(e) => return Err(ExtensionError::Shape(format!("{t} does not extend the leaf: {e}"))),
    };
    let (canonical, sub) = (erase_certificates(&canonical), erase_certificates(sub));
    if canonical == sub {
        Ok(t)
    } else if grows(&canonical, &sub) {
        Err(ExtensionError::NotMinimal)
    } else {
        Err(ExtensionError::Shape(format!("the extension is not the one of {t}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub transition: String,
    pub size_delta: usize,
}

/// A lockstep run of the oracle and of the simulation.
#[derive(Clone, Debug)]
pub struct SimulatedRun {
    pub states: Vec<DpllState>,
    pub trees: Vec<IncompleteProofTree>,
    pub transitions: Vec<Transition>,
    pub trace: Vec<TraceStep>,
    pub bound: usize,
}

impl SimulatedRun {
    pub fn final_tree(&self) -> &IncompleteProofTree {
        self.trees.last().expect("a run has an initial tree")
    }

    /// The complete proof, if the run reached unsat.
    pub fn proof(&self) -> Option<ProofTree> {
        let t = self.final_tree();
        t.leaves().is_empty().then(|| t.close(&mut |_| unreachable!()))
    }

    pub fn trace_json(&self) -> String {
        serde_json::to_string_pretty(&self.trace).expect("trace serialises")
    }
}

/// Runs the oracle under `strategy` and simulates every transition,
/// checking correspondence and the size bound along the way.
pub fn simulate_run(
    phi: &BTreeSet<Clause>,
    dp: &dyn DecisionProcedure,
    strategy: &mut dyn Strategy,
    step_limit: usize,
) -> Result<SimulatedRun, BisimError> {
    let bound = size_bound(phi);
    let mut run = SimulatedRun {
        states: vec![DpllState::initial(phi.iter().cloned())],
        trees: vec![initial_tree(phi)],
        transitions: Vec::new(),
        trace: Vec::new(),
        bound,
    };
    for _ in 0..step_limit {
        let state = run.states.last().unwrap();
        if state.is_unsat() {
            break;
        }
        let legal = dpll_oracle::legal_transitions(state, dp)?;
        let Some(t) = strategy.choose(state, &legal) else { break };
        let tree = run.trees.last().unwrap();
        let (grown, next) = simulate_step(tree, state, &t, dp)?;
        let delta = grown.size() - tree.size();
        if delta > bound {
            return Err(BisimError::TooLarge { delta, bound });
        }
        run.trace.push(TraceStep { transition: t.to_string(), size_delta: delta });
        run.transitions.push(t);
        run.states.push(next);
        run.trees.push(grown);
    }
    Ok(run)
}

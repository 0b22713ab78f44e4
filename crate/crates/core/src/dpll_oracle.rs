//! The elementary DPLL(T) transition system, kept deliberately naive so it
//! can serve as an oracle for the kernel simulation.

use std::collections::BTreeSet;
use std::fmt;

use crate::formulas::{atoms_of, Clause, Literal};
use crate::theories::{m_sat_member, DecisionProcedure, TheoryError};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaggedLiteral {
    pub literal: Literal,
    pub decision: bool,
}

impl TaggedLiteral {
    pub fn plain(literal: Literal) -> Self {
        TaggedLiteral { literal, decision: false }
    }

    pub fn decided(literal: Literal) -> Self {
        TaggedLiteral { literal, decision: true }
    }
}

impl fmt::Display for TaggedLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.decision {
            write!(f, "{}^d", self.literal)
        } else {
            write!(f, "{}", self.literal)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DpllState {
    Unsat,
    Pair { delta: Vec<TaggedLiteral>, phi: BTreeSet<Clause> },
}

impl DpllState {
    pub fn initial(phi: impl IntoIterator<Item = Clause>) -> Self {
        DpllState::Pair { delta: Vec::new(), phi: phi.into_iter().collect() }
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, DpllState::Unsat)
    }

    pub fn delta(&self) -> Option<&[TaggedLiteral]> {
        match self {
            DpllState::Pair { delta, .. } => Some(delta),
            DpllState::Unsat => None,
        }
    }

    pub fn phi(&self) -> Option<&BTreeSet<Clause>> {
        match self {
            DpllState::Pair { phi, .. } => Some(phi),
            DpllState::Unsat => None,
        }
    }
}

impl fmt::Display for DpllState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DpllState::Unsat => write!(f, "unsat"),
            DpllState::Pair { delta, phi } => {
                let d: Vec<String> = delta.iter().map(|t| t.to_string()).collect();
                write!(f, "{} ∥ {}", if d.is_empty() { "∅".into() } else { d.join(", ") }, phi.len())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Transition {
    Decide(Literal),
    /// The full clause `C ∨ l` and the propagated literal `l`.
    Propagate { clause: Clause, literal: Literal },
    PropagateT(Literal),
    Fail(Clause),
    FailT,
    Backtrack(Clause),
    BacktrackT,
}

impl Transition {
    pub fn name(&self) -> &'static str {
        match self {
            Transition::Decide(_) => "Decide",
            Transition::Propagate { .. } => "Propagate",
            Transition::PropagateT(_) => "PropagateT",
            Transition::Fail(_) => "Fail",
            Transition::FailT => "FailT",
            Transition::Backtrack(_) => "Backtrack",
            Transition::BacktrackT => "BacktrackT",
        }
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transition::Decide(l) | Transition::PropagateT(l) => write!(f, "{} {l}", self.name()),
            Transition::Propagate { clause, literal } => write!(f, "Propagate {literal} from {clause}"),
            Transition::Fail(c) | Transition::Backtrack(c) => write!(f, "{} {c}", self.name()),
            Transition::FailT | Transition::BacktrackT => f.write_str(self.name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DpllError {
    #[error("{rule} rejected: {condition}")]
    SideCondition { rule: &'static str, condition: String },
    #[error("no transition leaves the unsat state")]
    Finished,
    #[error("step limit of {0} transitions exceeded")]
    StepLimit(usize),
    #[error(transparent)]
    Theory(#[from] TheoryError),
}

fn literals(delta: &[TaggedLiteral]) -> BTreeSet<Literal> {
    delta.iter().map(|t| t.literal.clone()).collect()
}

fn assigned(set: &BTreeSet<Literal>, l: &Literal) -> bool {
    set.contains(l) || set.contains(&l.negate())
}

/// `Δ ⊨ ¬C`, read literal-wise.
fn falsifies(set: &BTreeSet<Literal>, c: &Clause) -> bool {
    c.iter().all(|l| set.contains(&l.negate()))
}

fn last_decision(delta: &[TaggedLiteral]) -> Option<usize> {
    delta.iter().rposition(|t| t.decision)
}

/// `Δ1, ¬l` for the last decision `l` of `Δ1, l^d, Δ2`.
fn backtracked(delta: &[TaggedLiteral], at: usize) -> Vec<TaggedLiteral> {
    let mut out = delta[..at].to_vec();
    out.push(TaggedLiteral::plain(delta[at].literal.negate()));
    out
}

/// Applies one transition, checking every side condition.
pub fn apply(
    state: &DpllState,
    t: &Transition,
    dp: &dyn DecisionProcedure,
) -> Result<DpllState, DpllError> {
    let DpllState::Pair { delta, phi } = state else { return Err(DpllError::Finished) };
    let rule = t.name();
    let reject = |condition: &str| Err(DpllError::SideCondition { rule, condition: condition.into() });
    let set = literals(delta);
    let extend = |l: &Literal, decision: bool| {
        let mut d = delta.clone();
        d.push(TaggedLiteral { literal: l.clone(), decision });
        DpllState::Pair { delta: d, phi: phi.clone() }
    };
    match t {
        Transition::Decide(l) => {
            if !atoms_of(phi).contains(l) {
                return reject("the literal does not occur in φ");
            }
            if assigned(&set, l) {
                return reject("the literal is already assigned");
            }
            Ok(extend(l, true))
        }
        Transition::Propagate { clause, literal } => {
            if !phi.contains(clause) || !clause.contains(literal) {
                return reject("not a clause C ∨ l of φ");
            }
            let rest = Clause::new(clause.iter().filter(|m| *m != literal).cloned());
            if !falsifies(&set, &rest) {
                return reject("Δ does not falsify C");
            }
            if assigned(&set, literal) {
                return reject("the literal is already assigned");
            }
            Ok(extend(literal, false))
        }
        Transition::PropagateT(l) => {
            if !atoms_of(phi).contains(l) {
                return reject("the literal does not occur in φ");
            }
            if assigned(&set, l) {
                return reject("the literal is already assigned");
            }
            if !m_sat_member(dp, &set, l)? {
                return reject("Δ does not entail the literal in the theory");
            }
            Ok(extend(l, false))
        }
        Transition::Fail(c) | Transition::Backtrack(c) => {
            if !phi.contains(c) {
                return reject("the clause is not in φ");
            }
            if !falsifies(&set, c) {
                return reject("Δ does not falsify the clause");
            }
            match (t, last_decision(delta)) {
                (Transition::Fail(_), None) => Ok(DpllState::Unsat),
                (Transition::Backtrack(_), Some(at)) => {
                    Ok(DpllState::Pair { delta: backtracked(delta, at), phi: phi.clone() })
                }
                (Transition::Fail(_), Some(_)) => reject("Δ contains a decision literal"),
                _ => reject("Δ contains no decision literal"),
            }
        }
        Transition::FailT | Transition::BacktrackT => {
            if dp.consistency(&set)?.is_none() {
                return reject("Δ is theory-consistent");
            }
            match (t, last_decision(delta)) {
                (Transition::FailT, None) => Ok(DpllState::Unsat),
                (Transition::BacktrackT, Some(at)) => {
                    Ok(DpllState::Pair { delta: backtracked(delta, at), phi: phi.clone() })
                }
                (Transition::FailT, Some(_)) => reject("Δ contains a decision literal"),
                _ => reject("Δ contains no decision literal"),
            }
        }
    }
}

/// Every applicable transition, grouped as conflicts, theory conflicts,
/// propagations, theory propagations, then decisions.
pub fn legal_transitions(
    state: &DpllState,
    dp: &dyn DecisionProcedure,
) -> Result<Vec<Transition>, DpllError> {
    let DpllState::Pair { delta, phi } = state else { return Err(DpllError::Finished) };
    let set = literals(delta);
    let decided = last_decision(delta).is_some();
    let mut out = Vec::new();
    for c in phi {
        if falsifies(&set, c) {
            out.push(if decided { Transition::Backtrack(c.clone()) } else { Transition::Fail(c.clone()) });
        }
    }
    if dp.consistency(&set)?.is_some() {
        out.push(if decided { Transition::BacktrackT } else { Transition::FailT });
    }
    for c in phi {
        for l in c.iter().filter(|l| !assigned(&set, l)) {
            if c.iter().filter(|m| *m != l).all(|m| set.contains(&m.negate())) {
                out.push(Transition::Propagate { clause: c.clone(), literal: l.clone() });
            }
        }
    }
    let atoms = atoms_of(phi);
    for l in atoms.iter().filter(|l| !assigned(&set, l)) {
        if m_sat_member(dp, &set, l)? {
            out.push(Transition::PropagateT(l.clone()));
        }
    }
    for l in atoms.iter().filter(|l| !assigned(&set, l)) {
        out.push(Transition::Decide(l.clone()));
    }
    Ok(out)
}

/// The backtrack points `⌊Δ⌋`, innermost first.
pub fn backtrack_points(delta: &[TaggedLiteral]) -> Vec<BTreeSet<Literal>> {
    let mut out = Vec::new();
    for (i, t) in delta.iter().enumerate() {
        if t.decision {
            let mut point = literals(&delta[..i]);
            point.insert(t.literal.negate());
            out.push(point);
        }
    }
    out.reverse();
    out
}

/// Chooses the next transition among the legal ones.
pub trait Strategy {
    fn choose(&mut self, state: &DpllState, legal: &[Transition]) -> Option<Transition>;
}

impl<F> Strategy for F
where
    F: FnMut(&DpllState, &[Transition]) -> Option<Transition>,
{
    fn choose(&mut self, state: &DpllState, legal: &[Transition]) -> Option<Transition> {
        self(state, legal)
    }
}

/// The first legal transition: conflicts, then propagation, then decisions.
#[derive(Clone, Copy, Debug, Default)]
pub struct Eager;

impl Strategy for Eager {
    fn choose(&mut self, _: &DpllState, legal: &[Transition]) -> Option<Transition> {
        legal.first().cloned()
    }
}

/// Replays a fixed list of transitions and stops when it runs out.
#[derive(Clone, Debug)]
pub struct Scripted(pub std::collections::VecDeque<Transition>);

impl Scripted {
    pub fn new(ts: impl IntoIterator<Item = Transition>) -> Self {
        Scripted(ts.into_iter().collect())
    }
}

impl Strategy for Scripted {
    fn choose(&mut self, _: &DpllState, _: &[Transition]) -> Option<Transition> {
        self.0.pop_front()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunOutcome {
    Unsat,
    /// No transition applies; the assignment is theory-consistent and total.
    Saturated(Vec<TaggedLiteral>),
    /// The strategy stopped before the system did.
    Stopped(DpllState),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub transition: Transition,
    pub after: DpllState,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {}", self.transition, self.after)
    }
}

#[derive(Clone, Debug)]
pub struct Run {
    pub outcome: RunOutcome,
    pub steps: Vec<Step>,
}

impl Run {
    /// One line per transition.
    pub fn trace(&self) -> String {
        self.steps.iter().map(|s| format!("{s}\n")).collect()
    }
}

/// Runs the system from `∅ ∥ φ`. A chosen transition that does not apply is
/// an error.
pub fn run(
    phi: impl IntoIterator<Item = Clause>,
    dp: &dyn DecisionProcedure,
    strategy: &mut dyn Strategy,
    step_limit: usize,
) -> Result<Run, DpllError> {
    let mut state = DpllState::initial(phi);
    let mut steps = Vec::new();
    loop {
        if state.is_unsat() {
            return Ok(Run { outcome: RunOutcome::Unsat, steps });
        }
        let legal = legal_transitions(&state, dp)?;
        if legal.is_empty() {
            let DpllState::Pair { delta, .. } = state else { unreachable!() };
            return Ok(Run { outcome: RunOutcome::Saturated(delta), steps });
        }
        let Some(t) = strategy.choose(&state, &legal) else {
            return Ok(Run { outcome: RunOutcome::Stopped(state), steps });
        };
        if steps.len() == step_limit {
            return Err(DpllError::StepLimit(step_limit));
        }
        state = apply(&state, &t, dp)?;
        steps.push(Step { transition: t, after: state.clone() });
    }
}

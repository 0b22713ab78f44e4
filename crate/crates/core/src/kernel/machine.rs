//! The slot machine: a resumable search state that pauses whenever a choice
//! is needed and resumes when a coin is inserted.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::answer::Answer;
use super::proof::{ProofTree, Rule};
use super::rules::{step_bound, Derivation, Engine, LeafSink, Loss, Stop};
use super::sequent::{occurs_in, Sequent};
use crate::formulas::{Formula, Literal, Polarity};
use crate::theories::{Theory, TheoryError};

/// Kernel parameters fixed for a whole search.
#[derive(Clone, Debug)]
pub struct KernelConfig {
    pub theory: Theory,
    pub allow_cuts: bool,
}

impl KernelConfig {
    pub fn new(theory: Theory) -> Self {
        KernelConfig { theory, allow_cuts: true }
    }

    pub fn with_cuts(mut self, allow: bool) -> Self {
        self.allow_cuts = allow;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BranchKind {
    /// Another open goal of the current tree.
    Success,
    /// Another alternative of a goal whose current alternative is in progress.
    Failure,
}

/// A plugin instruction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coin {
    /// Select the context formula at this index (canonical order) and focus
    /// on its negation.
    Focus(usize),
    Side(u8),
    Polarise(Literal),
    Cut(Literal),
    ConsistencyCheck,
    Memo(Answer),
    MoveNext { direction: Direction, kind: BranchKind },
}

/// A coin the current state accepts. Memo coins carry an answer and are not
/// enumerated; they are accepted on any developed goal they apply to.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LegalCoin {
    ConsistencyCheck,
    Focus(usize),
    Side(u8),
    Polarise(Literal),
    Cut(Literal),
    MoveNext { direction: Direction, kind: BranchKind },
}

impl LegalCoin {
    /// Stable textual identifier.
    pub fn id(&self) -> String {
        match self {
            LegalCoin::ConsistencyCheck => "check".into(),
            LegalCoin::Focus(i) => format!("focus:{i}"),
            LegalCoin::Side(i) => format!("side:{i}"),
            LegalCoin::Polarise(l) => format!("pol:{l}"),
            LegalCoin::Cut(l) => format!("cut:{l}"),
            LegalCoin::MoveNext { direction, kind } => format!(
                "next:{}:{}",
                if *direction == Direction::Left { "left" } else { "right" },
                if *kind == BranchKind::Success { "success" } else { "failure" }
            ),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            LegalCoin::ConsistencyCheck => "check",
            LegalCoin::Focus(_) => "focus",
            LegalCoin::Side(_) => "side",
            LegalCoin::Polarise(_) => "polarise",
            LegalCoin::Cut(_) => "cut",
            LegalCoin::MoveNext { .. } => "move",
        }
    }

    pub fn coin(&self) -> Coin {
        match self {
            LegalCoin::ConsistencyCheck => Coin::ConsistencyCheck,
            LegalCoin::Focus(i) => Coin::Focus(*i),
            LegalCoin::Side(i) => Coin::Side(*i),
            LegalCoin::Polarise(l) => Coin::Polarise(l.clone()),
            LegalCoin::Cut(l) => Coin::Cut(l.clone()),
            LegalCoin::MoveNext { direction, kind } => {
                Coin::MoveNext { direction: *direction, kind: *kind }
            }
        }
    }

    /// Whether exploring every coin of this kind is needed for exhaustiveness.
    pub fn is_mandatory(&self) -> bool {
        matches!(self, LegalCoin::ConsistencyCheck | LegalCoin::Focus(_) | LegalCoin::Side(_))
    }
}

impl fmt::Display for LegalCoin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum KernelError {
    #[error("malformed statement: {0}")]
    Malformed(String),
    #[error(transparent)]
    Theory(#[from] TheoryError),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CoinError {
    #[error("illegal coin: {0}")]
    Illegal(String),
    #[error("side condition failed: {0}")]
    SideCondition(String),
    #[error(transparent)]
    Theory(#[from] TheoryError),
}

/// A refused coin. The state is handed back unchanged.
#[derive(Debug)]
pub struct Rejected {
    pub slot: Slot,
    pub error: CoinError,
}

/// What the last accepted coin did.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Rules were applied; goals may remain open.
    Progress,
    /// The goal the coin was inserted on is now closed.
    Closed,
    /// The coin's alternative cannot succeed and is recorded as failed.
    Lost(Loss),
    /// Navigation only.
    Moved,
}

#[derive(Clone)]
pub enum Output {
    Jackpot(Answer),
    InsertCoin(Slot),
}

impl fmt::Debug for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Slot")
            .field("goal", &self.goals[self.current].seq)
            .field("open", &self.frontier().len())
            .finish()
    }
}

impl fmt::Debug for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Output::Jackpot(a) => f.debug_tuple("Jackpot").field(a).finish(),
            Output::InsertCoin(s) => write!(f, "InsertCoin({})", s.goal()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum AltKey {
    Start,
    Init2,
    Focus(Formula),
    Pol(Literal),
    Cut(Literal),
    Side(u8),
}

#[derive(Clone, Debug)]
enum Status {
    Open,
    Working(AltKey, Derivation<usize>),
    Proved(ProofTree),
    Refuted,
    Lost,
}

#[derive(Clone, Debug)]
struct Goal {
    seq: Sequent,
    parent: Option<usize>,
    /// For disjunction goals: the developed sequent the phase started from.
    anchor: Option<Sequent>,
    status: Status,
    failed: BTreeSet<AltKey>,
    suspended: BTreeMap<AltKey, Derivation<usize>>,
}

impl Goal {
    fn new(seq: Sequent, parent: Option<usize>, anchor: Option<Sequent>) -> Self {
        Goal { seq, parent, anchor, status: Status::Open, failed: BTreeSet::new(), suspended: BTreeMap::new() }
    }
}

/// The resumable state behind an `InsertCoin` output.
#[derive(Clone)]
pub struct Slot {
    theory: Theory,
    allow_cuts: bool,
    statement: Sequent,
    goals: Vec<Goal>,
    current: usize,
    resolved: Vec<Answer>,
    outcome: Option<Outcome>,
}

/// Collects the holes of a phase as new goals without touching the arena.
struct Pending<'a> {
    base: usize,
    parent: usize,
    anchor: Option<&'a Sequent>,
    goals: Vec<Goal>,
}

impl LeafSink for Pending<'_> {
    type Leaf = usize;

    fn developed(&mut self, s: Sequent) -> Result<usize, Stop> {
        if self.anchor == Some(&s) {
            return Err(Stop::Lost(Loss::NoProgress));
        }
        self.goals.push(Goal::new(s, Some(self.parent), None));
        Ok(self.base + self.goals.len() - 1)
    }

    fn disjunction(&mut self, s: Sequent) -> Result<usize, Stop> {
        self.goals.push(Goal::new(s, Some(self.parent), self.anchor.cloned()));
        Ok(self.base + self.goals.len() - 1)
    }
}

/// Starts a search on `statement`, running its asynchronous phase.
pub fn machine(statement: Sequent, config: &KernelConfig) -> Result<Output, KernelError> {
    if !matches!(statement, Sequent::Unfocused { .. }) {
        return Err(KernelError::Malformed("the statement must be unfocused".into()));
    }
    statement.check_context().map_err(KernelError::Malformed)?;
    let mut slot = Slot {
        theory: config.theory.clone(),
        allow_cuts: config.allow_cuts,
        statement: statement.clone(),
        goals: vec![Goal::new(statement.clone(), None, None)],
        current: 0,
        resolved: Vec::new(),
        outcome: None,
    };
    if !statement.is_developed() {
        let Sequent::Unfocused { gamma, delta, pol } = &statement else { unreachable!() };
        let mut engine = Engine::new(slot.theory.as_ref(), step_bound(&statement));
        let mut sink = Pending { base: 1, parent: 0, anchor: None, goals: Vec::new() };
        let result = engine.asyn(&mut sink, gamma.clone(), delta.clone(), pol.clone(), 0);
        engine.finish();
        match result {
            Ok(d) => slot.commit(0, AltKey::Start, d, sink.goals),
            Err(Stop::Theory(e)) => return Err(e.into()),
            Err(Stop::Lost(_)) => unreachable!("asynchronous phases without an anchor cannot lose"),
        }
    }
    Ok(slot.output())
}

impl Slot {
    /// The goal the next coin applies to.
    pub fn goal(&self) -> &Sequent {
        &self.goals[self.current].seq
    }

    /// The statement the search was started on.
    pub fn statement(&self) -> &Sequent {
        &self.statement
    }

    pub fn theory(&self) -> &Theory {
        &self.theory
    }

    pub fn cuts_allowed(&self) -> bool {
        self.allow_cuts
    }

    /// Answers for the developed goals settled by the last coin.
    pub fn resolved(&self) -> &[Answer] {
        &self.resolved
    }

    pub fn last_outcome(&self) -> Option<&Outcome> {
        self.outcome.as_ref()
    }

    /// Open goals, left to right.
    pub fn open_goals(&self) -> Vec<&Sequent> {
        self.frontier().into_iter().map(|g| &self.goals[g].seq).collect()
    }

    /// Index of the current goal among [`Slot::open_goals`].
    pub fn current_position(&self) -> usize {
        self.frontier().iter().position(|&g| g == self.current).unwrap_or(0)
    }

    /// Every coin the current goal accepts, in a fixed order.
    pub fn legal_coins(&self) -> Vec<LegalCoin> {
        let goal = &self.goals[self.current];
        let mut out = Vec::new();
        match &goal.seq {
            Sequent::Focused { .. } => {
                for i in [1u8, 2] {
                    if !goal.failed.contains(&AltKey::Side(i)) {
                        out.push(LegalCoin::Side(i));
                    }
                }
            }
            seq => {
                if !goal.failed.contains(&AltKey::Init2) {
                    out.push(LegalCoin::ConsistencyCheck);
                }
                for (i, f) in seq.gamma().iter().enumerate() {
                    if focusable(seq, f) && !goal.failed.contains(&AltKey::Focus(f.clone())) {
                        out.push(LegalCoin::Focus(i));
                    }
                }
                let mut lits = BTreeSet::new();
                for f in seq.gamma() {
                    f.literals_into(&mut lits);
                }
                let both: BTreeSet<Literal> =
                    lits.iter().flat_map(|l| [l.clone(), l.negate()]).collect();
                for l in both.iter().filter(|l| seq.pol().is_unpolarised(l)) {
                    out.push(LegalCoin::Polarise(l.clone()));
                }
                if self.allow_cuts {
                    for l in &both {
                        if !goal.failed.contains(&AltKey::Cut(l.clone())) {
                            out.push(LegalCoin::Cut(l.clone()));
                        }
                    }
                }
            }
        }
        for kind in [BranchKind::Success, BranchKind::Failure] {
            for direction in [Direction::Left, Direction::Right] {
                if self.move_target(direction, kind).is_some() {
                    out.push(LegalCoin::MoveNext { direction, kind });
                }
            }
        }
        out
    }

    /// A short outline of the search tree, one line per goal.
    pub fn outline(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.outline_goal(0, 0, &mut out);
        out
    }

    fn outline_goal(&self, g: usize, depth: usize, out: &mut Vec<String>) {
        let goal = &self.goals[g];
        let mark = match &goal.status {
            Status::Open if g == self.current => "open*",
            Status::Open => "open",
            Status::Working(..) => "working",
            Status::Proved(_) => "proved",
            Status::Refuted => "refuted",
            Status::Lost => "lost",
        };
        out.push(format!("{}[{mark}] {}", "  ".repeat(depth), goal.seq));
        if let Status::Working(alt, d) = &goal.status {
            out.push(format!("{}  via {}", "  ".repeat(depth), alt_name(alt)));
            for &c in d.leaves() {
                self.outline_goal(c, depth + 2, out);
            }
        }
    }

    /// Applies a coin. Illegal coins and failed side conditions hand the
    /// state back unchanged inside the error.
    pub fn insert(mut self, coin: Coin) -> Result<Output, Box<Rejected>> {
        match self.apply(coin) {
            Ok(()) => Ok(self.output()),
            Err(error) => Err(Box::new(Rejected { slot: self, error })),
        }
    }

    fn output(mut self) -> Output {
        match &self.goals[0].status {
            Status::Proved(p) => {
                let proof = p.prune();
                Output::Jackpot(Answer::provable(self.statement.clone(), proof))
            }
            Status::Refuted => Output::Jackpot(Answer::not_provable(self.statement.clone())),
            _ => {
                if !matches!(self.goals[self.current].status, Status::Open) {
                    let frontier = self.frontier();
                    self.current = frontier
                        .iter()
                        .copied()
                        .find(|&g| self.descends_from(g, self.current))
                        .unwrap_or(frontier[0]);
                }
                Output::InsertCoin(self)
            }
        }
    }

    fn descends_from(&self, mut g: usize, ancestor: usize) -> bool {
        loop {
            if g == ancestor {
                return true;
            }
            match self.goals[g].parent {
                Some(p) => g = p,
                None => return false,
            }
        }
    }

    fn frontier(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![0usize];
        while let Some(g) = stack.pop() {
            match &self.goals[g].status {
                Status::Open => out.push(g),
                Status::Working(_, d) => stack.extend(d.leaves().into_iter().rev().copied()),
                _ => {}
            }
        }
        out
    }

    fn apply(&mut self, coin: Coin) -> Result<(), CoinError> {
        self.resolved.clear();
        let g = self.current;
        let seq = self.goals[g].seq.clone();
        let illegal = |why: &str| Err(CoinError::Illegal(why.to_string()));
        let developed = seq.is_developed();
        match coin {
            Coin::MoveNext { direction, kind } => {
                let Some(target) = self.move_target(direction, kind) else {
                    return illegal("no branch in that direction");
                };
                if kind == BranchKind::Failure {
                    let Status::Working(alt, d) =
                        std::mem::replace(&mut self.goals[target].status, Status::Open)
                    else {
                        unreachable!()
                    };
                    self.goals[target].suspended.insert(alt, d);
                }
                self.current = target;
                self.outcome = Some(Outcome::Moved);
                Ok(())
            }
            Coin::Side(i) => {
                if developed || !(i == 1 || i == 2) || self.goals[g].failed.contains(&AltKey::Side(i)) {
                    return illegal("side choices need a goal focused on a positive disjunction");
                }
                self.run_alternative(g, AltKey::Side(i), |e, sink| e.side(sink, &seq, i))
            }
            _ if !developed => illegal("this coin needs a developed goal"),
            Coin::ConsistencyCheck => {
                if self.goals[g].failed.contains(&AltKey::Init2) {
                    return illegal("consistency already checked on this goal");
                }
                self.run_alternative(g, AltKey::Init2, |e, _| e.init2(&seq))
            }
            Coin::Focus(i) => {
                let Some(f) = seq.gamma().iter().nth(i).cloned() else {
                    return illegal("focus index out of range");
                };
                if !focusable(&seq, &f) {
                    return illegal("a positive literal of the context cannot be selected");
                }
                let key = AltKey::Focus(f.clone());
                if self.goals[g].failed.contains(&key) {
                    return illegal("this formula already failed under focus");
                }
                self.run_alternative(g, key, |e, sink| e.select(sink, &seq, &f))
            }
            Coin::Polarise(l) => {
                if !seq.pol().is_unpolarised(&l) {
                    return illegal("only unpolarised literals can be polarised");
                }
                if !occurs_in(&l, seq.gamma()) {
                    return Err(CoinError::SideCondition(format!("{l} does not occur in the context")));
                }
                let key = AltKey::Pol(l.clone());
                if self.goals[g].suspended.contains_key(&key) {
                    return self.run_alternative(g, key, |_, _| unreachable!());
                }
                let engine = Engine::new(self.theory.as_ref(), 0);
                let Some(cert) = engine.pol_certificate(&seq, &l)? else {
                    return Err(CoinError::SideCondition(format!(
                        "the positive literals of the context do not entail {l}"
                    )));
                };
                self.run_alternative(g, key, |e, sink| e.pol(sink, &seq, &l, cert))
            }
            Coin::Cut(l) => {
                if !self.allow_cuts {
                    return illegal("cuts are disabled");
                }
                if !occurs_in(&l, seq.gamma()) {
                    return Err(CoinError::SideCondition(format!("{l} does not occur in the context")));
                }
                let key = AltKey::Cut(l.clone());
                if self.goals[g].failed.contains(&key) {
                    return illegal("this cut already failed");
                }
                self.run_alternative(g, key, |e, sink| e.cut(sink, &seq, &l))
            }
            Coin::Memo(answer) => {
                if !answer.applies_to(&seq) {
                    return Err(CoinError::SideCondition("the memoised answer does not apply".into()));
                }
                self.outcome = Some(Outcome::Closed);
                match answer.proof() {
                    Some(p) => {
                        let node = ProofTree::new(Rule::MemoHit, seq, Vec::new(), None, Some(p.clone()));
                        self.proved(g, node);
                    }
                    None => self.refuted(g),
                }
                Ok(())
            }
        }
    }

    /// Runs (or resumes) alternative `key` of goal `g`.
    fn run_alternative(
        &mut self,
        g: usize,
        key: AltKey,
        run: impl FnOnce(&mut Engine<'_>, &mut Pending<'_>) -> Result<Derivation<usize>, Stop>,
    ) -> Result<(), CoinError> {
        if let Some(d) = self.goals[g].suspended.remove(&key) {
            self.goals[g].status = Status::Working(key, d);
            self.outcome = Some(Outcome::Progress);
            return Ok(());
        }
        let seq = self.goals[g].seq.clone();
        let anchor = match &seq {
            Sequent::Focused { .. } => self.goals[g].anchor.clone(),
            s => Some(s.clone()),
        };
        let theory = self.theory.clone();
        let mut engine = Engine::new(theory.as_ref(), step_bound(&seq));
        let mut sink = Pending { base: self.goals.len(), parent: g, anchor: anchor.as_ref(), goals: Vec::new() };
        let result = run(&mut engine, &mut sink);
        engine.finish();
        match result {
            Ok(d) => {
                let pending = sink.goals;
                self.commit(g, key, d, pending);
                let closed = matches!(self.goals[g].status, Status::Proved(_));
                self.outcome = Some(if closed { Outcome::Closed } else { Outcome::Progress });
                Ok(())
            }
            Err(Stop::Theory(e)) => Err(e.into()),
            Err(Stop::Lost(loss)) => {
                self.outcome = Some(Outcome::Lost(loss));
                self.alternative_lost(g, key);
                Ok(())
            }
        }
    }

    fn commit(&mut self, g: usize, key: AltKey, d: Derivation<usize>, pending: Vec<Goal>) {
        self.goals.extend(pending);
        if d.leaves().is_empty() {
            let proof = d.close(&mut |_| unreachable!());
            self.proved(g, proof);
        } else {
            self.goals[g].status = Status::Working(key, d);
        }
    }

    fn proved(&mut self, mut g: usize, mut proof: ProofTree) {
        loop {
            if self.goals[g].seq.is_developed() {
                self.resolved.push(Answer::provable(self.goals[g].seq.clone(), proof.prune()));
            }
            self.goals[g].status = Status::Proved(proof);
            let Some(p) = self.goals[g].parent else { return };
            let Status::Working(_, d) = &self.goals[p].status else { return };
            let done = d.leaves().iter().all(|&&c| matches!(self.goals[c].status, Status::Proved(_)));
            if !done {
                return;
            }
            let goals = &self.goals;
            proof = d.close(&mut |&c| match &goals[c].status {
                Status::Proved(p) => p.clone(),
                _ => unreachable!(),
            });
            g = p;
        }
    }

    /// A developed goal that is not provable makes every goal below which it
    /// was reached unprovable: their contexts and polarisations are included
    /// in its own.
    fn refuted(&mut self, mut g: usize) {
        loop {
            if self.goals[g].seq.is_developed() {
                self.resolved.push(Answer::not_provable(self.goals[g].seq.clone()));
            }
            self.goals[g].status = Status::Refuted;
            match self.goals[g].parent {
                Some(p) => g = p,
                None => return,
            }
        }
    }

    fn alternative_lost(&mut self, mut g: usize, mut key: AltKey) {
        loop {
            let goal = &mut self.goals[g];
            goal.failed.insert(key);
            goal.status = Status::Open;
            if !self.exhausted(g) {
                return;
            }
            if self.goals[g].seq.is_developed() {
                self.refuted(g);
                return;
            }
            self.goals[g].status = Status::Lost;
            let Some(p) = self.goals[g].parent else { return };
            let Status::Working(k, _) = &self.goals[p].status else { return };
            key = k.clone();
            g = p;
        }
    }

    /// All mandatory alternatives of `g` failed.
    fn exhausted(&self, g: usize) -> bool {
        let goal = &self.goals[g];
        match &goal.seq {
            Sequent::Focused { .. } => {
                goal.failed.contains(&AltKey::Side(1)) && goal.failed.contains(&AltKey::Side(2))
            }
            seq => {
                goal.failed.contains(&AltKey::Init2)
                    && seq
                        .gamma()
                        .iter()
                        .filter(|f| focusable(seq, f))
                        .all(|f| goal.failed.contains(&AltKey::Focus(f.clone())))
            }
        }
    }

    fn move_target(&self, direction: Direction, kind: BranchKind) -> Option<usize> {
        match kind {
            BranchKind::Success => {
                let f = self.frontier();
                let pos = f.iter().position(|&g| g == self.current)?;
                match direction {
                    Direction::Left => pos.checked_sub(1).map(|p| f[p]),
                    Direction::Right => f.get(pos + 1).copied(),
                }
            }
            BranchKind::Failure => {
                let mut candidates = Vec::new();
                let mut g = self.goals[self.current].parent;
                while let Some(a) = g {
                    if let Status::Working(alt, _) = &self.goals[a].status {
                        if *alt != AltKey::Start && self.has_other_alternative(a, alt) {
                            candidates.push(a);
                        }
                    }
                    g = self.goals[a].parent;
                }
                match direction {
                    Direction::Left => candidates.first().copied(),
                    Direction::Right => candidates.last().copied(),
                }
            }
        }
    }

    fn has_other_alternative(&self, g: usize, current: &AltKey) -> bool {
        let goal = &self.goals[g];
        let available = |k: &AltKey| k != current && !goal.failed.contains(k);
        match &goal.seq {
            Sequent::Focused { .. } => [AltKey::Side(1), AltKey::Side(2)].iter().any(available),
            seq => {
                available(&AltKey::Init2)
                    || seq
                        .gamma()
                        .iter()
                        .filter(|f| focusable(seq, f))
                        .any(|f| available(&AltKey::Focus(f.clone())))
            }
        }
    }
}

/// `Select` applies to `¬P` in the context when `P` is not `P`-negative,
/// i.e. the context formula is not a positive literal.
fn focusable(seq: &Sequent, f: &Formula) -> bool {
    match f.as_literal() {
        Some(l) => seq.pol().classify(l) != Polarity::PPositive,
        None => true,
    }
}

fn alt_name(alt: &AltKey) -> String {
    match alt {
        AltKey::Start => "asynchronous phase".into(),
        AltKey::Init2 => "Init2".into(),
        AltKey::Focus(f) => format!("Select {f}"),
        AltKey::Pol(l) => format!("Pol {l}"),
        AltKey::Cut(l) => format!("cut {l}"),
        AltKey::Side(i) => format!("side {i}"),
    }
}

//! DPLL(T) as a coin strategy, with watched literals. The plugin keeps a
//! flat view of the clauses next to their kernel representation and a
//! trail that follows the polarisation of the current goal.

use std::collections::{BTreeSet, HashSet};

use super::watch::{ClauseStatus, WatchTable};
use super::{first_mandatory, Chooser, Driver, Plugin, PluginError, PluginOptions, SolveStats};
use crate::formulas::{atoms_of, Clause, Formula, Literal, PolarisationSet};
use crate::kernel::{Answer, BranchKind, Coin, Direction, Output, Sequent, Slot};
use crate::memo::MemoStore;

#[derive(Debug, Default)]
pub struct DpllWl {
    driver: Driver,
}

impl DpllWl {
    pub fn new(options: PluginOptions) -> Self {
        DpllWl { driver: Driver::new(options) }
    }
}

impl Plugin for DpllWl {
    fn name(&self) -> &'static str {
        "dpll_wl"
    }

    fn solve(&mut self, out: Output) -> Result<Answer, PluginError> {
        let mut view = match &out {
            Output::InsertCoin(slot) => View::of(slot),
            Output::Jackpot(_) => None,
        };
        match view.as_mut() {
            Some(v) => self.driver.run(out, v),
            None => self.driver.run(out, &mut Generic),
        }
    }

    fn stats(&self) -> SolveStats {
        self.driver.stats
    }

    fn memo(&self) -> Option<&MemoStore> {
        Some(&self.driver.memo)
    }
}

/// Statements that are not clause sets are searched exhaustively.
struct Generic;

impl Chooser for Generic {
    fn choose(&mut self, slot: &Slot) -> Result<Coin, PluginError> {
        first_mandatory(slot)
    }
}

struct View {
    clauses: Vec<Clause>,
    represented: Vec<Formula>,
    atoms: BTreeSet<Literal>,
    watches: WatchTable,
    trail: Vec<Literal>,
    model: HashSet<Literal>,
    /// Clauses that may be unit or false under the model.
    candidates: BTreeSet<usize>,
    theory_aware: bool,
    cuts: bool,
}

impl View {
    /// A view on a developed clause-set statement, if it is one.
    fn of(slot: &Slot) -> Option<View> {
        let stmt = slot.statement();
        if !stmt.is_developed() {
            return None;
        }
        let mut clauses = Vec::new();
        for f in stmt.gamma() {
            match Clause::from_representation(f) {
                Some(c) => clauses.push(c),
                None if f.is_literal() => {}
                None => return None,
            }
        }
        let represented = clauses.iter().map(Clause::represent).collect();
        let watches = WatchTable::new(&clauses);
        let mut view = View {
            atoms: atoms_of(&clauses),
            represented,
            watches,
            clauses,
            trail: Vec::new(),
            model: HashSet::new(),
            candidates: BTreeSet::new(),
            theory_aware: slot.theory().name() != "empty",
            cuts: slot.cuts_allowed(),
        };
        view.rescan();
        Some(view)
    }

    fn rescan(&mut self) {
        let r = self.watches.scan(&self.model);
        self.candidates = r.conflicts.into_iter().chain(r.units.into_iter().map(|(c, _)| c)).collect();
    }

    /// Brings the trail in line with the goal's polarisation.
    fn sync(&mut self, pol: &PolarisationSet) {
        let keep = self.trail.iter().position(|l| !pol.contains(l)).unwrap_or(self.trail.len());
        let popped = keep < self.trail.len();
        for l in self.trail.drain(keep..) {
            self.model.remove(&l);
        }
        for l in pol.iter() {
            if self.model.contains(l) {
                continue;
            }
            self.model.insert(l.clone());
            self.trail.push(l.clone());
            let r = self.watches.update(l, &self.model);
            self.candidates.extend(r.conflicts);
            self.candidates.extend(r.units.into_iter().map(|(c, _)| c));
        }
        if popped {
            self.rescan();
        }
    }

    fn focus(&self, goal: &Sequent, c: usize) -> Coin {
        let i = goal
            .gamma()
            .iter()
            .position(|f| *f == self.represented[c])
            .expect("clause representations stay in the context");
        Coin::Focus(i)
    }

    fn assigned(&self, l: &Literal) -> bool {
        self.model.contains(l) || self.model.contains(&l.negate())
    }
}

impl Chooser for View {
    fn choose(&mut self, slot: &Slot) -> Result<Coin, PluginError> {
        let goal = slot.goal();
        if !goal.is_developed() {
            return first_mandatory(slot);
        }
        if slot.current_position() != 0 {
            return Ok(Coin::MoveNext { direction: Direction::Left, kind: BranchKind::Success });
        }
        self.sync(goal.pol());
        // Fail / Backtrack, and pending Propagate
        let mut unit = None;
        let mut settled = Vec::new();
        for &c in &self.candidates {
            match self.watches.status(c, &self.model) {
                ClauseStatus::Conflict => return Ok(self.focus(goal, c)),
                ClauseStatus::Unit(_) => {
                    unit.get_or_insert(c);
                }
                _ => settled.push(c),
            }
        }
        for c in settled {
            self.candidates.remove(&c);
        }
        let theory = slot.theory();
        let positive = goal.positive_atoms();
        // FailT / BacktrackT
        if self.theory_aware && theory.consistency(&positive)?.is_some() {
            return Ok(Coin::ConsistencyCheck);
        }
        if let Some(c) = unit {
            return Ok(self.focus(goal, c));
        }
        // PropagateT
        if self.theory_aware {
            for l in self.atoms.iter().filter(|l| !self.assigned(l)) {
                let mut s = positive.clone();
                s.insert(l.negate());
                if theory.consistency(&s)?.is_some() {
                    return Ok(Coin::Polarise(l.clone()));
                }
            }
        }
        // Decide
        if self.cuts {
            if let Some(l) = self.atoms.iter().find(|l| !self.assigned(l)) {
                return Ok(Coin::Cut(l.negate()));
            }
        } else if let Some(c) =
            (0..self.clauses.len()).find(|&c| self.watches.status(c, &self.model) == ClauseStatus::Open)
        {
            return Ok(self.focus(goal, c));
        }
        first_mandatory(slot)
    }

    fn reset(&mut self) {
        self.trail.clear();
        self.model.clear();
        self.rescan();
    }
}

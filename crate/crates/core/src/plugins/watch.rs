//! Two watched literals per clause.

use std::collections::{HashMap, HashSet};

use crate::formulas::{Clause, Literal};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClauseStatus {
    Satisfied,
    Conflict,
    Unit(Literal),
    Open,
}

/// Clauses that became unit or false after an assignment.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WatchReport {
    pub units: Vec<(usize, Literal)>,
    pub conflicts: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct WatchTable {
    clauses: Vec<Vec<Literal>>,
    watched: Vec<[usize; 2]>,
    watchers: HashMap<Literal, Vec<usize>>,
}

fn is_false(model: &HashSet<Literal>, l: &Literal) -> bool {
    model.contains(&l.negate())
}

impl WatchTable {
    /// Watches the first two literals of each clause; a unit clause watches
    /// its literal twice.
    pub fn new<'a>(clauses: impl IntoIterator<Item = &'a Clause>) -> Self {
        let clauses: Vec<Vec<Literal>> = clauses.into_iter().map(|c| c.iter().cloned().collect()).collect();
        let mut watchers: HashMap<Literal, Vec<usize>> = HashMap::new();
        let mut watched = Vec::with_capacity(clauses.len());
        for (i, c) in clauses.iter().enumerate() {
            let w = [0, usize::from(c.len() > 1)];
            for &k in w.iter().take(if c.len() > 1 { 2 } else { c.len() }) {
                watchers.entry(c[k].clone()).or_default().push(i);
            }
            watched.push(w);
        }
        WatchTable { clauses, watched, watchers }
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn clause(&self, c: usize) -> &[Literal] {
        &self.clauses[c]
    }

    pub fn watched(&self, c: usize) -> (&Literal, &Literal) {
        let [a, b] = self.watched[c];
        (&self.clauses[c][a], &self.clauses[c][b])
    }

    /// Moves watches off `¬assigned`, which `model` must already contain.
    pub fn update(&mut self, assigned: &Literal, model: &HashSet<Literal>) -> WatchReport {
        let falsified = assigned.negate();
        let mut report = WatchReport::default();
        let Some(list) = self.watchers.remove(&falsified) else { return report };
        let mut keep = Vec::with_capacity(list.len());
        for c in list {
            let lits = &self.clauses[c];
            let [w0, w1] = self.watched[c];
            if lits.is_empty() {
                continue;
            }
            if lits.len() == 1 {
                report.conflicts.push(c);
                keep.push(c);
                continue;
            }
            let slot = if lits[w0] == falsified { 0 } else { 1 };
            let other = if slot == 0 { w1 } else { w0 };
            if model.contains(&lits[other]) {
                keep.push(c);
                continue;
            }
            let free = (0..lits.len()).find(|&j| j != w0 && j != w1 && !is_false(model, &lits[j]));
            match free {
                Some(j) => {
                    self.watched[c][slot] = j;
                    self.watchers.entry(lits[j].clone()).or_default().push(c);
                }
                None => {
                    if is_false(model, &lits[other]) {
                        report.conflicts.push(c);
                    } else {
                        report.units.push((c, lits[other].clone()));
                    }
                    keep.push(c);
                }
            }
        }
        self.watchers.entry(falsified).or_default().extend(keep);
        report
    }

    pub fn status(&self, c: usize, model: &HashSet<Literal>) -> ClauseStatus {
        let lits = &self.clauses[c];
        if lits.iter().any(|l| model.contains(l)) {
            return ClauseStatus::Satisfied;
        }
        let mut free = lits.iter().filter(|l| !is_false(model, l));
        match (free.next(), free.next()) {
            (None, _) => ClauseStatus::Conflict,
            (Some(l), None) => ClauseStatus::Unit(l.clone()),
            _ => ClauseStatus::Open,
        }
    }

    /// Unit and false clauses under `model`, by a full pass.
    pub fn scan(&self, model: &HashSet<Literal>) -> WatchReport {
        let mut report = WatchReport::default();
        for c in 0..self.clauses.len() {
            match self.status(c, model) {
                ClauseStatus::Conflict => report.conflicts.push(c),
                ClauseStatus::Unit(l) => report.units.push((c, l)),
                _ => {}
            }
        }
        report
    }

    /// A false watch is only allowed when the other watch is true or every
    /// unwatched literal is false too.
    pub fn invariant_holds(&self, model: &HashSet<Literal>) -> bool {
        (0..self.clauses.len()).all(|c| {
            let lits = &self.clauses[c];
            let [w0, w1] = self.watched[c];
            if lits.is_empty() {
                return true;
            }
            let rest_false =
                || (0..lits.len()).filter(|&j| j != w0 && j != w1).all(|j| is_false(model, &lits[j]));
            [(w0, w1), (w1, w0)]
                .iter()
                .all(|&(a, b)| !is_false(model, &lits[a]) || model.contains(&lits[b]) || rest_false())
        })
    }
}

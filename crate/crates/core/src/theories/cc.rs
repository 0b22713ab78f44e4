//! Ground equality with uninterpreted functions: congruence closure with a
//! proof forest so that conflicts are explained by the input equalities they
//! depend on.

use std::collections::{BTreeSet, HashMap};

use super::{complementary_pair, DecisionProcedure, TheoryError};
use crate::formulas::{Atom, GroundTerm, Literal};

#[derive(Debug, Clone, Copy, Default)]
pub struct CongruenceClosure;

impl DecisionProcedure for CongruenceClosure {
    fn name(&self) -> &'static str {
        "cc"
    }

    fn consistency(
        &self,
        lits: &BTreeSet<Literal>,
    ) -> Result<Option<BTreeSet<Literal>>, TheoryError> {
        cc_consistency(lits)
    }

    fn interprets(&self, l: &Literal) -> bool {
        l.atom().is_euf()
    }
}

#[derive(Debug, Clone, Copy)]
enum Reason {
    Input(usize),
    Congruence(usize, usize),
}

#[derive(Debug, Default)]
struct Egraph {
    ids: HashMap<GroundTerm, usize>,
    /// Symbol and argument ids of each term.
    apps: Vec<(String, Vec<usize>)>,
    rep: Vec<usize>,
    members: Vec<Vec<usize>>,
    /// Proof forest: edge to parent with its justification.
    edge: Vec<Option<(usize, Reason)>>,
}

impl Egraph {
    fn intern(&mut self, t: &GroundTerm) -> usize {
        if let Some(&id) = self.ids.get(t) {
            return id;
        }
        let args = t.args.iter().map(|a| self.intern(a)).collect();
        let id = self.apps.len();
        self.apps.push((t.symbol.clone(), args));
        self.rep.push(id);
        self.members.push(vec![id]);
        self.edge.push(None);
        self.ids.insert(t.clone(), id);
        id
    }

    fn reroot(&mut self, mut x: usize) {
        let mut prev: Option<(usize, Reason)> = None;
        loop {
            let next = self.edge[x];
            self.edge[x] = prev;
            match next {
                Some((p, r)) => {
                    prev = Some((x, r));
                    x = p;
                }
                None => break,
            }
        }
    }

    fn merge(&mut self, a: usize, b: usize, why: Reason) {
        let (ra, rb) = (self.rep[a], self.rep[b]);
        if ra == rb {
            return;
        }
        // keep the larger class's representative
        let (small, big, from, to) = if self.members[ra].len() < self.members[rb].len() {
            (ra, rb, a, b)
        } else {
            (rb, ra, b, a)
        };
        self.reroot(from);
        self.edge[from] = Some((to, why));
        let moved = std::mem::take(&mut self.members[small]);
        for &m in &moved {
            self.rep[m] = big;
        }
        self.members[big].extend(moved);
    }

    /// Merges congruent applications until nothing changes.
    fn close(&mut self) {
        loop {
            let mut sig: HashMap<(String, Vec<usize>), usize> = HashMap::new();
            let mut pending = None;
            for t in 0..self.apps.len() {
                let (sym, args) = &self.apps[t];
                if args.is_empty() {
                    continue;
                }
                let key = (sym.clone(), args.iter().map(|&a| self.rep[a]).collect());
                match sig.get(&key) {
                    Some(&u) if self.rep[u] != self.rep[t] => {
                        pending = Some((u, t));
                        break;
                    }
                    Some(_) => {}
                    None => {
                        sig.insert(key, t);
                    }
                }
            }
            match pending {
                Some((u, t)) => self.merge(u, t, Reason::Congruence(u, t)),
                None => return,
            }
        }
    }

    fn path_to_root(&self, mut x: usize) -> Vec<usize> {
        let mut out = vec![x];
        while let Some((p, _)) = self.edge[x] {
            out.push(p);
            x = p;
        }
        out
    }

    /// Input indices justifying `a = b`; both must be in the same class.
    fn explain(&self, a: usize, b: usize, out: &mut BTreeSet<usize>) {
        if a == b {
            return;
        }
        let pa = self.path_to_root(a);
        let pb = self.path_to_root(b);
        let on_b: BTreeSet<usize> = pb.iter().copied().collect();
        let lca = *pa.iter().find(|n| on_b.contains(n)).expect("same class");
        for path in [&pa, &pb] {
            for &n in path.iter().take_while(|&&n| n != lca) {
                match self.edge[n].expect("non-root node").1 {
                    Reason::Input(i) => {
                        out.insert(i);
                    }
                    Reason::Congruence(u, t) => {
                        let args: Vec<(usize, usize)> = self.apps[u]
                            .1
                            .iter()
                            .copied()
                            .zip(self.apps[t].1.iter().copied())
                            .collect();
                        for (x, y) in args {
                            self.explain(x, y, out);
                        }
                    }
                }
            }
        }
    }
}

/// Propositional atoms are checked syntactically alongside the equational
/// ones; arithmetic atoms are rejected.
pub fn cc_consistency(
    s: &BTreeSet<Literal>,
) -> Result<Option<BTreeSet<Literal>>, TheoryError> {
    if let Some(pair) = complementary_pair(s) {
        return Ok(Some(pair));
    }
    if let Some(bad) = s.iter().find(|l| l.atom().is_linear()) {
        return Err(TheoryError::Unsupported { theory: "cc", literal: bad.to_string() });
    }
    let lits: Vec<&Literal> = s.iter().filter(|l| l.atom().is_euf()).collect();
    let mut g = Egraph::default();
    let mut eqs = Vec::new();
    let mut diseqs = Vec::new();
    for (i, l) in lits.iter().enumerate() {
        let Atom::EufEq(lhs, rhs) = l.atom() else { unreachable!() };
        let (a, b) = (g.intern(lhs), g.intern(rhs));
        if l.is_positive() {
            eqs.push((a, b, i));
        } else {
            diseqs.push((a, b, i));
        }
    }
    for (a, b, i) in eqs {
        g.merge(a, b, Reason::Input(i));
    }
    g.close();

    let mut best: Option<BTreeSet<usize>> = None;
    for (a, b, i) in diseqs {
        if g.rep[a] != g.rep[b] {
            continue;
        }
        let mut why = BTreeSet::from([i]);
        g.explain(a, b, &mut why);
        if best.as_ref().is_none_or(|c| why.len() < c.len()) {
            best = Some(why);
        }
    }
    Ok(best.map(|p| p.into_iter().map(|i| lits[i].clone()).collect()))
}

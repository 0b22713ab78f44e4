//! Reference oracles and instance generators shared by the integration
//! tests. The oracles are deliberately naive and independent of the library's
//! decision procedures.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use focused_smt::formulas::{linear_atom, Atom, Clause, GroundTerm, Literal, Relation};
use focused_smt::kernel::{machine, Answer, KernelConfig, Sequent};
use focused_smt::plugins::Plugin;
use focused_smt::theories::Theory;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn var(name: &str, positive: bool) -> Literal {
    Literal::var(name, positive)
}

pub fn lin(terms: &[(&str, i64)], rel: Relation, bound: i64) -> Literal {
    let (a, pos) = linear_atom(terms.iter().map(|(v, c)| (v.to_string(), q(*c))), rel, q(bound));
    Literal::new(a, pos)
}

pub fn statement(clauses: &BTreeSet<Clause>) -> Sequent {
    focused_smt::frontend::clause_statement(clauses)
}

pub fn solve(plugin: &mut dyn Plugin, clauses: &BTreeSet<Clause>, theory: &Theory, cuts: bool) -> Answer {
    let cfg = KernelConfig::new(theory.clone()).with_cuts(cuts);
    plugin.solve(machine(statement(clauses), &cfg).expect("well-formed statement")).expect("plugin reaches a jackpot")
}

// ---------------------------------------------------------------- truth table

/// Whether some assignment satisfies every clause. Atoms are treated as
/// independent propositions.
pub fn truth_table_sat(clauses: &BTreeSet<Clause>) -> bool {
    let atoms: Vec<&Atom> = clauses
        .iter()
        .flat_map(|c| c.iter().map(Literal::atom))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    assert!(atoms.len() <= 20, "truth table too large");
    (0u32..1 << atoms.len()).any(|bits| {
        clauses.iter().all(|c| {
            c.iter().any(|l| {
                let i = atoms.iter().position(|a| *a == l.atom()).unwrap();
                (bits >> i & 1 == 1) == l.is_positive()
            })
        })
    })
}

/// Satisfiability modulo a literal-set consistency oracle, by enumerating
/// every assignment to the atoms.
pub fn sat_modulo(clauses: &BTreeSet<Clause>, consistent: &dyn Fn(&BTreeSet<Literal>) -> bool) -> bool {
    let atoms: Vec<Atom> = clauses
        .iter()
        .flat_map(|c| c.iter().map(|l| l.atom().clone()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    assert!(atoms.len() <= 16, "enumeration too large");
    (0u32..1 << atoms.len()).any(|bits| {
        let model: BTreeSet<Literal> =
            atoms.iter().enumerate().map(|(i, a)| Literal::new(a.clone(), bits >> i & 1 == 1)).collect();
        clauses.iter().all(|c| c.iter().any(|l| model.contains(l))) && consistent(&model)
    })
}

fn has_complementary_pair(lits: &BTreeSet<Literal>) -> bool {
    lits.iter().any(|l| lits.contains(&l.negate()))
}

// ------------------------------------------------------------ simplex oracle

/// A dense tableau; column `ncols` holds the right-hand side.
struct Tableau {
    rows: Vec<Vec<Q>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let k = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x -= &k * y;
            }
        }
        self.basis[r] = c;
    }

    /// Maximises `obj` over the columns for which `allowed` holds, with
    /// Bland's rule. Returns `None` when unbounded.
    fn maximise(&mut self, obj: &[Q], allowed: &dyn Fn(usize) -> bool) -> Option<Q> {
        loop {
            let reduced = |j: usize| {
                let mut z = obj[j].clone();
                for (i, row) in self.rows.iter().enumerate() {
                    z -= &obj[self.basis[i]] * &row[j];
                }
                z
            };
            let Some(enter) = (0..self.ncols).find(|&j| allowed(j) && reduced(j).is_positive()) else {
                let mut value = Q::zero();
                for (i, row) in self.rows.iter().enumerate() {
                    value += &obj[self.basis[i]] * &row[self.ncols];
                }
                return Some(value);
            };
            let mut best: Option<(Q, usize, usize)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[enter].is_positive() {
                    let ratio = &row[self.ncols] / &row[enter];
                    let better = match &best {
                        None => true,
                        Some((r, _, b)) => ratio < *r || (ratio == *r && self.basis[i] < *b),
                    };
                    if better {
                        best = Some((ratio, i, self.basis[i]));
                    }
                }
            }
            let (_, leave, _) = best?;
            self.pivot(leave, enter);
        }
    }
}

/// `coeffs · x ≥ rhs`, strictly when `strict`.
#[derive(Clone, Debug)]
pub struct Row {
    pub coeffs: BTreeMap<String, Q>,
    pub rhs: Q,
    pub strict: bool,
}

/// Exact feasibility of a conjunction of rows: maximise `t ≤ 1` subject to
/// `a·x ≥ b + t` on strict rows and `a·x ≥ b` on the others, then ask for
/// `t > 0`.
pub fn rows_feasible(rows: &[Row]) -> bool {
    let vars: Vec<&String> = rows.iter().flat_map(|r| r.coeffs.keys()).collect::<BTreeSet<_>>().into_iter().collect();
    let n = vars.len();
    // columns: x+ (n), x- (n), t, slacks (m), artificials
    let m = rows.len() + 1;
    let t = 2 * n;
    let slack = |i: usize| 2 * n + 1 + i;
    let mut dense: Vec<(Vec<Q>, Q)> = Vec::with_capacity(m);
    for r in rows {
        // -a·x+ + a·x- + s·t + slack = -b
        let mut row = vec![Q::zero(); 2 * n + 1];
        for (v, c) in &r.coeffs {
            let j = vars.iter().position(|w| *w == v).unwrap();
            row[j] = -c.clone();
            row[n + j] = c.clone();
        }
        if r.strict {
            row[t] = Q::one();
        }
        dense.push((row, -r.rhs.clone()));
    }
    let mut cap = vec![Q::zero(); 2 * n + 1];
    cap[t] = Q::one();
    dense.push((cap, Q::one()));

    let negative: Vec<usize> = (0..m).filter(|&i| dense[i].1.is_negative()).collect();
    let ncols = 2 * n + 1 + m + negative.len();
    let mut tab = Tableau { rows: Vec::with_capacity(m), basis: Vec::with_capacity(m), ncols };
    for (i, (coeffs, rhs)) in dense.into_iter().enumerate() {
        let mut row = vec![Q::zero(); ncols + 1];
        row[..coeffs.len()].clone_from_slice(&coeffs);
        row[slack(i)] = Q::one();
        row[ncols] = rhs;
        if let Some(k) = negative.iter().position(|&j| j == i) {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
            let art = 2 * n + 1 + m + k;
            row[art] = Q::one();
            tab.basis.push(art);
        } else {
            tab.basis.push(slack(i));
        }
        tab.rows.push(row);
    }
    let first_art = 2 * n + 1 + m;
    if !negative.is_empty() {
        let mut obj = vec![Q::zero(); ncols];
        for x in obj.iter_mut().skip(first_art) {
            *x = -Q::one();
        }
        let best = tab.maximise(&obj, &|_| true).expect("phase one is bounded");
        if best.is_negative() {
            return false;
        }
        for i in 0..tab.rows.len() {
            if tab.basis[i] >= first_art {
                if let Some(j) = (0..first_art).find(|&j| !tab.rows[i][j].is_zero()) {
                    tab.pivot(i, j);
                }
            }
        }
    }
    let mut obj = vec![Q::zero(); ncols];
    obj[t] = Q::one();
    let best = tab.maximise(&obj, &|j| j < first_art).expect("t is capped");
    best.is_positive()
}

/// `e REL b` as rows, or `None` for a disequality (returned separately).
fn literal_rows(l: &Literal) -> Result<Vec<Row>, (BTreeMap<String, Q>, Q)> {
    let Atom::LinConstraint { coeffs, relation, bound } = l.atom() else {
        panic!("{l} is not arithmetic");
    };
    let neg: BTreeMap<String, Q> = coeffs.iter().map(|(v, c)| (v.clone(), -c.clone())).collect();
    let row = |coeffs: &BTreeMap<String, Q>, rhs: Q, strict| Row { coeffs: coeffs.clone(), rhs, strict };
    Ok(match (relation, l.is_positive()) {
        (Relation::Gt, true) => vec![row(coeffs, bound.clone(), true)],
        (Relation::Ge, true) => vec![row(coeffs, bound.clone(), false)],
        (Relation::Eq, true) => vec![row(coeffs, bound.clone(), false), row(&neg, -bound.clone(), false)],
        (Relation::Gt, false) => vec![row(&neg, -bound.clone(), false)],
        (Relation::Ge, false) => vec![row(&neg, -bound.clone(), true)],
        (Relation::Eq, false) => return Err((coeffs.clone(), bound.clone())),
    })
}

/// Consistency of a set of arithmetic and propositional literals.
/// A convex set avoids finitely many hyperplanes iff it is not contained in
/// any single one of them, which reduces disequalities to strict cases.
pub fn lra_oracle_consistent(lits: &BTreeSet<Literal>) -> bool {
    if has_complementary_pair(lits) {
        return false;
    }
    let mut rows = Vec::new();
    let mut diseqs = Vec::new();
    for l in lits.iter().filter(|l| l.atom().is_linear()) {
        match literal_rows(l) {
            Ok(r) => rows.extend(r),
            Err(d) => diseqs.push(d),
        }
    }
    if !rows_feasible(&rows) {
        return false;
    }
    diseqs.iter().all(|(coeffs, b)| {
        let neg: BTreeMap<String, Q> = coeffs.iter().map(|(v, c)| (v.clone(), -c.clone())).collect();
        let above = Row { coeffs: coeffs.clone(), rhs: b.clone(), strict: true };
        let below = Row { coeffs: neg, rhs: -b.clone(), strict: true };
        [above, below].into_iter().any(|extra| {
            let mut with = rows.clone();
            with.push(extra);
            rows_feasible(&with)
        })
    })
}

// ------------------------------------------------- congruence closure oracle

/// Consistency of ground equalities and disequalities (and propositional
/// literals) by iterating the congruence rule to a fixpoint.
pub fn cc_oracle_consistent(lits: &BTreeSet<Literal>) -> bool {
    if has_complementary_pair(lits) {
        return false;
    }
    let mut terms: Vec<GroundTerm> = Vec::new();
    fn collect(t: &GroundTerm, out: &mut Vec<GroundTerm>) {
        for a in &t.args {
            collect(a, out);
        }
        if !out.contains(t) {
            out.push(t.clone());
        }
    }
    for l in lits {
        if let Atom::EufEq(a, b) = l.atom() {
            collect(a, &mut terms);
            collect(b, &mut terms);
        }
    }
    let idx = |t: &GroundTerm| terms.iter().position(|u| u == t).unwrap();
    let mut class: Vec<usize> = (0..terms.len()).collect();
    let merge = |class: &mut Vec<usize>, a: usize, b: usize| {
        let (from, to) = (class[a], class[b]);
        if from == to {
            return false;
        }
        for c in class.iter_mut() {
            if *c == from {
                *c = to;
            }
        }
        true
    };
    for l in lits.iter().filter(|l| l.is_positive()) {
        if let Atom::EufEq(a, b) = l.atom() {
            merge(&mut class, idx(a), idx(b));
        }
    }
    loop {
        let mut changed = false;
        for i in 0..terms.len() {
            for j in i + 1..terms.len() {
                let (s, t) = (&terms[i], &terms[j]);
                let congruent = s.symbol == t.symbol
                    && s.args.len() == t.args.len()
                    && s.args.iter().zip(&t.args).all(|(a, b)| class[idx(a)] == class[idx(b)]);
                if congruent {
                    changed |= merge(&mut class, i, j);
                }
            }
        }
        if !changed {
            break;
        }
    }
    lits.iter().filter(|l| !l.is_positive()).all(|l| match l.atom() {
        Atom::EufEq(a, b) => class[idx(a)] != class[idx(b)],
        _ => true,
    })
}

// ----------------------------------------------------------------- generators

pub fn random_clause(rng: &mut impl Rng, atoms: &[Atom], width: usize) -> Clause {
    let chosen: Vec<&Atom> = atoms.choose_multiple(rng, width.min(atoms.len())).collect();
    Clause::new(chosen.into_iter().map(|a| Literal::new(a.clone(), rng.gen_bool(0.5))))
}

pub fn prop_atoms(n: usize) -> Vec<Atom> {
    (1..=n).map(|i| Atom::prop(format!("x{i}"))).collect()
}

/// A random 3-CNF (narrower clauses when fewer than 3 variables).
pub fn random_3cnf(rng: &mut impl Rng, nvars: usize, nclauses: usize) -> BTreeSet<Clause> {
    let atoms = prop_atoms(nvars);
    (0..nclauses).map(|_| random_clause(rng, &atoms, 3)).collect()
}

/// All clauses over `atoms` with between 1 and `max_width` literals on
/// distinct atoms.
pub fn all_clauses(atoms: &[Atom], max_width: usize) -> Vec<Clause> {
    let mut out = Vec::new();
    let n = atoms.len();
    for mask in 1u32..1 << n {
        let chosen: Vec<&Atom> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| &atoms[i]).collect();
        if chosen.len() > max_width {
            continue;
        }
        for signs in 0u32..1 << chosen.len() {
            out.push(Clause::new(
                chosen.iter().enumerate().map(|(i, a)| Literal::new((*a).clone(), signs >> i & 1 == 1)),
            ));
        }
    }
    out
}

/// Every set of at most `max_clauses` clauses from `pool`.
pub fn clause_sets(pool: &[Clause], max_clauses: usize) -> Vec<BTreeSet<Clause>> {
    let mut out = vec![BTreeSet::new()];
    fn grow(pool: &[Clause], start: usize, left: usize, cur: &mut Vec<Clause>, out: &mut Vec<BTreeSet<Clause>>) {
        if left == 0 {
            return;
        }
        for i in start..pool.len() {
            cur.push(pool[i].clone());
            out.push(cur.iter().cloned().collect());
            grow(pool, i + 1, left - 1, cur, out);
            cur.pop();
        }
    }
    grow(pool, 0, max_clauses, &mut Vec::new(), &mut out);
    out
}

/// A random arithmetic literal over `vars` with small integer data.
pub fn random_lra_literal(rng: &mut impl Rng, vars: &[&str]) -> Literal {
    let k = rng.gen_range(1..=vars.len().min(3));
    let chosen: Vec<&&str> = vars.choose_multiple(rng, k).collect();
    let mut terms: Vec<(String, Q)> = chosen.into_iter().map(|v| (v.to_string(), q(rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 }))).collect();
    if rng.gen_bool(0.1) {
        terms.truncate(1);
    }
    let rel = *[Relation::Gt, Relation::Ge, Relation::Eq].choose(rng).unwrap();
    let (a, pos) = linear_atom(terms, rel, q(rng.gen_range(-4..=4)));
    Literal::new(a, pos == rng.gen_bool(0.8))
}

pub fn random_lra_system(rng: &mut impl Rng) -> BTreeSet<Literal> {
    let vars = ["u", "v", "w", "z"];
    let nv = rng.gen_range(1..=4);
    let n = rng.gen_range(1..=8);
    (0..n).map(|_| random_lra_literal(rng, &vars[..nv])).collect()
}

pub fn random_ground_term(rng: &mut impl Rng, depth: usize) -> GroundTerm {
    let constants = ["a", "b", "c", "d"];
    if depth == 0 || rng.gen_bool(0.4) {
        return GroundTerm::constant(*constants.choose(rng).unwrap());
    }
    if rng.gen_bool(0.7) {
        GroundTerm::app("f", vec![random_ground_term(rng, depth - 1)])
    } else {
        GroundTerm::app("g", vec![random_ground_term(rng, depth - 1), random_ground_term(rng, depth - 1)])
    }
}

pub fn random_euf_set(rng: &mut impl Rng) -> BTreeSet<Literal> {
    let n = rng.gen_range(1..=10);
    (0..n)
        .map(|_| {
            let atom = Atom::euf_eq(random_ground_term(rng, 2), random_ground_term(rng, 2));
            Literal::new(atom, rng.gen_bool(0.7))
        })
        .collect()
}

pub fn theory(dp: impl focused_smt::theories::DecisionProcedure + 'static) -> Theory {
    Arc::new(dp)
}

pub fn empty() -> Theory {
    theory(focused_smt::theories::EmptyTheory)
}

pub fn lra() -> Theory {
    theory(focused_smt::theories::LinearArithmetic)
}

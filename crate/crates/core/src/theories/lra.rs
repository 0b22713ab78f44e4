//! Linear rational arithmetic by Fourier-Motzkin elimination over exact
//! rationals, with per-row provenance for inconsistent subsets.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{complementary_pair, DecisionProcedure, TheoryError};
use crate::formulas::{Atom, Literal, Relation};

#[derive(Debug, Clone, Copy, Default)]
pub struct LinearArithmetic;

impl DecisionProcedure for LinearArithmetic {
    fn name(&self) -> &'static str {
        "lra"
    }

    fn consistency(
        &self,
        lits: &BTreeSet<Literal>,
    ) -> Result<Option<BTreeSet<Literal>>, TheoryError> {
        lra_consistency(lits)
    }

    fn interprets(&self, l: &Literal) -> bool {
        l.atom().is_linear()
    }
}

type Provenance = BTreeSet<usize>;

/// `sum coeffs*x >= rhs`, or `>` when strict.
#[derive(Debug, Clone)]
struct Row {
    coeffs: BTreeMap<String, BigRational>,
    strict: bool,
    rhs: BigRational,
    origin: Provenance,
}

impl Row {
    fn trivially_false(&self) -> bool {
        debug_assert!(self.coeffs.is_empty());
        if self.strict {
            !self.rhs.is_negative()
        } else {
            self.rhs.is_positive()
        }
    }

    fn negated(coeffs: &BTreeMap<String, BigRational>) -> BTreeMap<String, BigRational> {
        coeffs.iter().map(|(v, c)| (v.clone(), -c.clone())).collect()
    }
}

/// Propositional atoms are checked syntactically alongside the arithmetic
/// ones; congruence atoms are rejected.
pub fn lra_consistency(
    s: &BTreeSet<Literal>,
) -> Result<Option<BTreeSet<Literal>>, TheoryError> {
    if let Some(pair) = complementary_pair(s) {
        return Ok(Some(pair));
    }
    let lits: Vec<&Literal> = s.iter().filter(|l| l.atom().is_linear()).collect();
    if let Some(bad) = s.iter().find(|l| l.atom().is_euf()) {
        return Err(TheoryError::Unsupported { theory: "lra", literal: bad.to_string() });
    }

    let mut rows = Vec::new();
    let mut disequalities = Vec::new();
    for (i, l) in lits.iter().enumerate() {
        let Atom::LinConstraint { coeffs, relation, bound } = l.atom() else {
            unreachable!()
        };
        let origin: Provenance = [i].into_iter().collect();
        let pos = |strict| Row {
            coeffs: coeffs.clone(),
            strict,
            rhs: bound.clone(),
            origin: origin.clone(),
        };
        let neg = |strict| Row {
            coeffs: Row::negated(coeffs),
            strict,
            rhs: -bound.clone(),
            origin: origin.clone(),
        };
        match (relation, l.is_positive()) {
            (Relation::Gt, true) => rows.push(pos(true)),
            // e ≤ c
            (Relation::Gt, false) => rows.push(neg(false)),
            (Relation::Ge, true) => rows.push(pos(false)),
            // e < c
            (Relation::Ge, false) => rows.push(neg(true)),
            (Relation::Eq, true) => {
                rows.push(pos(false));
                rows.push(neg(false));
            }
            (Relation::Eq, false) => disequalities.push((coeffs, bound, i)),
        }
    }

    let to_lits = |p: &Provenance| -> BTreeSet<Literal> {
        p.iter().map(|&i| lits[i].clone()).collect()
    };

    if let Some(p) = infeasible(rows.clone()) {
        return Ok(Some(to_lits(&p)));
    }
    // A nonempty convex set avoids finitely many hyperplanes unless it lies
    // inside one of them, so disequalities are checked one at a time.
    let mut best: Option<Provenance> = None;
    for (coeffs, bound, i) in disequalities {
        let origin: Provenance = [i].into_iter().collect();
        let mut below = rows.clone();
        below.push(Row {
            coeffs: Row::negated(coeffs),
            strict: true,
            rhs: -bound.clone(),
            origin: origin.clone(),
        });
        let Some(p1) = infeasible(below) else { continue };
        let mut above = rows.clone();
        above.push(Row { coeffs: coeffs.clone(), strict: true, rhs: bound.clone(), origin });
        let Some(p2) = infeasible(above) else { continue };
        let mut p: Provenance = p1.union(&p2).copied().collect();
        p.insert(i);
        if best.as_ref().is_none_or(|b| p.len() < b.len()) {
            best = Some(p);
        }
    }
    Ok(best.map(|p| to_lits(&p)))
}

/// Runs elimination; returns the provenance of a contradiction if any.
fn infeasible(mut rows: Vec<Row>) -> Option<Provenance> {
    loop {
        let mut contradiction: Option<Provenance> = None;
        rows.retain(|r| {
            if r.coeffs.is_empty() {
                if r.trivially_false()
                    && contradiction.as_ref().is_none_or(|c| r.origin.len() < c.len())
                {
                    contradiction = Some(r.origin.clone());
                }
                false
            } else {
                true
            }
        });
        if contradiction.is_some() {
            return contradiction;
        }
        rows = dedup(rows);
        let var = pick_variable(&rows)?;
        rows = eliminate(rows, &var);
    }
}

/// The variable whose elimination creates the fewest rows.
fn pick_variable(rows: &[Row]) -> Option<String> {
    let mut counts: BTreeMap<&String, (usize, usize)> = BTreeMap::new();
    for r in rows {
        for (v, c) in &r.coeffs {
            let e = counts.entry(v).or_default();
            if c.is_positive() {
                e.0 += 1;
            } else {
                e.1 += 1;
            }
        }
    }
    counts
        .into_iter()
        .min_by_key(|(_, (p, n))| p * n)
        .map(|(v, _)| v.clone())
}

fn eliminate(rows: Vec<Row>, var: &str) -> Vec<Row> {
    let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
    for r in rows {
        match r.coeffs.get(var) {
            Some(c) if c.is_positive() => pos.push(r),
            Some(_) => neg.push(r),
            None => rest.push(r),
        }
    }
    for p in &pos {
        let a = p.coeffs[var].clone();
        for n in &neg {
            let b = -n.coeffs[var].clone();
            // b*p + a*n cancels `var`
            let mut coeffs = BTreeMap::new();
            for (v, c) in &p.coeffs {
                *coeffs.entry(v.clone()).or_insert_with(BigRational::zero) += c * &b;
            }
            for (v, c) in &n.coeffs {
                *coeffs.entry(v.clone()).or_insert_with(BigRational::zero) += c * &a;
            }
            coeffs.retain(|_, c: &mut BigRational| !c.is_zero());
            rest.push(Row {
                coeffs,
                strict: p.strict || n.strict,
                rhs: &p.rhs * &b + &n.rhs * &a,
                origin: p.origin.union(&n.origin).copied().collect(),
            });
        }
    }
    rest
}

/// Normalises rows by their first coefficient and keeps, per direction, the
/// tightest bound (smallest provenance among equals).
fn dedup(rows: Vec<Row>) -> Vec<Row> {
    let mut best: HashMap<Vec<(String, BigRational)>, Row> = HashMap::new();
    for mut r in rows {
        let lead = r.coeffs.values().next().expect("non-constant row").abs();
        for c in r.coeffs.values_mut() {
            *c /= &lead;
        }
        r.rhs /= &lead;
        let key: Vec<_> = r.coeffs.iter().map(|(v, c)| (v.clone(), c.clone())).collect();
        match best.get(&key) {
            Some(old) if !tighter(&r, old) => {}
            _ => {
                best.insert(key, r);
            }
        }
    }
    let mut out: Vec<Row> = best.into_values().collect();
    out.sort_by(|a, b| a.coeffs.cmp(&b.coeffs).then(a.rhs.cmp(&b.rhs)));
    out
}

fn tighter(new: &Row, old: &Row) -> bool {
    if new.rhs != old.rhs {
        return new.rhs > old.rhs;
    }
    if new.strict != old.strict {
        return new.strict;
    }
    new.origin.len() < old.origin.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::linear_atom;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn lin(terms: &[(&str, i64)], rel: Relation, bound: i64, positive: bool) -> Literal {
        let (a, p) = linear_atom(
            terms.iter().map(|(v, c)| (v.to_string(), q(*c))),
            rel,
            q(bound),
        );
        Literal::new(a, p == positive)
    }

    fn set(ls: &[Literal]) -> BTreeSet<Literal> {
        ls.iter().cloned().collect()
    }

    #[test]
    fn x_positive_and_minus_one() {
        let gt = lin(&[("x", 1)], Relation::Gt, 0, true);
        let eq = lin(&[("x", 1)], Relation::Eq, -1, true);
        let s = set(&[gt.clone(), eq.clone()]);
        let cert = lra_consistency(&s).unwrap().expect("inconsistent");
        assert!(cert.is_subset(&s));
        assert!(lra_consistency(&cert).unwrap().is_some());
    }

    #[test]
    fn three_literal_conflict() {
        let s = set(&[
            lin(&[("x", 1)], Relation::Gt, 0, true),
            lin(&[("x", 1), ("y", 1)], Relation::Gt, 0, false),
            lin(&[("y", 1)], Relation::Gt, 0, true),
        ]);
        assert_eq!(lra_consistency(&s).unwrap().map(|c| c.len()), Some(3));
    }

    #[test]
    fn single_strict_bound_is_consistent() {
        assert_eq!(lra_consistency(&set(&[lin(&[("x", 1)], Relation::Gt, 0, true)])).unwrap(), None);
    }

    #[test]
    fn disequality_forced_by_bounds() {
        // x ≥ 1, x ≤ 1, x ≠ 1
        let s = set(&[
            lin(&[("x", 1)], Relation::Ge, 1, true),
            lin(&[("x", 1)], Relation::Gt, 1, false),
            lin(&[("x", 1)], Relation::Eq, 1, false),
            lin(&[("y", 1)], Relation::Gt, 3, true),
        ]);
        let cert = lra_consistency(&s).unwrap().expect("inconsistent");
        assert_eq!(cert.len(), 3);
        // without the upper bound the disequality is satisfiable
        let s2 = set(&[
            lin(&[("x", 1)], Relation::Ge, 1, true),
            lin(&[("x", 1)], Relation::Eq, 1, false),
        ]);
        assert_eq!(lra_consistency(&s2).unwrap(), None);
    }

    #[test]
    fn congruence_atoms_are_rejected() {
        use crate::formulas::GroundTerm;
        let a = Literal::pos(Atom::euf_eq(GroundTerm::constant("a"), GroundTerm::constant("b")));
        assert!(lra_consistency(&set(&[a])).is_err());
    }

    #[test]
    fn propositional_atoms_are_syntactic() {
        let p = Literal::var("p", true);
        assert!(lra_consistency(&set(&[p.clone(), p.negate()])).unwrap().is_some());
        assert!(lra_consistency(&set(&[p])).unwrap().is_none());
    }
}

//! Asks each decision procedure about a few literal sets and prints the
//! inconsistent subsets it returns.

use std::collections::BTreeSet;

use focused_smt::formulas::{linear_atom, Atom, GroundTerm, Literal, Relation};
use focused_smt::theories::{CongruenceClosure, DecisionProcedure, EmptyTheory, LinearArithmetic};
use num_rational::BigRational;

fn lin(terms: &[(&str, i64)], rel: Relation, bound: i64) -> Literal {
    let q = |n: i64| BigRational::from_integer(n.into());
    let (atom, positive) = linear_atom(terms.iter().map(|(v, c)| (v.to_string(), q(*c))), rel, q(bound));
    Literal::new(atom, positive)
}

fn report(dp: &dyn DecisionProcedure, lits: BTreeSet<Literal>) {
    let shown: Vec<String> = lits.iter().map(Literal::to_string).collect();
    match dp.consistency(&lits) {
        Ok(None) => println!("{:5} {{{}}}: consistent", dp.name(), shown.join(", ")),
        Ok(Some(core)) => {
            let core: Vec<String> = core.iter().map(Literal::to_string).collect();
            println!("{:5} {{{}}}: inconsistent, core {{{}}}", dp.name(), shown.join(", "), core.join(", "));
        }
        Err(e) => println!("{:5} {}", dp.name(), e),
    }
}

fn main() {
    let p = Literal::var("p", true);
    report(&EmptyTheory, [p.clone(), p.negate()].into());

    report(&LinearArithmetic, [lin(&[("x", 1)], Relation::Gt, 0), lin(&[("x", 1)], Relation::Eq, -1)].into());
    report(
        &LinearArithmetic,
        [
            lin(&[("x", 1), ("y", 1)], Relation::Ge, 2),
            lin(&[("x", 1)], Relation::Gt, 0),
            lin(&[("y", 1)], Relation::Gt, 0).negate(),
            p.clone(),
        ]
        .into(),
    );

    let (a, b) = (GroundTerm::constant("a"), GroundTerm::constant("b"));
    let f = |t: &GroundTerm| GroundTerm::app("f", vec![t.clone()]);
    report(
        &CongruenceClosure,
        [
            Literal::new(Atom::euf_eq(a.clone(), b.clone()), true),
            Literal::new(Atom::euf_eq(f(&a), f(&b)), false),
        ]
        .into(),
    );
    report(&CongruenceClosure, [lin(&[("x", 1)], Relation::Gt, 0)].into());
}

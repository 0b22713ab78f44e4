//! The running arithmetic example: solved by the plugin, then replayed as the
//! two elementary DPLL(T) runs.

use std::collections::BTreeSet;

use focused_smt::dpll_oracle::{self, Scripted, Transition};
use focused_smt::formulas::{linear_atom, Clause, Literal, Relation};
use focused_smt::frontend::parse_mini_smt;
use focused_smt::kernel::{machine, KernelConfig};
use focused_smt::plugins::{DpllWl, Plugin};
use focused_smt::theories::{LinearArithmetic, TheoryKind};
use num_rational::BigRational;

fn lin(terms: &[(&str, i64)], rel: Relation, bound: i64) -> Literal {
    let q = |n: i64| BigRational::from_integer(n.into());
    let (atom, positive) = linear_atom(terms.iter().map(|(v, c)| (v.to_string(), q(*c))), rel, q(bound));
    Literal::new(atom, positive)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let parsed = parse_mini_smt(include_str!("problems/lra_example.smt2"))?;
    let statement = parsed.statement.expect("the script asserts and checks");
    let config = KernelConfig::new(TheoryKind::Lra.instantiate());
    let answer = DpllWl::default().solve(machine(statement, &config)?)?;
    println!("plugin: provable = {} (expected {:?})", answer.is_provable(), parsed.expected);

    let x_pos = lin(&[("x", 1)], Relation::Gt, 0);
    let sum = lin(&[("x", 1), ("y", 1)], Relation::Gt, 0).negate();
    let y_pos = lin(&[("y", 1)], Relation::Gt, 0);
    let x_m1 = lin(&[("x", 1)], Relation::Eq, -1);
    let (c1, c2, c3) = (Clause::new([x_pos.clone()]), Clause::new([sum.clone()]), Clause::new([y_pos.clone(), x_m1.clone()]));
    let phi: BTreeSet<Clause> = [c1.clone(), c2.clone(), c3.clone()].into();
    let prop = |c: &Clause, l: &Literal| Transition::Propagate { clause: c.clone(), literal: l.clone() };

    let first = [
        prop(&c1, &x_pos),
        prop(&c2, &sum),
        Transition::PropagateT(y_pos.negate()),
        Transition::PropagateT(x_m1.negate()),
        Transition::Fail(c3.clone()),
    ];
    let second = [
        prop(&c1, &x_pos),
        prop(&c2, &sum),
        Transition::PropagateT(y_pos.negate()),
        prop(&c3, &x_m1),
        Transition::FailT,
    ];
    for (n, script) in [first.to_vec(), second.to_vec()].into_iter().enumerate() {
        let run = dpll_oracle::run(phi.iter().cloned(), &LinearArithmetic, &mut Scripted::new(script), 10)?;
        println!("\nrun {}:\n{}outcome {:?}", n + 1, run.trace(), run.outcome);
    }
    Ok(())
}

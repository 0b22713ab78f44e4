//! Runs the DPLL(T) transition system and grows an incomplete proof tree in
//! lockstep, then recovers each transition from its tree extension.

use std::collections::BTreeSet;

use focused_smt::bisim::{classify_extension, open_leaves, simulate_run};
use focused_smt::dpll_oracle::Eager;
use focused_smt::formulas::{Clause, Literal};
use focused_smt::proofcheck;
use focused_smt::theories::EmptyTheory;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let v = |n: &str, s: bool| Literal::var(n, s);
    let phi: BTreeSet<Clause> = [
        Clause::new([v("a", true), v("b", true)]),
        Clause::new([v("a", false), v("c", true)]),
        Clause::new([v("b", false), v("c", true)]),
        Clause::new([v("c", false)]),
    ]
    .into();
    let run = simulate_run(&phi, &EmptyTheory, &mut Eager, 50)?;
    println!("growth bound per step: {}", run.bound);
    for (k, state) in run.states.iter().enumerate() {
        let leaves = open_leaves(&run.trees[k]).len();
        println!("{state}   [{} nodes, {leaves} open]", run.trees[k].size());
        if let Some(t) = run.transitions.get(k) {
            let back = classify_extension(&run.trees[k], &run.trees[k + 1], &EmptyTheory)?;
            println!("  {t}  (recovered: {back})");
        }
    }
    println!("{}", run.trace_json());
    if let Some(proof) = run.proof() {
        proofcheck::check(&proof, &EmptyTheory)?;
        println!("closed tree checks: {} nodes", proof.size());
    }
    Ok(())
}

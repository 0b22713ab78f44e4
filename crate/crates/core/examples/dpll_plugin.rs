//! Solves a pigeonhole instance with the watched-literal plugin, with and
//! without cuts, and compares against the naive plugin.

use std::collections::BTreeSet;
use std::sync::Arc;

use focused_smt::formulas::{Clause, Literal};
use focused_smt::frontend::clause_statement;
use focused_smt::kernel::{machine, KernelConfig};
use focused_smt::plugins::{DpllWl, Naive, Plugin, PluginOptions};
use focused_smt::proofcheck;
use focused_smt::theories::EmptyTheory;

fn pigeonhole(pigeons: usize, holes: usize) -> BTreeSet<Clause> {
    let p = |i: usize, j: usize| Literal::var(&format!("p{i}_{j}"), true);
    let mut out: BTreeSet<Clause> = (0..pigeons).map(|i| Clause::new((0..holes).map(|j| p(i, j)))).collect();
    for j in 0..holes {
        for a in 0..pigeons {
            for b in a + 1..pigeons {
                out.insert(Clause::new([p(a, j).negate(), p(b, j).negate()]));
            }
        }
    }
    out
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let theory = Arc::new(EmptyTheory);
    let phi = pigeonhole(4, 3);
    println!("{} clauses", phi.len());
    let runs: Vec<(&str, bool, Box<dyn Plugin>)> = vec![
        ("dpll_wl", true, Box::new(DpllWl::new(PluginOptions::default()))),
        ("dpll_wl", false, Box::new(DpllWl::new(PluginOptions::default()))),
        ("naive", true, Box::new(Naive::new(PluginOptions::default()))),
    ];
    for (name, cuts, mut plugin) in runs {
        let config = KernelConfig::new(theory.clone()).with_cuts(cuts);
        let answer = plugin.solve(machine(clause_statement(&phi), &config)?)?;
        proofcheck::check_answer(&answer, theory.as_ref())?;
        let size = answer.proof().map_or(0, |p| p.size());
        println!(
            "{name:8} cuts={cuts:5} provable={} proof nodes={size} {:?}",
            answer.is_provable(),
            plugin.stats()
        );
    }
    Ok(())
}

//! Memoisation and restarts: the same refutation is needed twice, and a
//! restart schedule must not change answers.

use std::collections::BTreeSet;
use std::sync::Arc;

use focused_smt::formulas::{Clause, Literal};
use focused_smt::frontend::clause_statement;
use focused_smt::kernel::{machine, KernelConfig};
use focused_smt::plugins::{DpllWl, Plugin, PluginOptions};
use focused_smt::theories::EmptyTheory;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let v = |n: &str| Literal::var(n, true);
    let (x, y) = (v("x"), v("y"));
    // a ∨ b in front of an unsatisfiable core on x, y
    let phi: BTreeSet<Clause> = [
        Clause::new([v("a"), v("b")]),
        Clause::new([x.clone(), y.clone()]),
        Clause::new([x.negate(), y.clone()]),
        Clause::new([x.clone(), y.negate()]),
        Clause::new([x.negate(), y.negate()]),
    ]
    .into();
    let config = KernelConfig::new(Arc::new(EmptyTheory));

    for options in [
        PluginOptions { memo: false, ..PluginOptions::default() },
        PluginOptions::default(),
        PluginOptions { restarts: Some("luby:2".parse()?), ..PluginOptions::default() },
    ] {
        let label = format!("memo={} restarts={:?}", options.memo, options.restarts);
        let mut plugin = DpllWl::new(options);
        let answer = plugin.solve(machine(clause_statement(&phi), &config)?)?;
        println!("{label}: provable={} {:?}", answer.is_provable(), plugin.stats());
        if let Some(memo) = plugin.memo() {
            print!("{}", memo.dump());
        }
    }
    Ok(())
}

//! Drives the kernel by hand: print the legal coins, insert one, repeat.

use std::sync::Arc;

use focused_smt::formulas::{Clause, Literal};
use focused_smt::frontend::clause_statement;
use focused_smt::kernel::{machine, KernelConfig, LegalCoin, Output};
use focused_smt::theories::EmptyTheory;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (p, q) = (Literal::var("p", true), Literal::var("q", true));
    // {p ∨ q, ¬p, ¬q}
    let clauses = [Clause::new([p.clone(), q.clone()]), Clause::new([p.negate()]), Clause::new([q.negate()])];
    let config = KernelConfig::new(Arc::new(EmptyTheory));
    let mut out = machine(clause_statement(&clauses), &config)?;

    loop {
        let slot = match out {
            Output::Jackpot(answer) => {
                println!("jackpot: provable = {}", answer.is_provable());
                if let Some(proof) = answer.proof() {
                    println!("proof of {} with {} nodes", proof.conclusion, proof.size());
                }
                return Ok(());
            }
            Output::InsertCoin(slot) => slot,
        };
        if let Some(outcome) = slot.last_outcome() {
            println!("      last coin: {outcome:?}");
        }
        println!("goal  {}", slot.goal());
        let coins = slot.legal_coins();
        println!("coins {}", coins.iter().map(LegalCoin::id).collect::<Vec<_>>().join("  "));
        // prefer focusing on a stored formula that is not the two-literal clause
        let choice = coins
            .iter()
            .rev()
            .find(|c| matches!(c, LegalCoin::Focus(_)))
            .or_else(|| coins.iter().find(|c| c.is_mandatory()))
            .expect("a mandatory coin is always offered")
            .clone();
        println!("insert {choice}");
        out = match slot.insert(choice.coin()) {
            Ok(next) => next,
            Err(rejected) => {
                println!("refused: {}", rejected.error);
                Output::InsertCoin(rejected.slot)
            }
        };
    }
}

//! Exports a proof as JSON and LaTeX, re-imports it and runs the checker,
//! then shows the checker rejecting a tampered copy.

use std::sync::Arc;

use focused_smt::frontend::json::{export_proof, import_proof};
use focused_smt::frontend::{latex, parse_dimacs};
use focused_smt::kernel::{machine, KernelConfig};
use focused_smt::plugins::{DpllWl, Plugin};
use focused_smt::proofcheck;
use focused_smt::theories::EmptyTheory;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let problem = parse_dimacs(include_str!("problems/units.cnf"))?;
    let theory = Arc::new(EmptyTheory);
    let config = KernelConfig::new(theory.clone());
    let answer = DpllWl::default().solve(machine(problem.statement.unwrap(), &config)?)?;
    let proof = answer.proof().expect("complementary units are refutable");

    let json = export_proof(proof);
    println!("{json}");
    let back = import_proof(&json)?;
    proofcheck::check(&back, theory.as_ref())?;
    println!("re-imported proof checks");

    print!("{}", latex::render(proof, latex::DEFAULT_NODE_CAP)?);

    let tampered = json.replace("\"Init2\"", "\"Init1\"");
    match proofcheck::check(&import_proof(&tampered)?, theory.as_ref()) {
        Ok(()) => println!("tampering went unnoticed"),
        Err(e) => println!("tampered proof rejected: {e}"),
    }
    Ok(())
}

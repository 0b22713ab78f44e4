//! Parses each bundled problem and prints what the front end made of it.

use focused_smt::frontend::{parse_dimacs, parse_mini_smt, print_dimacs, ParsedProblem};

fn show(name: &str, p: &ParsedProblem) {
    println!("== {name}");
    println!("theory {:?}, expected provable {:?}", p.theory, p.expected);
    for c in p.clauses.iter().flatten() {
        println!("  {c}");
    }
    for w in &p.warnings {
        println!("  warning: {w}");
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (name, text) in [
        ("lra_example.smt2", include_str!("problems/lra_example.smt2")),
        ("congruence.smt2", include_str!("problems/congruence.smt2")),
        ("bounds_sat.smt2", include_str!("problems/bounds_sat.smt2")),
    ] {
        show(name, &parse_mini_smt(text)?);
    }
    let php = parse_dimacs(include_str!("problems/php_3_2.cnf"))?;
    show("php_3_2.cnf", &php);
    print!("{}", print_dimacs(php.clauses.as_ref().unwrap())?);

    println!("== rejected input");
    match parse_mini_smt("(declare-fun x () Int)") {
        Ok(_) => println!("accepted?"),
        Err(e) => println!("{e}"),
    }
    Ok(())
}

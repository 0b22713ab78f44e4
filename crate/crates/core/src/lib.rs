//! Proof search in a focused sequent calculus modulo theories, run by a small
//! trusted kernel and driven by pluggable strategies such as DPLL(T).

pub mod bisim;
pub mod dpll_oracle;
pub mod formulas;
pub mod frontend;
pub mod kernel;
pub mod memo;
pub mod plugins;
pub mod proofcheck;
pub mod theories;

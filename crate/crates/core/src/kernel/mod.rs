//! The trusted kernel: sequents, proof trees, rule application and the
//! coin-driven search state.

mod answer;
mod machine;
mod proof;
mod rules;
mod sequent;

pub use answer::{Answer, AnswerView};
pub use machine::{
    machine, BranchKind, Coin, CoinError, Direction, KernelConfig, KernelError, LegalCoin, Outcome,
    Output, Rejected, Slot,
};
pub use proof::{ProofNode, ProofTree, Rule};
pub use rules::{step_bound, step_statistics, Derivation, Engine, LeafSink, Loss, StepStatistics, Stop};
pub use sequent::{occurs_in, positive_atoms, Sequent};

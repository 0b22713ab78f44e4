//! Search strategies driving the kernel. Plugins are untrusted: they only
//! choose coins, and the answers they return come from the kernel.

mod dpll_wl;
mod interactive;
mod naive;
mod restart;
pub mod watch;

use std::str::FromStr;

use serde::Serialize;

pub use dpll_wl::DpllWl;
pub use interactive::Interactive;
pub use naive::Naive;
pub use restart::{luby, RestartSchedule};
pub use watch::{ClauseStatus, WatchReport, WatchTable};

use crate::kernel::{Answer, Coin, CoinError, Output, Slot};
use crate::memo::MemoStore;

#[derive(Debug, thiserror::Error)]
pub enum PluginError {
    #[error("coin budget of {0} exhausted")]
    CoinBudget(usize),
    #[error("kernel refused {coin}: {error}")]
    Rejected { coin: String, error: CoinError },
    #[error("no coin left to insert on {0}")]
    Stuck(String),
    #[error("input: {0}")]
    Input(String),
    #[error(transparent)]
    Theory(#[from] crate::theories::TheoryError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Counters of one or more solves.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub coins: usize,
    pub memo_hits: usize,
    pub restarts: usize,
    pub learned: usize,
}

#[derive(Clone, Debug)]
pub struct PluginOptions {
    pub memo: bool,
    pub restarts: Option<RestartSchedule>,
    pub coin_budget: usize,
}

impl Default for PluginOptions {
    fn default() -> Self {
        PluginOptions { memo: true, restarts: None, coin_budget: 10_000_000 }
    }
}

pub trait Plugin {
    fn name(&self) -> &'static str;

    /// Drives the kernel from `out` to a jackpot.
    fn solve(&mut self, out: Output) -> Result<Answer, PluginError>;

    fn stats(&self) -> SolveStats;

    fn memo(&self) -> Option<&MemoStore> {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PluginKind {
    Naive,
    DpllWl,
    Interactive,
}

impl FromStr for PluginKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "naive" => Ok(PluginKind::Naive),
            "dpll_wl" | "dpll" => Ok(PluginKind::DpllWl),
            "interactive" => Ok(PluginKind::Interactive),
            other => Err(format!("unknown plugin `{other}` (expected naive, dpll_wl or interactive)")),
        }
    }
}

/// Picks the next coin for the current goal.
pub(crate) trait Chooser {
    fn choose(&mut self, slot: &Slot) -> Result<Coin, PluginError>;

    /// Called when the search restarts from its first output.
    fn reset(&mut self) {}
}

/// The first legal coin that is needed for exhaustiveness.
pub(crate) fn first_mandatory(slot: &Slot) -> Result<Coin, PluginError> {
    slot.legal_coins()
        .into_iter()
        .find(|c| c.is_mandatory())
        .map(|c| c.coin())
        .ok_or_else(|| PluginError::Stuck(slot.goal().to_string()))
}

/// The loop shared by the automatic plugins: memo lookups, learning,
/// restarts and the coin budget.
#[derive(Debug, Default)]
pub(crate) struct Driver {
    pub options: PluginOptions,
    pub memo: MemoStore,
    pub stats: SolveStats,
}

impl Driver {
    pub fn new(options: PluginOptions) -> Self {
        Driver { options, memo: MemoStore::new(), stats: SolveStats::default() }
    }

    fn learn(&mut self, a: &Answer) {
        if self.options.memo && self.memo.insert(a.clone()) {
            self.stats.learned += 1;
        }
    }

    pub fn run(&mut self, out: Output, chooser: &mut dyn Chooser) -> Result<Answer, PluginError> {
        let initial = out.clone();
        let mut out = out;
        let mut schedule = self.options.restarts.as_ref().map(RestartSchedule::intervals);
        let mut next_restart = schedule.as_mut().and_then(|s| s.next());
        let mut since_restart = 0usize;
        let mut used = 0usize;
        loop {
            let slot = match out {
                Output::Jackpot(a) => {
                    self.learn(&a);
                    return Ok(a);
                }
                Output::InsertCoin(s) => s,
            };
            if next_restart.is_some_and(|n| since_restart >= n) {
                out = initial.clone();
                chooser.reset();
                since_restart = 0;
                next_restart = schedule.as_mut().and_then(|s| s.next());
                self.stats.restarts += 1;
                continue;
            }
            let hit = if self.options.memo && slot.goal().is_developed() {
                self.memo.lookup(slot.goal())
            } else {
                None
            };
            let coin = match hit {
                Some(a) => {
                    self.stats.memo_hits += 1;
                    Coin::Memo(a)
                }
                None => chooser.choose(&slot)?,
            };
            if used == self.options.coin_budget {
                return Err(PluginError::CoinBudget(used));
            }
            used += 1;
            since_restart += 1;
            self.stats.coins += 1;
            let shown = format!("{coin:?}");
            out = slot
                .insert(coin)
                .map_err(|r| PluginError::Rejected { coin: shown, error: r.error })?;
            if let Output::InsertCoin(s) = &out {
                for a in s.resolved().to_vec() {
                    self.learn(&a);
                }
            }
        }
    }
}

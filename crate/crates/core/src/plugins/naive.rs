use super::{first_mandatory, Chooser, Driver, Plugin, PluginError, PluginOptions, SolveStats};
use crate::kernel::{Answer, Coin, Output, Slot};
use crate::memo::MemoStore;

/// Inserts the first needed coin whenever asked: a depth-first, exhaustive
/// search in the fixed legal-coin order.
#[derive(Debug, Default)]
pub struct Naive {
    driver: Driver,
}

struct FirstCoin;

impl Chooser for FirstCoin {
    fn choose(&mut self, slot: &Slot) -> Result<Coin, PluginError> {
        first_mandatory(slot)
    }
}

impl Naive {
    pub fn new(options: PluginOptions) -> Self {
        Naive { driver: Driver::new(options) }
    }
}

impl Plugin for Naive {
    fn name(&self) -> &'static str {
        "naive"
    }

    fn solve(&mut self, out: Output) -> Result<Answer, PluginError> {
        self.driver.run(out, &mut FirstCoin)
    }

    fn stats(&self) -> SolveStats {
        self.driver.stats
    }

    fn memo(&self) -> Option<&MemoStore> {
        Some(&self.driver.memo)
    }
}

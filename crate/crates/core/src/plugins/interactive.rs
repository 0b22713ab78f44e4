use std::io::{BufRead, Write};

use super::{Plugin, PluginError, SolveStats};
use crate::kernel::{Answer, Output};

/// Lets a person choose every coin: prints the current goal with the legal
/// coin ids and reads one id per line.
pub struct Interactive<R, W> {
    input: R,
    output: W,
    stats: SolveStats,
}

impl<R: BufRead, W: Write> Interactive<R, W> {
    pub fn new(input: R, output: W) -> Self {
        Interactive { input, output, stats: SolveStats::default() }
    }
}

impl<R: BufRead, W: Write> Plugin for Interactive<R, W> {
    fn name(&self) -> &'static str {
        "interactive"
    }

    fn solve(&mut self, out: Output) -> Result<Answer, PluginError> {
        let mut out = out;
        loop {
            let slot = match out {
                Output::Jackpot(a) => {
                    writeln!(self.output, "jackpot: {}", if a.is_provable() { "provable" } else { "not provable" })?;
                    return Ok(a);
                }
                Output::InsertCoin(s) => s,
            };
            let legal = slot.legal_coins();
            writeln!(self.output, "goal: {}", slot.goal())?;
            for c in &legal {
                writeln!(self.output, "  {c}")?;
            }
            write!(self.output, "> ")?;
            self.output.flush()?;
            let mut line = String::new();
            if self.input.read_line(&mut line)? == 0 {
                return Err(PluginError::Input("input ended before a jackpot".into()));
            }
            let id = line.trim();
            let Some(coin) = legal.iter().find(|c| c.id() == id) else {
                writeln!(self.output, "unknown coin `{id}`")?;
                out = Output::InsertCoin(slot);
                continue;
            };
            self.stats.coins += 1;
            out = match slot.insert(coin.coin()) {
                Ok(o) => o,
                Err(r) => {
                    writeln!(self.output, "refused: {}", r.error)?;
                    Output::InsertCoin(r.slot)
                }
            };
        }
    }

    fn stats(&self) -> SolveStats {
        self.stats
    }
}

//! The `focus` command line.

use std::ffi::OsString;
use std::io::{self, Write};
use std::net::TcpListener;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};

use super::{json, latex, parse_dimacs, parse_mini_smt, serve, ParsedProblem};
use crate::kernel::{machine, KernelConfig};
use crate::plugins::{DpllWl, Interactive, Naive, Plugin, PluginKind, PluginOptions, RestartSchedule};
use crate::proofcheck;
use crate::theories::TheoryKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Dimacs,
    Smt,
}

/// Decides clause sets modulo a theory by focused proof search.
#[derive(Debug, Parser)]
#[command(name = "focus", version)]
pub struct Args {
    /// Problem file (`.cnf` for DIMACS, `.smt2` for the SMT-LIB fragment).
    pub input: PathBuf,
    /// Input format; guessed from the extension when absent.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Decision procedure: empty, lra or cc. Defaults to the logic of the input.
    #[arg(long)]
    pub theory: Option<TheoryKind>,
    /// Search strategy: naive, dpll_wl or interactive.
    #[arg(long, default_value = "dpll_wl")]
    pub plugin: PluginKind,
    /// Disable memoisation of solved sequents
    #[arg(long)]
    pub no_memo: bool,
    /// Forbid cuts (and so DPLL decisions).
    #[arg(long)]
    pub no_cuts: bool,
    /// Restart schedule: `10,20,40`, `geom:BASE:FACTOR` or `luby:UNIT`.
    #[arg(long)]
    pub restarts: Option<RestartSchedule>,
    /// Write the proof as JSON.
    #[arg(long, value_name = "PATH")]
    pub proof_out: Option<PathBuf>,
    /// Print the proof as a bussproofs tree.
    #[arg(long)]
    pub latex: bool,
    /// Serve interactive sessions on this port instead of solving.
    #[arg(long, value_name = "PORT")]
    pub serve: Option<u16>,
    /// Print the memo table after solving.
    #[arg(long)]
    pub memo_dump: bool,
    /// Print search counters as JSON.
    #[arg(long)]
    pub stats: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}: {1}")]
    Read(PathBuf, io::Error),
    #[error("cannot tell the format of {0}; pass --format")]
    UnknownFormat(PathBuf),
    #[error(transparent)]
    Parse(#[from] super::ParseError),
    #[error("the input has no complete problem")]
    NoStatement,
    #[error(transparent)]
    Kernel(#[from] crate::kernel::KernelError),
    #[error(transparent)]
    Plugin(#[from] crate::plugins::PluginError),
    #[error("proof failed to check: {0}")]
    Check(#[from] proofcheck::CheckFailure),
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn guess_format(path: &Path) -> Option<Format> {
    match path.extension()?.to_str()? {
        "cnf" | "dimacs" => Some(Format::Dimacs),
        "smt2" | "smt" => Some(Format::Smt),
        _ => None,
    }
}

pub fn load(path: &Path, format: Option<Format>) -> Result<ParsedProblem, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Read(path.to_path_buf(), e))?;
    let format = format.or_else(|| guess_format(path)).ok_or_else(|| CliError::UnknownFormat(path.to_path_buf()))?;
    Ok(match format {
        Format::Dimacs => parse_dimacs(&text)?,
        Format::Smt => parse_mini_smt(&text)?,
    })
}

/// Exit statuses: 0 when solved (and matching any expected answer), 2 on a
/// mismatch with the expected answer, 1 on any error.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return 1;
            }
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    match solve(&args, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn solve(args: &Args, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let problem = load(&args.input, args.format)?;
    for w in &problem.warnings {
        writeln!(err, "warning: {w}")?;
    }
    let statement = problem.statement.ok_or(CliError::NoStatement)?;
    let theory = args.theory.or(problem.theory).unwrap_or_default();
    let config = KernelConfig::new(theory.instantiate()).with_cuts(!args.no_cuts);

    if let Some(port) = args.serve {
        let listener = TcpListener::bind(("127.0.0.1", port))?;
        writeln!(out, "listening on {}", listener.local_addr()?)?;
        serve::serve(listener, statement, config, None)?;
        return Ok(0);
    }

    let options = PluginOptions {
        memo: !args.no_memo,
        restarts: args.restarts.clone(),
        ..PluginOptions::default()
    };
    let mut plugin: Box<dyn Plugin> = match args.plugin {
        PluginKind::Naive => Box::new(Naive::new(options)),
        PluginKind::DpllWl => Box::new(DpllWl::new(options)),
        PluginKind::Interactive => Box::new(Interactive::new(io::stdin().lock(), io::stderr())),
    };
    let answer = plugin.solve(machine(statement, &config)?)?;
    proofcheck::check_answer(&answer, config.theory.as_ref())?;

    writeln!(out, "{}", if answer.is_provable() { "PROVABLE" } else { "NOTPROVABLE" })?;
    let mut code = 0;
    if let Some(expected) = problem.expected {
        let ok = expected == answer.is_provable();
        writeln!(out, "{}", if ok { "OK" } else { "MISMATCH" })?;
        if !ok {
            code = 2;
        }
    }
    if let Some(proof) = answer.proof() {
        if let Some(path) = &args.proof_out {
            std::fs::write(path, json::export_proof(proof))?;
        }
        if args.latex {
            match latex::render(proof, latex::DEFAULT_NODE_CAP) {
                Ok(tex) => write!(out, "{tex}")?,
                Err(e) => writeln!(err, "latex skipped: {e}")?,
            }
        }
    }
    if args.memo_dump {
        if let Some(memo) = plugin.memo() {
            write!(out, "{}", memo.dump())?;
        }
    }
    if args.stats {
        let stats = serde_json::to_string(&plugin.stats()).expect("counters serialise");
        writeln!(out, "{stats}")?;
    }
    Ok(code)
}

//! Command-line experiment runner for distributed Grover search.
//!
//! Exit codes: 0 success, 2 invalid arguments or configuration, 3 internal
//! invariant breach, 4 output could not be written.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use probe_grover::{
    compare_strategies, run_batch, ComparisonRow, ComparisonTable, Error, ExperimentConfig,
    Strategy, TrialSummary, DEFAULT_REPEAT_ROUNDS,
};
use serde::{Deserialize, Serialize};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Probe,
    Verify,
    Repeat,
    Sequential,
    All,
}

impl StrategyArg {
    fn strategies(self) -> Vec<Strategy> {
        match self {
            StrategyArg::Probe => vec![Strategy::Probe],
            StrategyArg::Verify => vec![Strategy::SemiclassicalVerify],
            StrategyArg::Repeat => vec![Strategy::SemiclassicalRepeat],
            StrategyArg::Sequential => vec![Strategy::Sequential],
            StrategyArg::All => Strategy::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(
    name = "probe-grover",
    version,
    about = "Seeded trials of distributed Grover search strategies"
)]
pub struct Args {
    /// Database size N (power of two).
    #[arg(long)]
    pub db_size: usize,
    /// Number of sub-systems M (power of two dividing N).
    #[arg(long, default_value_t = 1)]
    pub subsystems: usize,
    /// Marked global indices, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub marked: Vec<usize>,
    #[arg(long, value_enum, default_value_t = StrategyArg::All)]
    pub strategy: StrategyArg,
    /// Rounds per sub-system for the repeat strategy.
    #[arg(long, default_value_t = DEFAULT_REPEAT_ROUNDS)]
    pub repeat_rounds: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Master seed; every trial and sub-system stream derives from it.
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Configuration as echoed in the output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub db_size: usize,
    pub subsystems: usize,
    pub marked: BTreeSet<usize>,
    pub strategies: Vec<Strategy>,
    pub repeat_rounds: usize,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputEnvelope {
    pub config: ConfigEcho,
    pub summaries: Vec<TrialSummary>,
    pub comparison: ComparisonTable,
    pub seed: u64,
    pub version: String,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Internal(String),
    #[error("cannot write output: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Internal(_) => EXIT_INTERNAL,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::Usage(_) | Error::Domain(_) | Error::Size(_) => {
                CliError::Config(e.to_string())
            }
            Error::Protocol(_) | Error::Invariant(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => CliError::Io(io),
            other => CliError::Internal(format!("{other:?}")),
        }
    }
}

impl Args {
    fn config_for(&self, strategy: Strategy) -> ExperimentConfig {
        ExperimentConfig {
            db_size: self.db_size,
            num_subsystems: self.subsystems,
            global_marked: self.marked.iter().copied().collect(),
            strategy,
            repeat_rounds: self.repeat_rounds,
            seed: self.seed,
            trials: self.trials,
        }
    }
}

/// Validates every requested strategy before any trial runs, then runs the
/// batches and assembles the envelope.
pub fn build_envelope(args: &Args) -> Result<OutputEnvelope, CliError> {
    let strategies = args.strategy.strategies();
    let configs: Vec<ExperimentConfig> = strategies.iter().map(|&s| args.config_for(s)).collect();
    for cfg in &configs {
        cfg.validate()?;
    }
    let summaries = configs
        .iter()
        .map(run_batch)
        .collect::<Result<Vec<_>, _>>()?;
    let comparison = if summaries.len() >= 2 {
        compare_strategies(&summaries)?
    } else {
        summaries.iter().map(ComparisonRow::from).collect()
    };
    Ok(OutputEnvelope {
        config: ConfigEcho {
            db_size: args.db_size,
            subsystems: args.subsystems,
            marked: args.marked.iter().copied().collect(),
            strategies,
            repeat_rounds: args.repeat_rounds,
            trials: args.trials,
        },
        summaries,
        comparison,
        seed: args.seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

/// Serializes the envelope. JSON is one pretty-printed object with fields
/// in declaration order; CSV is the comparison table, one row per strategy.
pub fn emit_report<W: Write>(
    envelope: &OutputEnvelope,
    format: Format,
    out: W,
) -> Result<(), CliError> {
    if envelope.summaries.is_empty() {
        return Err(CliError::Config("no trial summaries to emit".into()));
    }
    match format {
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, envelope).map_err(io::Error::from)?;
            writeln!(out)?;
            out.flush()?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in &envelope.comparison {
                w.serialize(row)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn execute(args: &Args, stdout: &mut dyn Write) -> Result<(), CliError> {
    let envelope = build_envelope(args)?;
    match &args.out {
        Some(path) => {
            let file = File::create(path)?;
            emit_report(&envelope, args.format, BufWriter::new(file))
        }
        None => emit_report(&envelope, args.format, stdout),
    }
}

/// Parses `argv` (including the program name), runs, and returns the exit
/// code. Diagnostics go to `stderr`.
pub fn run_command<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(args) => args,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(&args, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "probe-grover: {e}");
            e.exit_code()
        }
    }
}

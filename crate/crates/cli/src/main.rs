use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use clustagree::oracle::DEFAULT_SCAN_N_MAX;
use clustagree::{IndexKind, Objective, DEFAULT_BUDGET};
use clustagree_cli::commands::{self, TableSource};
use clustagree_cli::error::CliError;
use clustagree_cli::report::RunReport;

#[derive(Parser)]
#[command(
    name = "clustagree",
    version,
    about = "Pair-counting agreement indices and their extrema under fixed marginals"
)]
struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SourceArgs {
    /// Two-column labels file, one observation per line.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Counts file, one table row per line.
    #[arg(long)]
    table: Option<PathBuf>,
}

impl SourceArgs {
    fn source(&self) -> TableSource {
        match (&self.labels, &self.table) {
            (Some(p), _) => TableSource::Labels(p.clone()),
            (_, Some(p)) => TableSource::Counts(p.clone()),
            _ => unreachable!("clap requires one source"),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Rand,
    AdjustedRand,
    Jaccard,
    FowlkesMallows,
}

impl From<KindArg> for IndexKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Rand => IndexKind::Rand,
            KindArg::AdjustedRand => IndexKind::AdjustedRand,
            KindArg::Jaccard => IndexKind::Jaccard,
            KindArg::FowlkesMallows => IndexKind::FowlkesMallows,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Max,
    Min,
}

#[derive(Subcommand)]
enum Command {
    /// Contingency table, pair counts, Q and all four indices.
    Table(SourceArgs),
    /// Closed-form extremal 2x2 tables for the given marginals.
    Extremes {
        #[arg(long)]
        rows: String,
        #[arg(long)]
        cols: String,
    },
    /// Raw, expected and adjusted index values.
    Adjusted {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_enum, default_value = "adjusted-rand")]
        kind: KindArg,
        /// Find the maximum Q by enumeration (needed beyond 2x2).
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Enumerate all tables with the given marginals and report the extremum.
    Enumerate {
        #[arg(long)]
        rows: String,
        #[arg(long)]
        cols: String,
        #[arg(long, value_enum, default_value = "max")]
        objective: ObjectiveArg,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Exhaustive 3x3 containment scan.
    ScanConjecture {
        #[arg(long, default_value_t = DEFAULT_SCAN_N_MAX)]
        n_max: i64,
        /// Per-spec enumeration budget.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Include wall-clock time in the report (makes it non-reproducible).
        #[arg(long)]
        timing: bool,
    },
}

fn run(command: &Command) -> Result<RunReport, CliError> {
    match command {
        Command::Table(source) => commands::cmd_table(&source.source()),
        Command::Extremes { rows, cols } => commands::cmd_extremes(rows, cols),
        Command::Adjusted {
            source,
            kind,
            oracle,
            budget,
        } => commands::cmd_adjusted(&source.source(), (*kind).into(), *oracle, *budget),
        Command::Enumerate {
            rows,
            cols,
            objective,
            budget,
        } => {
            let objective = match objective {
                ObjectiveArg::Max => Objective::Maximum,
                ObjectiveArg::Min => Objective::Minimum,
            };
            commands::cmd_enumerate(rows, cols, objective, *budget)
        }
        Command::ScanConjecture {
            n_max,
            budget,
            timing,
        } => {
            let out = commands::cmd_scan_conjecture(*n_max, *budget, *timing)?;
            eprintln!("{}", out.summary);
            Ok(out.report)
        }
    }
}

fn emit(report: &RunReport, out: Option<&PathBuf>) -> Result<(), CliError> {
    let text = report.to_json();
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli.command).and_then(|report| emit(&report, cli.out.as_ref()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Budget { partial, .. } = &e {
                if let Err(write_err) = emit(partial, cli.out.as_ref()) {
                    eprintln!("error: {write_err}");
                }
            }
            ExitCode::from(e.exit_code())
        }
    }
}

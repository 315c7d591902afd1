use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mixcount::cli::{self, Csv, Experiment, Settings};
use mixcount::{Budget, Error, Execution, LogBase};

#[derive(Parser)]
#[command(name = "mixcount", version, about = "Exact anonymity metrics for threshold-mix rounds")]
struct Args {
    /// Write CSV output to PATH instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Cap on enumerated tables, polynomial terms, DP states and partitions.
    #[arg(long, global = true, value_name = "N")]
    budget: Option<u64>,
    /// Base for printed logarithms (degrees are base-independent).
    #[arg(long, global = true, default_value = "e", value_parser = ["e", "2", "10"])]
    log_base: String,
    /// Decimal places for printed degrees.
    #[arg(long, global = true, default_value_t = 3, value_name = "K")]
    precision: usize,
    /// Run everything on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact count and degree for SENDERS;RECEIVERS, e.g. "3,3,2;5,3".
    Count { profile: String },
    /// Every sender/receiver partition pair of N messages as CSV.
    Table { n: u32 },
    /// Equivalence classes of matchings with their cardinalities.
    Classes { profile: String },
    /// All metrics side by side for one profile.
    Compare { profile: String },
    /// Series for fig1, fig2, fig5, fig6, saturation or ranking as CSV.
    Experiment { name: String },
    /// Reports for a round,role,user,count log.
    Ingest {
        log: PathBuf,
        #[arg(long)]
        round: Option<String>,
    },
}

fn emit_text(text: &str) -> mixcount::Result<()> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        out.write_all(b"\n")?;
    }
    Ok(())
}

fn emit_csv(csv: &Csv, output: Option<&PathBuf>) -> mixcount::Result<()> {
    match output {
        Some(path) => csv.write_to(BufWriter::new(File::create(path)?)),
        None => csv.write_to(io::stdout().lock()),
    }
}

fn run(args: Args) -> mixcount::Result<()> {
    let mut budget = Budget::default();
    if let Some(limit) = args.budget {
        budget = budget.with_enumeration_limit(limit);
    }
    let settings = Settings {
        budget,
        precision: args.precision,
        log_base: args.log_base.parse::<LogBase>()?,
        exec: if args.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
    };
    let output = args.output.as_ref();
    match args.command {
        Command::Count { profile } => emit_text(&cli::cmd_count(&profile, &settings)?),
        Command::Table { n } => emit_csv(&cli::cmd_table(n, &settings)?, output),
        Command::Classes { profile } => emit_text(&cli::cmd_classes(&profile, &settings)?),
        Command::Compare { profile } => emit_text(&cli::cmd_compare(&profile, &settings)?),
        Command::Experiment { name } => {
            let which: Experiment = name.parse()?;
            emit_csv(&cli::cmd_experiment(which, &settings)?, output)
        }
        Command::Ingest { log, round } => {
            let file = File::open(&log).map_err(|e| Error::Io(format!("{}: {e}", log.display())))?;
            let reports = cli::ingest(io::BufReader::new(file), round.as_deref(), &settings)?;
            match output {
                Some(_) => emit_csv(&cli::ingest_csv(&reports, &settings), output),
                None => {
                    let text = cli::ingest_lines(&reports, &settings);
                    io::stdout().lock().write_all(text.as_bytes())?;
                    Ok(())
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

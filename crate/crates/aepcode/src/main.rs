//! Command-line harness: parameter sweeps, partition summaries, and
//! exponent reports.
//!
//! Exit codes: 0 on success, 1 on configuration errors, 2 on I/O errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use aepcode::source::parse_pmf;
use aepcode::sweep::{analyze_cells, emit_csv, emit_json, emit_sequence_files, run_sweep, SweepConfig};
use aepcode::typicality::partition_sequences;
use aepcode::Error;

#[derive(Parser)]
#[command(name = "aepcode", version, about = "Typical-set block coding with clustered atypical fallback")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run every (n, epsilon, k) cell of a sweep config and write results.
    Sweep {
        /// Path to the JSON sweep config.
        #[arg(long)]
        config: PathBuf,
        /// Output path; overrides the config's output_path.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
        /// Override the config's base seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Also write full typical/atypical sequence lists per (n, epsilon).
        #[arg(long)]
        emit_sequences: bool,
    },
    /// Print the typical/atypical partition summary for one instance.
    Partition {
        /// Comma-separated pmf, e.g. 0.2,0.8.
        #[arg(long)]
        pmf: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: String,
        /// Write full sequence lists as CSV next to --out.
        #[arg(long)]
        emit_sequences: bool,
        /// Stem for sequence CSVs (<out>.typical.csv, <out>.atypical.csv).
        #[arg(long, default_value = "partition")]
        out: PathBuf,
    },
    /// Print exponent reports for every cell of a sweep config.
    Analyze {
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

/// 1 for configuration problems, 2 for I/O problems.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io(_) => 2,
        Error::Csv(csv_err) if matches!(csv_err.kind(), csv::ErrorKind::Io(_)) => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> aepcode::Result<()> {
    match cli.command {
        Command::Sweep {
            config,
            out,
            format,
            seed,
            emit_sequences,
        } => {
            let mut config = SweepConfig::from_path(&config)?;
            if let Some(seed) = seed {
                config.base_seed = seed;
            }
            if emit_sequences {
                config.emit_sequences = true;
            }
            let out = out
                .or_else(|| config.output_path.clone().map(PathBuf::from))
                .ok_or_else(|| {
                    Error::Config("no output path: pass --out or set output_path".into())
                })?;
            let rows = run_sweep(&config)?;
            match format {
                OutputFormat::Csv => emit_csv(&rows, &out)?,
                OutputFormat::Json => emit_json(&rows, &out)?,
            }
            if config.emit_sequences {
                let stem = out.with_extension("");
                let written = emit_sequence_files(&config, &stem)?;
                for path in written {
                    eprintln!("wrote {}", path.display());
                }
            }
            eprintln!("wrote {} rows to {}", rows.len(), out.display());
            Ok(())
        }
        Command::Partition {
            pmf,
            n,
            eps,
            emit_sequences,
            out,
        } => {
            let model = parse_pmf(&pmf)?;
            let epsilon: f64 = eps
                .parse()
                .map_err(|_| Error::Config(format!("epsilon {eps:?} is not a decimal")))?;
            let partition = partition_sequences(&model, n, epsilon)?;
            println!("{}", serde_json::to_string_pretty(&partition.summary())?);
            if emit_sequences {
                let base = out.to_string_lossy();
                let typical = PathBuf::from(format!("{base}.typical.csv"));
                let atypical = PathBuf::from(format!("{base}.atypical.csv"));
                partition.write_sequence_csvs(&typical, &atypical)?;
                eprintln!("wrote {} and {}", typical.display(), atypical.display());
            }
            Ok(())
        }
        Command::Analyze { config } => {
            let config = SweepConfig::from_path(&config)?;
            let reports = analyze_cells(&config)?;
            println!("{}", serde_json::to_string_pretty(&reports)?);
            Ok(())
        }
    }
}

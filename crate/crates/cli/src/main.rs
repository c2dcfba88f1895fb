use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dft_cli::commands::{self, Outcome};
use dft_cli::error::CliError;
use dft_cli::sweep::{run_sweep, SweepConfig};
use dft_cli::verify::verify;
use dft_core::Bounds;
use serde_json::json;

#[derive(Parser)]
#[command(name = "dft", about = "Discriminant forms, isotropic lifts and small type")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Order, level, signature and isotropic counts of a form.
    Info { symbol: String },
    /// Small-type verdict with the matched rule.
    Classify { symbol: String },
    /// Rank of the span of all isotropic lifts.
    Image {
        symbol: String,
        #[arg(long)]
        per_element: bool,
        #[arg(long)]
        witnesses: bool,
    },
    /// Isotropy graph of a 2-adic form.
    Graph {
        symbol: String,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Weil representation matrices, or exact relation checks with --check.
    Weil {
        symbol: String,
        #[arg(long)]
        check: bool,
    },
    /// Classifier against the lift span over every enumerated symbol, written as JSONL.
    ClassifySweep {
        #[arg(long)]
        max_order: u64,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5,7")]
        primes: Vec<u64>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        resume: bool,
        #[arg(long)]
        witnesses: bool,
    },
    /// Run a named invariant suite: relations, lemmas or constructions.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        max_order: Option<u64>,
    },
}

fn bounds() -> Result<Bounds, CliError> {
    for name in ["DFT_MAX_SPAN_ORDER", "DFT_MAX_ENUM_ORDER"] {
        if let Ok(v) = std::env::var(name) {
            if !matches!(v.trim().parse::<usize>(), Ok(n) if n > 0) {
                return Err(CliError::input(
                    "InvalidConfig",
                    format!("{name} must be a positive integer, got {v:?}"),
                ));
            }
        }
    }
    Ok(Bounds::from_env())
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let b = bounds()?;
    match cli.command {
        Command::Info { symbol } => commands::info(&symbol, &b),
        Command::Classify { symbol } => commands::classify(&symbol),
        Command::Image {
            symbol,
            per_element,
            witnesses,
        } => commands::image(&symbol, per_element, witnesses, &b),
        Command::Graph { symbol, dot } => commands::graph(&symbol, dot.as_deref(), &b),
        Command::Weil { symbol, check } => commands::weil(&symbol, check, &b),
        Command::ClassifySweep {
            max_order,
            primes,
            out,
            jobs,
            resume,
            witnesses,
        } => {
            let cfg = SweepConfig {
                max_order,
                primes,
                bounds: b,
                jobs,
                out: out.clone(),
                resume,
                witnesses,
            };
            let r = run_sweep(&cfg)?;
            Ok(Outcome {
                json: json!({"out": out.display().to_string(), "summary": r.summary}),
                code: r.code,
            })
        }
        Command::Verify { suite, max_order } => verify(&suite, max_order, &b),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::input("UsageError", e.to_string().trim_end());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.code as u8);
        }
    };
    match run(cli) {
        Ok(o) => {
            let text = serde_json::to_string_pretty(&o.json).expect("JSON output");
            // a closed pipe on stdout is not an error of ours
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::from(o.code as u8)
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.code as u8)
        }
    }
}

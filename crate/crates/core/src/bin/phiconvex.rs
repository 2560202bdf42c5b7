use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use phiconvex::catalog;
use phiconvex::cli::{run_file, RunOptions, EXIT_ERROR};
use phiconvex::parse;

#[derive(Parser)]
#[command(name = "phiconvex", version, about = "Numerical checks for phi-generalized convexity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every task in a JSON spec file and write a JSON report.
    Run {
        spec: PathBuf,
        /// Report path (default: <spec>.report.json).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed for every task, overriding spec seeds and PHICONVEX_SEED.
        #[arg(long)]
        seed: Option<u64>,
        /// Run independent tasks concurrently.
        #[arg(long)]
        parallel: bool,
    },
    /// List the built-in reference catalog.
    Catalog {
        #[arg(long)]
        json: bool,
    },
    /// Evaluate an expression at a point.
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, allow_negative_numbers = true)]
        at: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            spec,
            out,
            seed,
            parallel,
        } => {
            let report = match run_file(&spec, &RunOptions { seed, parallel }) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("phiconvex: {}: {e}", spec.display());
                    return ExitCode::from(EXIT_ERROR as u8);
                }
            };
            let out = out.unwrap_or_else(|| spec.with_extension("report.json"));
            let written = report
                .to_json()
                .and_then(|json| std::fs::write(&out, json + "\n").map_err(Into::into));
            if let Err(e) = written {
                eprintln!("phiconvex: cannot write {}: {e}", out.display());
                return ExitCode::from(EXIT_ERROR as u8);
            }
            print!("{}", report.summary_table());
            println!("report: {}", out.display());
            ExitCode::from(report.exit_code as u8)
        }
        Command::Catalog { json } => {
            if json {
                let entries = catalog::all();
                match serde_json::to_string_pretty(&entries) {
                    Ok(s) => println!("{s}"),
                    Err(e) => {
                        eprintln!("phiconvex: {e}");
                        return ExitCode::from(EXIT_ERROR as u8);
                    }
                }
            } else {
                print!("{}", catalog::render_table());
            }
            ExitCode::SUCCESS
        }
        Command::Eval { expr, at } => match parse(&expr).map_err(phiconvex::Error::from).and_then(|e| {
            e.eval(at).map_err(Into::into)
        }) {
            Ok(v) => {
                println!("{v}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("phiconvex: {e}");
                ExitCode::from(EXIT_ERROR as u8)
            }
        },
    }
}

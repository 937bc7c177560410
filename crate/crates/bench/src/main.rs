use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use covroute::UavParams;
use covroute_bench::{scaling_probe, scaling_tsv, sweep, ExperimentSpec, ProbeSpec};

#[derive(Debug, Parser)]
#[command(name = "covroute-bench", about = "Sweeps and scaling probes for covroute")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Run a sweep described by a JSON experiment spec.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        /// Overrides the spec's output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Median planning time across map sizes.
    Scaling {
        #[arg(long = "M", value_delimiter = ',', default_values_t = [5, 10, 20, 40])]
        m: Vec<usize>,
        #[arg(long = "N", value_delimiter = ',', default_values_t = [2])]
        n: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long, default_value_t = 10_000.0)]
        size: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(String, Option<PathBuf>), String> {
    match cli.command {
        Cmd::Sweep { spec, out } => {
            let text = std::fs::read_to_string(&spec).map_err(|e| format!("{}: {e}", spec.display()))?;
            let spec: ExperimentSpec = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", spec.display()))?;
            let table = sweep(&spec).map_err(|e| e.to_string())?;
            Ok((table.to_tsv(), out.or(spec.out)))
        }
        Cmd::Scaling {
            m,
            n,
            reps,
            size,
            seed,
            out,
        } => {
            let probe = ProbeSpec {
                seed,
                size,
                repetitions: reps,
            };
            let rows = scaling_probe(&m, &n, probe, &UavParams::reference()).map_err(|e| e.to_string())?;
            Ok((scaling_tsv(&rows), out))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((text, None)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok((text, Some(path))) => match std::fs::write(&path, text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                ExitCode::from(1)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

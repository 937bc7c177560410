//! Library side of the `covroute` binary: argument types, document I/O and
//! the subcommands. `run` returns the text to emit and whether the request
//! was satisfiable, leaving exit codes to `main`.

pub mod doc;
pub mod svg;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use covroute::mapgen::{generate_map, MapSpec};
use covroute::{
    max_payload, plan_min_energy, plan_min_time, plan_unlimited, validate_trajectory, PayloadQuery, UavParams,
};
use serde::de::DeserializeOwned;
use serde::Serialize;

use doc::{resolve_d0, CoverageInput, MapDocument, PlanDocument};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] covroute::Error),
}

#[derive(Debug, Parser)]
#[command(
    name = "covroute",
    version,
    about = "Coverage- and battery-constrained UAV trajectory planning"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlanObjective {
    /// Minimum time with battery swaps.
    Time,
    /// Minimum time ignoring the battery.
    TimeUnlimited,
    /// Minimum propulsion energy with battery swaps.
    Energy,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the base coverage radius of a map or link-parameter document.
    Coverage {
        #[arg(long)]
        map: PathBuf,
    },
    /// Plan a trajectory.
    Plan {
        #[arg(long)]
        map: PathBuf,
        #[arg(long, value_enum, default_value = "time")]
        objective: PlanObjective,
        /// UAV parameters; the reference UAV when omitted.
        #[arg(long)]
        uav: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Heaviest payload that can be delivered.
    Payload {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        uav: Option<PathBuf>,
        /// Payload step (kg).
        #[arg(long = "eps-w")]
        eps_w: f64,
        /// Number of steps above zero.
        #[arg(long = "k-max")]
        k_max: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a plan document against the map and UAV.
    Validate {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        trajectory: PathBuf,
        #[arg(long)]
        uav: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw the map, and a plan if given, as SVG.
    Plot {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        trajectory: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a random map that the planner can solve.
    Gen {
        #[arg(long)]
        seed: u64,
        /// Base stations.
        #[arg(long = "M")]
        m: usize,
        /// Charging stations.
        #[arg(long = "N")]
        n: usize,
        /// Side of the square region (m).
        #[arg(long, default_value_t = 10_000.0)]
        size: f64,
        #[arg(long)]
        uav: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// What a command produced.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    /// False when the request was infeasible or a check failed.
    pub ok: bool,
    pub out: Option<PathBuf>,
}

fn read<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn read_map(path: &Path) -> Result<covroute::NetworkMap, CliError> {
    read::<MapDocument>(path)?
        .to_map()
        .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn read_uav(path: Option<&Path>) -> Result<UavParams, CliError> {
    let uav = match path {
        Some(p) => read(p)?,
        None => UavParams::reference(),
    };
    uav.validate()?;
    Ok(uav)
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Coverage { map } => {
            let input: CoverageInput = read(&map)?;
            let d0 = resolve_d0(input.d0, input.comm.as_ref())?;
            Ok(Outcome {
                text: format!("{d0}\n"),
                ok: true,
                out: None,
            })
        }
        Command::Plan {
            map,
            objective,
            uav,
            out,
        } => {
            let map = read_map(&map)?;
            let uav = read_uav(uav.as_deref())?;
            let (name, plan) = match objective {
                PlanObjective::Time => ("time", plan_min_time(&map, &uav)?),
                PlanObjective::TimeUnlimited => ("time-unlimited", plan_unlimited(&map, uav.speeds.max())?),
                PlanObjective::Energy => ("energy", plan_min_energy(&map, &uav)?),
            };
            Ok(Outcome {
                text: json(&PlanDocument::new(name, &plan, &uav)),
                ok: plan.feasible,
                out,
            })
        }
        Command::Payload {
            map,
            uav,
            eps_w,
            k_max,
            out,
        } => {
            let map = read_map(&map)?;
            let uav = read_uav(uav.as_deref())?;
            let r = max_payload(&map, &uav, &PayloadQuery { eps_w, k_max })?;
            Ok(Outcome {
                text: json(&r),
                ok: r.feasible,
                out,
            })
        }
        Command::Validate {
            map,
            trajectory,
            uav,
            out,
        } => {
            let map = read_map(&map)?;
            let uav = read_uav(uav.as_deref())?;
            let plan: PlanDocument = read(&trajectory)?;
            let report = validate_trajectory(&map, &uav, &plan.trajectory());
            Ok(Outcome {
                text: json(&report),
                ok: report.pass,
                out,
            })
        }
        Command::Plot { map, trajectory, out } => {
            let map = read_map(&map)?;
            let traj = match trajectory {
                Some(p) => Some(read::<PlanDocument>(&p)?.trajectory()),
                None => None,
            };
            Ok(Outcome {
                text: svg::render(&map, traj.as_ref()),
                ok: true,
                out,
            })
        }
        Command::Gen {
            seed,
            m,
            n,
            size,
            uav,
            out,
        } => {
            let uav = read_uav(uav.as_deref())?;
            let map = generate_map(&MapSpec::new(seed, m, n, size), &uav)?;
            Ok(Outcome {
                text: json(&MapDocument::from_map(&map)),
                ok: true,
                out,
            })
        }
    }
}

/// Writes the outcome to its file or stdout.
pub fn emit(outcome: &Outcome) -> Result<(), CliError> {
    match &outcome.out {
        Some(path) => fs::write(path, &outcome.text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(outcome.text.as_bytes())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

//! `topa`: solve, inspect and evaluate UAV placements from scenario files.
//!
//! Every run ends with a `status=<ok|infeasible|input-error>` line and exits
//! with 0, 1 or 2 respectively.

mod commands;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use topa_core::Point3;

use commands::{CommandOutcome, Status, TraceArgs};

#[derive(Parser)]
#[command(name = "topa", version, about = "Traffic- and obstacle-aware UAV positioning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find the minimal transmit power and a UAV position with LoS to every UE.
    Solve {
        #[arg(long)]
        scenario: PathBuf,
        /// Solution JSON output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Coarse grid spacing in meters.
        #[arg(long, default_value_t = 1.0)]
        resolution: f64,
    },
    /// Report per-UE line of sight from a UAV position.
    CheckLos {
        #[arg(long)]
        scenario: PathBuf,
        /// UAV position as x,y,z in meters.
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        position: Point3,
    },
    /// Compare candidate positions by aggregate throughput.
    Evaluate {
        #[arg(long)]
        scenario: PathBuf,
        /// JSON file with named candidate positions.
        #[arg(long)]
        positions: PathBuf,
        /// Summary CSV; trace and CCDF files are written next to it.
        #[arg(long)]
        out: PathBuf,
        /// Trace length in seconds.
        #[arg(long)]
        trace: Option<u32>,
        #[arg(long, default_value_t = 0.0, requires = "trace")]
        jitter: f64,
        #[arg(long, default_value_t = 0, requires = "trace")]
        seed: u64,
    },
    /// Write the feasible lattice points at a fixed transmit power.
    Region {
        #[arg(long)]
        scenario: PathBuf,
        /// Transmit power in dBm.
        #[arg(long)]
        power: f64,
        #[arg(long, default_value_t = 0.5)]
        resolution: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_point(s: &str) -> Result<Point3, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts.as_slice() {
        [x, y, z] if parts.iter().all(|v| v.is_finite()) => Ok(Point3::new(*x, *y, *z)),
        _ => Err(format!("expected three finite numbers x,y,z, got {s:?}")),
    }
}

fn run(cli: Cli, out: &mut dyn Write) -> io::Result<CommandOutcome> {
    match cli.command {
        Command::Solve {
            scenario,
            out: out_path,
            resolution,
        } => commands::solve(&scenario, out_path.as_deref(), resolution, out),
        Command::CheckLos { scenario, position } => commands::check_los(&scenario, position, out),
        Command::Evaluate {
            scenario,
            positions,
            out: out_csv,
            trace,
            jitter,
            seed,
        } => {
            let trace = trace.map(|seconds| TraceArgs { seconds, jitter, seed });
            commands::evaluate(&scenario, &positions, &out_csv, trace, out)
        }
        Command::Region {
            scenario,
            power,
            resolution,
            out: out_csv,
        } => commands::region(&scenario, power, resolution, &out_csv, out),
    }
}

fn main() -> ExitCode {
    let stdout = io::stdout();
    let mut out = stdout.lock();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            let _ = writeln!(out, "status={}", Status::InputError.label());
            return ExitCode::from(Status::InputError as u8);
        }
    };

    let status = match run(cli, &mut out) {
        Ok(outcome) => {
            for path in &outcome.artifacts {
                let _ = writeln!(out, "wrote {}", path.display());
            }
            outcome.status
        }
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            Status::InputError
        }
    };
    let _ = writeln!(out, "status={}", status.label());
    ExitCode::from(status as u8)
}

//! `gainflow` command-line interface.
//!
//! Every command prints a report of `key=value` lines (or JSON with
//! `--json`). Commands that produce an instance write it to `--out`, or to
//! standard output with the report moved to standard error.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Report;

#[derive(Parser, Debug)]
#[command(
    name = "gainflow",
    version,
    about = "Flow networks with additive gains and losses"
)]
struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reachability thresholds towards a sink.
    Threshold {
        #[arg(long)]
        network: PathFile,
        /// Report only this vertex's threshold.
        #[arg(long)]
        source: Option<String>,
        /// Target vertex; defaults to the network's only sink.
        #[arg(long)]
        sink: Option<String>,
    },
    /// Minimum-cost feasible path flow.
    ShortestPath {
        #[arg(long)]
        network: PathFile,
        #[arg(long)]
        source: Option<String>,
        #[arg(long)]
        sink: Option<String>,
        /// Seed flow; by default 1, when the threshold is below 1.
        #[arg(long)]
        seed: Option<String>,
    },
    /// Exact maximum in-flow or out-flow.
    Maxflow {
        #[arg(long)]
        network: PathFile,
        #[arg(long, value_enum, default_value_t = ObjectiveArg::In)]
        objective: ObjectiveArg,
        /// Largest number of non-zero-gain edges to branch on.
        #[arg(long, default_value_t = 16)]
        max_candidates: usize,
        /// Solve even when a positive-gain cycle is present.
        #[arg(long)]
        allow_cycles: bool,
        /// Write the optimal flow here as `f <edge> <value>` lines.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Instance transformations.
    #[command(subcommand)]
    Reduce(ReduceCommand),
    /// Brute-force oracles for the source problems.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Checks of reductions, embeddings, flows and gadgets.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Seeded instance generators.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Graphviz rendering of any instance.
    ExportDot {
        #[command(flatten)]
        input: AnyInput,
        /// Render the reduced network (PAFT or CNF input), clustered by gadget.
        #[arg(long)]
        reduced: bool,
        #[arg(long, default_value = "4")]
        b: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum ReduceCommand {
    /// Removes or smooths vertices of degree at most two.
    Degree {
        #[arg(long)]
        paft: PathFile,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// PAFT to additive network (degree reduction applied first).
    Paft {
        #[arg(long)]
        paft: PathFile,
        #[arg(long, default_value = "4")]
        b: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// 1-in-3 SAT to additive network.
    Sat {
        #[arg(long)]
        cnf: PathFile,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    /// Searches for an F-valid simple s-t path.
    Paft {
        #[arg(long)]
        paft: PathFile,
    },
    /// Searches for an exactly-one-true assignment.
    Sat {
        #[arg(long)]
        cnf: PathFile,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    /// Oracle verdict against the reduced instance's verdict.
    Reduction {
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
        #[arg(long, conflicts_with = "cnf", required_unless_present = "cnf")]
        paft: Option<PathFile>,
        #[arg(long)]
        cnf: Option<PathFile>,
        #[arg(long, default_value = "4")]
        b: String,
    },
    /// Face count and genus of an instance's rotation system.
    Embedding {
        #[arg(long, conflicts_with = "network", required_unless_present = "network")]
        paft: Option<PathFile>,
        #[arg(long)]
        network: Option<PathFile>,
    },
    /// Capacity and conservation check of a flow file.
    Flow {
        #[arg(long)]
        network: PathFile,
        #[arg(long)]
        flow: PathFile,
    },
    /// Crossing-gadget transit table and plain-gadget calibration.
    Gadget {
        #[arg(long, default_value = "4")]
        b: String,
    },
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    /// Grid with corner terminals and random forbidden transitions, degree-reduced.
    PaftGrid {
        #[arg(long)]
        width: usize,
        #[arg(long)]
        height: usize,
        #[arg(long, default_value_t = 0.2)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random 3CNF over distinct variables per clause.
    Cnf {
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        clauses: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random network without positive-gain cycles.
    Network {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = -3, allow_hyphen_values = true)]
        gain_min: i64,
        #[arg(long, default_value_t = 3, allow_hyphen_values = true)]
        gain_max: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct AnyInput {
    #[arg(long)]
    network: Option<PathFile>,
    #[arg(long)]
    paft: Option<PathFile>,
    #[arg(long)]
    cnf: Option<PathFile>,
}

type PathFile = PathBuf;

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ObjectiveArg {
    In,
    Out,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum KindArg {
    Paft,
    Sat,
}

/// Exit status contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Negative = 1,
    Usage = 2,
    Budget = 3,
}

/// What a command produced.
pub struct Outcome {
    pub status: Status,
    pub report: Report,
    /// Instance text to write to `--out` or standard output.
    pub artifact: Option<String>,
}

impl Outcome {
    pub fn new(status: Status, report: Report) -> Self {
        Outcome {
            status,
            report,
            artifact: None,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                Status::Usage as u8
            } else {
                0
            });
        }
    };
    let (outcome, out) = commands::run(cli.command);
    let text = outcome.report.render(cli.json);
    match (outcome.artifact, out) {
        (Some(artifact), Some(path)) => {
            if let Err(e) = std::fs::write(&path, artifact) {
                let mut r = Report::new();
                r.set("error", "io")
                    .set("file", path.display().to_string())
                    .set("message", e.to_string());
                print!("{}", r.render(cli.json));
                return ExitCode::from(Status::Usage as u8);
            }
            print!("{text}");
        }
        (Some(artifact), None) => {
            print!("{artifact}");
            eprint!("{text}");
        }
        (None, _) => print!("{text}"),
    }
    ExitCode::from(outcome.status as u8)
}

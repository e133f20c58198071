//! Batch front door: one subcommand per task plus `suite`.
//!
//! Exit codes: 0 ok, 2 unreadable or unparsable input, 3 validation
//! failure, 4 solver gave up before certification, 5 infeasible task.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qsd::scenario::{
    parse_scenario, run_scenario, run_suite, OutputFormat, Task, REPORT_SCHEMA,
};

#[derive(Parser)]
#[command(name = "qsd", version, about = "Quantum state discrimination toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file (JSON, schema qsd-scenario/1).
    scenario: PathBuf,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: human, json, or csv.
    #[arg(long, default_value = "human")]
    format: String,
    /// Override the certificate tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Override the random seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the iteration limit.
    #[arg(long)]
    max_iter: Option<usize>,
    /// Override the tensor-product dimension cap.
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Args)]
struct SuiteArgs {
    /// Directory of scenario files.
    dir: PathBuf,
    /// Manifest file (schema qsd-suite/1); defaults to dir/manifest.json
    /// when present, otherwise every .json file in the directory runs.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Write the aggregate CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; row order is by filename either way.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Minimum-error discrimination with an optimality certificate.
    MinError(RunArgs),
    /// Qubit minimum-error via the smallest enclosing ball of dual balls.
    QubitGeometric(RunArgs),
    /// Unambiguous discrimination of linearly independent pure states.
    Usd(RunArgs),
    /// Maximum-confidence measurement.
    MaxConfidence(RunArgs),
    /// Error versus inconclusive-rate trade-off curve.
    FixedRate(RunArgs),
    /// Quantum Chernoff exponent of a state pair.
    Chernoff(RunArgs),
    /// Finite-copy collective error and fitted exponent.
    FiniteN(RunArgs),
    /// Dimension witness from a pairwise probability table.
    Witness(RunArgs),
    /// Min-entropy of the optimal guess.
    MinEntropy(RunArgs),
    /// No-signaling decomposition of the optimal dual operator.
    NoSignaling(RunArgs),
    /// Quantum state exclusion.
    Exclusion(RunArgs),
    /// Two-unitary discrimination.
    Unitary(RunArgs),
    /// Mutual information of a measurement against the Holevo bound.
    MutualInfo(RunArgs),
    /// Run a directory of scenarios and aggregate a CSV.
    Suite(SuiteArgs),
}

impl Command {
    fn dispatch(self) -> i32 {
        match self {
            Command::MinError(a) => run_task(Task::MinError, a),
            Command::QubitGeometric(a) => run_task(Task::QubitGeometric, a),
            Command::Usd(a) => run_task(Task::Usd, a),
            Command::MaxConfidence(a) => run_task(Task::MaxConfidence, a),
            Command::FixedRate(a) => run_task(Task::FixedRate, a),
            Command::Chernoff(a) => run_task(Task::Chernoff, a),
            Command::FiniteN(a) => run_task(Task::FiniteN, a),
            Command::Witness(a) => run_task(Task::Witness, a),
            Command::MinEntropy(a) => run_task(Task::MinEntropy, a),
            Command::NoSignaling(a) => run_task(Task::NoSignaling, a),
            Command::Exclusion(a) => run_task(Task::Exclusion, a),
            Command::Unitary(a) => run_task(Task::Unitary, a),
            Command::MutualInfo(a) => run_task(Task::MutualInfo, a),
            Command::Suite(a) => run_suite_command(a),
        }
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> qsd::Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn try_run_task(task: Task, args: &RunArgs) -> qsd::Result<()> {
    let format: OutputFormat = args.format.parse()?;
    let mut scenario = parse_scenario(&args.scenario)?;
    if scenario.task != task {
        return Err(qsd::Error::ValidationError {
            detail: format!(
                "scenario file declares task {}, but the {} subcommand was invoked",
                scenario.task.name(),
                task.name()
            ),
        });
    }
    scenario.apply_overrides(args.tol, args.seed, args.max_iter, args.cap);
    let report = run_scenario(&scenario)?;
    emit(&args.out, &report.render(format)?)
}

fn run_task(task: Task, args: RunArgs) -> i32 {
    match try_run_task(task, &args) {
        Ok(()) => 0,
        Err(e) => {
            let code = e.exit_code();
            let partial = serde_json::json!({
                "schema": REPORT_SCHEMA,
                "task": task.name(),
                "error": e.to_string(),
                "exit_code": code,
            });
            eprintln!("{partial}");
            code
        }
    }
}

fn run_suite_command(args: SuiteArgs) -> i32 {
    match run_suite(&args.dir, args.manifest.as_deref(), args.jobs.max(1)) {
        Ok(outcome) => {
            if let Err(e) = emit(&args.out, &outcome.csv) {
                eprintln!("error: {e}");
                return e.exit_code();
            }
            outcome.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(cli.command.dispatch().clamp(0, 255) as u8)
}

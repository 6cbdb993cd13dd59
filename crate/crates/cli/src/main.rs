//! `tropsched` — solve time-constrained project-scheduling problems with
//! max-plus algebra, validate project files, and cross-check the closed-form
//! solvers against an exhaustive grid oracle.

use std::fs;
use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Deserialize;

use tropsched::project::parse_project;
use tropsched::report::{canonical_number, schedule_report, to_pretty_bytes};
use tropsched_core::matrix::TropicalVector;
use tropsched_core::oracle::{self, GridSpec, OracleError};
use tropsched_core::scheduling::{self, Problem, ProjectModel, Schedule, ScheduleFamily, SolveError};
use tropsched_core::FLOAT_TOLERANCE;

#[derive(Parser)]
#[command(
    name = "tropsched",
    version,
    about = "Project scheduling over the max-plus algebra: closed-form minimax schedules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a scheduling problem and emit a JSON schedule report
    Solve {
        /// Objective to minimize
        #[arg(long, value_parser = parse_problem)]
        problem: Problem,
        /// Project file (`-` for stdin)
        #[arg(long)]
        input: String,
        /// Report destination (`-` or omitted for stdout)
        #[arg(long)]
        output: Option<String>,
        /// Family member to report: `max`, `min`, or `u=<json array>`;
        /// defaults to the latest schedule where one exists, otherwise the
        /// earliest
        #[arg(long)]
        pick: Option<String>,
    },
    /// Check a project file against the preconditions of one or all problems
    Validate {
        /// Project file (`-` for stdin)
        #[arg(long)]
        input: String,
        /// Restrict the check to one problem
        #[arg(long, value_parser = parse_problem)]
        problem: Option<Problem>,
    },
    /// Solve and independently verify via exhaustive grid search
    OracleCheck {
        /// Objective to minimize
        #[arg(long, value_parser = parse_problem)]
        problem: Problem,
        /// Project file (`-` for stdin)
        #[arg(long)]
        input: String,
        /// Grid step (default: 1/2 for due-date and flow-time, 1 otherwise)
        #[arg(long)]
        step: Option<f64>,
        /// Grid bounds as `{"lower": [...], "upper": [...]}` (default: derived
        /// from the model's time vectors)
        #[arg(long)]
        bounds: Option<String>,
    },
}

fn parse_problem(s: &str) -> Result<Problem, String> {
    s.parse()
}

/// Errors mapped onto process exit codes: 1 for invalid or infeasible models,
/// 2 for usage problems, 3 for internal consistency failures.
#[derive(Debug)]
enum CliError {
    Model(String),
    Usage(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Model(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Model(m) | CliError::Usage(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Invalid(_) => CliError::Model(e.to_string()),
            SolveError::OutOfBounds { .. } | SolveError::NotRegularChoice { .. } => {
                CliError::Usage(e.to_string())
            }
            SolveError::ObjectiveMismatch { .. } | SolveError::Internal(_) => {
                CliError::Internal(e.to_string())
            }
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::GridTooLarge { .. } | OracleError::InvalidGrid { .. } => {
                CliError::Usage(e.to_string())
            }
            OracleError::MissingVector { .. } | OracleError::ShapeMismatch { .. } => {
                CliError::Model(e.to_string())
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Solve { problem, input, output, pick } => {
            let model = load_model(&input)?;
            let validation = model.validate(problem);
            let family = scheduling::solve(&model, problem)?;
            let picked = apply_pick(&family, pick.as_deref())?;
            let report = schedule_report(&family, &picked, &validation.notes);
            write_output(output.as_deref(), &to_pretty_bytes(&report))
        }
        Command::Validate { input, problem } => {
            let model = load_model(&input)?;
            match problem {
                Some(problem) => {
                    let report = model.validate(problem);
                    println!("{report}");
                    if report.is_valid() {
                        Ok(())
                    } else {
                        Err(CliError::Model(format!("model fails validation for {problem}")))
                    }
                }
                None => {
                    println!("model: well-formed ({} activities)", model.len());
                    for problem in Problem::ALL {
                        println!("{}", model.validate(problem));
                    }
                    Ok(())
                }
            }
        }
        Command::OracleCheck { problem, input, step, bounds } => {
            let model = load_model(&input)?;
            oracle_check(&model, problem, step, bounds.as_deref())
        }
    }
}

fn load_model(input: &str) -> Result<ProjectModel, CliError> {
    let bytes = read_input(input)?;
    parse_project(&bytes).map_err(|e| CliError::Model(e.to_string()))
}

fn read_input(path: &str) -> Result<Vec<u8>, CliError> {
    if path == "-" {
        let mut buf = Vec::new();
        std::io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| CliError::Usage(format!("cannot read stdin: {e}")))?;
        Ok(buf)
    } else {
        fs::read(path).map_err(|e| CliError::Usage(format!("cannot read `{path}`: {e}")))
    }
}

fn write_output(path: Option<&str>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        None | Some("-") => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Internal(format!("cannot write stdout: {e}"))),
        Some(path) => {
            fs::write(path, bytes).map_err(|e| CliError::Usage(format!("cannot write `{path}`: {e}")))
        }
    }
}

fn apply_pick(family: &ScheduleFamily, pick: Option<&str>) -> Result<Schedule, CliError> {
    let u = match pick {
        None => family.default_choice().clone(),
        Some("max") => family
            .family()
            .upper()
            .cloned()
            .ok_or_else(|| CliError::Usage("family has no maximal member: the free vector is unbounded above".into()))?,
        Some("min") => family
            .family()
            .lower()
            .cloned()
            .ok_or_else(|| CliError::Usage("family has no minimal member: the free vector is unbounded below".into()))?,
        Some(other) => match other.strip_prefix("u=") {
            Some(json) => {
                let values: Vec<f64> = serde_json::from_str(json).map_err(|e| {
                    CliError::Usage(format!("--pick u= expects a JSON array of numbers: {e}"))
                })?;
                if values.len() != family.family().free_dim() {
                    return Err(CliError::Usage(format!(
                        "--pick u= expects {} entries, got {}",
                        family.family().free_dim(),
                        values.len()
                    )));
                }
                if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
                    return Err(CliError::Usage(format!("--pick u= entries must be finite, got {bad}")));
                }
                TropicalVector::from_f64(&values)
            }
            None => {
                return Err(CliError::Usage(format!(
                    "--pick expects `max`, `min` or `u=<json array>`, got `{other}`"
                )))
            }
        },
    };
    Ok(family.instantiate(&u)?)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundsArg {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

fn oracle_check(
    model: &ProjectModel,
    problem: Problem,
    step: Option<f64>,
    bounds: Option<&str>,
) -> Result<(), CliError> {
    let family = scheduling::solve(model, problem)?;
    let closed = family.objective().value();

    let grid = match bounds {
        Some(json) => {
            let parsed: BoundsArg = serde_json::from_str(json).map_err(|e| {
                CliError::Usage(format!(
                    "--bounds expects `{{\"lower\": [...], \"upper\": [...]}}`: {e}"
                ))
            })?;
            let step = step.unwrap_or_else(|| default_step(problem));
            GridSpec::new(parsed.lower, parsed.upper, step)?
        }
        None => {
            let default = GridSpec::default_for(model, problem)?;
            match step {
                Some(step) => {
                    GridSpec::new(default.lower().to_vec(), default.upper().to_vec(), step)?
                }
                None => default,
            }
        }
    };

    println!("problem: {problem}");
    println!("closed-form objective: {}", format_value(closed));
    println!(
        "grid: [{}, {}] step {} ({} points)",
        format_value(grid.lower()[0]),
        format_value(grid.upper()[0]),
        format_value(grid.step()),
        grid.points()
    );

    let outcome = oracle::brute_force_minimum(model, problem, &grid)?;
    let (oracle_value, witness) = match outcome {
        Some(v) => v,
        None => {
            return Err(CliError::Internal(
                "oracle found no feasible grid point; widen --bounds or refine --step".into(),
            ))
        }
    };
    let difference = (closed - oracle_value).abs();
    println!("oracle objective: {}", format_value(oracle_value));
    println!("oracle witness start: {}", vector_text(&witness.start));
    println!("difference: {}", format_value(difference));

    if difference <= FLOAT_TOLERANCE {
        println!("agreement: yes (tolerance 1e-9)");
        Ok(())
    } else {
        println!("agreement: no (tolerance 1e-9)");
        Err(CliError::Internal(format!(
            "closed-form objective {} disagrees with oracle {} by {}",
            format_value(closed),
            format_value(oracle_value),
            format_value(difference)
        )))
    }
}

fn default_step(problem: Problem) -> f64 {
    match problem {
        Problem::DueDateDeviation | Problem::FlowTime => 0.5,
        Problem::FinishSpread | Problem::Makespan => 1.0,
    }
}

fn format_value(v: f64) -> String {
    canonical_number(v).to_string()
}

fn vector_text(v: &TropicalVector) -> String {
    let values: Vec<String> = v
        .iter()
        .map(|s| if s.is_zero() { "null".into() } else { format_value(s.value()) })
        .collect();
    format!("[{}]", values.join(", "))
}

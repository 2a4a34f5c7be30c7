//! Scenario runner for the beable-core toolkit.
//!
//! A scenario file names Hermitian operators, a state, and one command:
//! generate an algebra, test beable status, build preferred-observable or
//! eigenvector-family subalgebras, certify maximality, decompose a state, or
//! run the randomized invariant suites. Results come back as a versioned
//! JSON report with the residuals that justify every boolean claim.

#![forbid(unsafe_code)]

pub mod commands;
pub mod corpus;
pub mod error;
pub mod report;
pub mod scenario;
pub mod verify;

use std::path::PathBuf;
use std::time::Instant;

use clap::Parser;
use serde_json::{json, Value};

use commands::RunFlags;
use error::CliError;
use scenario::{apply_tolerances, CommandKind, Scenario};

#[derive(Parser, Debug)]
#[command(
    name = "beable-lab",
    version,
    about = "Runs operator-algebra scenarios: beable-status checks, \
             preferred-observable subalgebras, maximality certificates, \
             state decompositions, and randomized invariant suites."
)]
pub struct Cli {
    /// Command to run: generate, check-beable, bub-definite, family,
    /// maximal, decompose, or verify-theorems. May be omitted when --corpus
    /// supplies a scenario (its embedded command is used).
    pub command: Option<String>,

    /// Scenario file (JSON). Not needed for verify-theorems or --corpus.
    pub scenario: Option<PathBuf>,

    /// Run a bundled scenario by name (pauli, diagonal-bohm, singlet,
    /// faithful, bub-eigenstate, maximal-family).
    #[arg(long)]
    pub corpus: Option<String>,

    /// Rebuild the tolerance table from this base value.
    #[arg(long)]
    pub tol: Option<f64>,

    /// RNG seed for randomized certificates and suites.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    /// Print the JSON report only (no human summary).
    #[arg(long)]
    pub json: bool,

    /// Largest Hilbert-space dimension accepted.
    #[arg(long = "max-dim", default_value_t = 8)]
    pub max_dim: usize,

    /// Dimensions for verify-theorems, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,

    /// Trial count for verify-theorems and maximality certificates.
    #[arg(long)]
    pub trials: Option<usize>,
}

pub struct Outcome {
    pub report: Value,
    pub human: String,
    pub exit: i32,
}

fn load_scenario(cli: &Cli) -> Result<Option<(Scenario, String)>, CliError> {
    if let Some(name) = &cli.corpus {
        let text = corpus::lookup(name).ok_or_else(|| {
            CliError::Usage(format!(
                "no bundled scenario named {name:?}; available: {}",
                corpus::NAMES.join(", ")
            ))
        })?;
        let label = format!("corpus:{name}");
        return Ok(Some((Scenario::from_str(text, &label)?, label)));
    }
    if let Some(path) = &cli.scenario {
        let display = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: display.clone(),
            source: e,
        })?;
        return Ok(Some((Scenario::from_str(&text, &display)?, display)));
    }
    Ok(None)
}

fn requested_command(cli: &Cli) -> Result<Option<CommandKind>, CliError> {
    match &cli.command {
        None => Ok(None),
        Some(s) => CommandKind::parse(s)
            .map(Some)
            .ok_or_else(|| CliError::Usage(format!("unknown command {s:?}"))),
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let started = Instant::now();
    let cli_command = requested_command(cli)?;
    let loaded = load_scenario(cli)?;

    let (command, scenario) = match (&loaded, cli_command) {
        (Some((sc, _)), Some(cmd)) => {
            if sc.command != cmd {
                return Err(CliError::Validation(format!(
                    "command line says {:?} but the scenario says {:?}",
                    cmd.as_str(),
                    sc.command.as_str()
                )));
            }
            (cmd, loaded.as_ref().map(|(s, _)| s))
        }
        (Some((sc, _)), None) => (sc.command, loaded.as_ref().map(|(s, _)| s)),
        (None, Some(CommandKind::VerifyTheorems)) => (CommandKind::VerifyTheorems, None),
        (None, Some(cmd)) => {
            return Err(CliError::Usage(format!(
                "command {:?} needs a scenario file or --corpus",
                cmd.as_str()
            )))
        }
        (None, None) => {
            return Err(CliError::Usage(
                "nothing to do: pass a command with a scenario file, --corpus <name>, \
                 or verify-theorems"
                    .into(),
            ))
        }
    };

    apply_tolerances(cli.tol, scenario.and_then(|s| s.tol_overrides.as_ref()))?;

    // The dimension guard protects against accidentally huge user inputs;
    // bundled scenarios are vetted, so they bypass it.
    if let Some(sc) = scenario {
        if cli.corpus.is_none() && sc.dim_h > cli.max_dim {
            return Err(CliError::Validation(format!(
                "scenario dimension {} exceeds --max-dim {}",
                sc.dim_h, cli.max_dim
            )));
        }
    }

    let flags = RunFlags {
        seed: cli.seed,
        trials: cli.trials,
        max_dim: cli.max_dim,
        dims: cli.dims.clone(),
    };
    let parse_ms = started.elapsed().as_secs_f64() * 1e3;
    let run_started = Instant::now();

    let (results, residuals, headline, echo, exit) = match command {
        CommandKind::VerifyTheorems => {
            let (dims, trials) = verify_settings(scenario, &flags)?;
            for &d in &dims {
                if d < 2 || d > flags.max_dim {
                    return Err(CliError::Validation(format!(
                        "verify-theorems dimension {d} is outside 2..={}",
                        flags.max_dim
                    )));
                }
            }
            let outcomes = verify::run_suites(&dims, trials, flags.seed);
            let (results, residuals, all_passed, worst) = verify::suites_to_json(&outcomes);
            let failed: Vec<String> = outcomes
                .iter()
                .filter(|o| o.failures > 0)
                .map(|o| o.name.to_string())
                .collect();
            let headline = if all_passed {
                format!(
                    "all {} invariant suites passed (worst residual {worst:.3e})",
                    outcomes.len()
                )
            } else {
                format!("invariant suites FAILED: {}", failed.join(", "))
            };
            let echo = scenario.map_or_else(
                || json!({ "command": "verify-theorems", "dims": dims, "trials": trials }),
                |s| s.raw.clone(),
            );
            let exit = if all_passed { 0 } else { 4 };
            (results, residuals, headline, echo, exit)
        }
        _ => {
            let sc = scenario.ok_or_else(|| {
                CliError::Usage(format!(
                    "command {:?} needs a scenario file or --corpus",
                    command.as_str()
                ))
            })?;
            let out = commands::run_command(sc, &flags)?;
            (out.results, out.residuals, out.headline, sc.raw.clone(), 0)
        }
    };

    let timings = report::Timings {
        parse_ms,
        run_ms: run_started.elapsed().as_secs_f64() * 1e3,
    };
    let report = report::build(
        command.as_str(),
        echo,
        cli.seed,
        results,
        residuals,
        &timings,
    );
    let human = report::human(&report, &headline);
    Ok(Outcome {
        report,
        human,
        exit,
    })
}

fn verify_settings(
    scenario: Option<&Scenario>,
    flags: &RunFlags,
) -> Result<(Vec<usize>, usize), CliError> {
    let mut dims = flags.dims.clone();
    let mut trials = flags.trials;
    if let Some(sc) = scenario {
        if dims.is_none() {
            if let Some(v) = sc.params.get("dims") {
                let list = v
                    .as_array()
                    .map(|a| a.iter().filter_map(Value::as_u64).map(|d| d as usize).collect())
                    .ok_or_else(|| {
                        CliError::Validation("params.dims must be an array of integers".into())
                    })?;
                dims = Some(list);
            }
        }
        if trials.is_none() {
            trials = sc.param_usize("trials")?;
        }
    }
    let dims = dims.unwrap_or_else(|| vec![2, 3, 4]);
    if dims.is_empty() {
        return Err(CliError::Validation("verify-theorems needs at least one dimension".into()));
    }
    Ok((dims, trials.unwrap_or(200)))
}

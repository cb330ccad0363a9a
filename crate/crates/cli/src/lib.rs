//! Command-line front end for the `holevo` crate.

pub mod commands;
pub mod error;
pub mod golden;
pub mod output;
pub mod problem;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use holevo::SolverConfig;
use serde_json::json;

use commands::{CapacityOptions, ChannelSource, DEFAULT_PROBES};
use error::{CliError, Result};
use output::{matrix_json, num, Base, Format, Style, Table};
use problem::parse_problem;

#[derive(Debug, Parser)]
#[command(name = "holevo", version, about = "Holevo quantity of quantum ensembles and upper bounds on it")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "table", global = true)]
    pub format: Format,
    /// Logarithm base for entropic values [default: 2 for tables, e for JSON].
    #[arg(long, value_enum, global = true)]
    pub log_base: Option<Base>,
    /// Solver tolerance on the objective.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Solver iteration budget.
    #[arg(long, global = true)]
    pub max_iters: Option<usize>,
    /// Random restarts for the divergence solvers.
    #[arg(long, global = true)]
    pub restarts: Option<usize>,
    /// Seed for every random choice.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

impl GlobalArgs {
    pub fn solver(&self) -> SolverConfig {
        let d = SolverConfig::default();
        SolverConfig {
            tolerance: self.tolerance.unwrap_or(d.tolerance),
            max_iters: self.max_iters.unwrap_or(d.max_iters),
            restarts: self.restarts.unwrap_or(d.restarts),
            seed: self.seed.unwrap_or(d.seed),
        }
    }

    pub fn style(&self) -> Style {
        Style::new(self.format, self.log_base)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact Holevo quantity and the spectrum of the average state.
    Chi { input: PathBuf },
    /// Every upper bound, at every reference state, with solved AMD/MMD states.
    Bounds { input: PathBuf },
    /// Minimal average trace distance to a single state.
    Amd { input: PathBuf },
    /// Minimal worst-case trace distance to a single state.
    Mmd { input: PathBuf },
    /// Chebyshev-radius bound on the Holevo capacity of a channel.
    Capacity(CapacityArgs),
    /// Energy-constrained bounds for an oscillator problem.
    EnergyBound { input: PathBuf },
    /// Recompute the worked examples and compare with their closed forms.
    ReproduceExamples,
}

#[derive(Debug, Args)]
pub struct CapacityArgs {
    /// Channel problem file; alternatively give --family.
    #[arg(required_unless_present = "family", conflicts_with = "family")]
    pub input: Option<PathBuf>,
    /// identity, depolarizing, erasure, cq-projector or cq-shifted-uniform.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub r: Option<usize>,
    /// Estimate the radius numerically even when a closed form is known.
    #[arg(long)]
    pub estimate: bool,
    /// Random pure probe states added to the input basis.
    #[arg(long, default_value_t = DEFAULT_PROBES)]
    pub probes: usize,
}

/// What a run produced: the report, loader warnings and the final status.
pub struct Outcome {
    pub stdout: String,
    pub warnings: Vec<String>,
    pub status: Result<()>,
}

pub fn run(cli: &Cli) -> Outcome {
    let mut warnings = Vec::new();
    let style = cli.global.style();
    let cfg = cli.global.solver();
    let mut stdout = String::new();
    let status = dispatch(cli, &cfg, &style, &mut warnings, &mut stdout);
    let status = match status {
        Err(CliError::Core(holevo::Error::NonConvergence { iterations, best })) => {
            stdout = best_iterate(iterations, &best, &style);
            Err(CliError::Core(holevo::Error::NonConvergence { iterations, best }))
        }
        other => other,
    };
    Outcome {
        stdout,
        warnings,
        status,
    }
}

fn dispatch(
    cli: &Cli,
    cfg: &SolverConfig,
    style: &Style,
    warnings: &mut Vec<String>,
    stdout: &mut String,
) -> Result<()> {
    let mut load = |path: &PathBuf| {
        let file = parse_problem(path)?;
        warnings.extend(file.warnings.iter().cloned());
        Ok::<_, CliError>(file)
    };
    *stdout = match &cli.command {
        Command::Chi { input } => commands::chi(commands::expect_ensemble(&load(input)?)?, style),
        Command::Bounds { input } => commands::bounds(commands::expect_ensemble(&load(input)?)?, cfg, style)?,
        Command::Amd { input } => commands::amd(commands::expect_ensemble(&load(input)?)?, cfg, style)?,
        Command::Mmd { input } => commands::mmd(commands::expect_ensemble(&load(input)?)?, cfg, style)?,
        Command::Capacity(args) => {
            let file;
            let source = match (&args.input, &args.family) {
                (Some(path), _) => {
                    file = load(path)?;
                    ChannelSource::File(&file)
                }
                (None, Some(name)) => ChannelSource::Family {
                    name,
                    d: args.d,
                    p: args.p,
                    r: args.r,
                },
                (None, None) => return Err(CliError::Usage("give a channel file or --family".into())),
            };
            let ch = commands::resolve_channel(source)?;
            let opts = CapacityOptions {
                estimate: args.estimate,
                probes: args.probes,
            };
            commands::capacity(&ch, &opts, cfg, style)?
        }
        Command::EnergyBound { input } => commands::energy_bound(commands::expect_energy(&load(input)?)?, style)?,
        Command::ReproduceExamples => {
            let (out, checks) = commands::reproduce_examples(cfg, style)?;
            *stdout = out;
            let failed = checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(CliError::GoldenFailed {
                    failed,
                    total: checks.len(),
                });
            }
            return Ok(());
        }
    };
    Ok(())
}

fn best_iterate(iterations: usize, best: &holevo::DivergenceSolution, style: &Style) -> String {
    style.render(
        || {
            let mut t = Table::new(["best iterate", "value"]);
            t.row(["value".to_string(), num(best.value)]);
            t.row(["iterations".to_string(), iterations.to_string()]);
            t.row(["certified gap".to_string(), num(best.certified_gap)]);
            t.render()
        },
        || {
            json!({
                "converged": false,
                "value": best.value,
                "iterations": iterations,
                "certified_gap": best.certified_gap,
                "optimal_state": matrix_json(&best.optimal_state),
            })
        },
    )
}

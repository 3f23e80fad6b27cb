//! `firefront`: drone-swarm water sizing and fire-spread simulation
//! from the command line.

mod commands;
mod out;
mod range;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use firefront::physics::PhysicsError;
use firefront::scenario::ScenarioError;
use firefront::swarm::SwarmError;
use serde::Serialize;
use thiserror::Error;

use range::Span;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Physics(#[from] PhysicsError),
    #[error(transparent)]
    Swarm(#[from] SwarmError),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "firefront",
    version,
    about = "Water flow sizing for drone swarms and fire-spread simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
}

#[derive(Debug, Args, Serialize)]
pub struct OutputArgs {
    /// Output directory. Defaults to `$FIREFRONT_OUT_DIR/<subcommand>/<label>`,
    /// with `out` as the base.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Name of the run directory; a UTC timestamp when absent.
    #[arg(long, global = true)]
    pub label: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
}

#[derive(Debug, Args, Serialize)]
pub struct CfArgs {
    /// Scenario whose fuel and spread constants replace the defaults.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    /// Wind at 2 m, km/h. A number or start:end:step.
    #[arg(long)]
    pub wind: Option<Span>,
    /// Dead-fuel moisture, %.
    #[arg(long, conflicts_with = "flame_length")]
    pub moisture: Option<Span>,
    /// Active combustion depth, m.
    #[arg(long, conflicts_with = "flame_length")]
    pub depth: Option<Span>,
    /// Flame length, m. Selects the flame-length path; needs --ir.
    #[arg(long)]
    pub flame_length: Option<Span>,
    /// Heat release rate per unit area, kW/m².
    #[arg(long, requires = "flame_length")]
    pub ir: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct PlatformArgs {
    /// Drones per platform.
    #[arg(long, default_value = "120")]
    pub drones: Span,
    /// Litres carried per trip.
    #[arg(long, default_value = "20")]
    pub payload: Span,
    /// Minutes per delivery cycle.
    #[arg(long, default_value = "6")]
    pub cycle_min: Span,
    #[arg(long, default_value = "1")]
    pub platforms: Span,
}

#[derive(Debug, Args, Serialize)]
pub struct CriticalFlowArgs {
    /// Critical flow, L/min per metre of front. Computed from
    /// --wind/--moisture/--depth when absent.
    #[arg(long, conflicts_with_all = ["wind", "moisture", "depth"])]
    pub cf: Option<Span>,
    #[arg(long)]
    pub wind: Option<Span>,
    #[arg(long)]
    pub moisture: Option<Span>,
    #[arg(long)]
    pub depth: Option<Span>,
}

#[derive(Debug, Args, Serialize)]
pub struct FlowArgs {
    #[command(flatten)]
    pub platform: PlatformArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct MetersArgs {
    #[command(flatten)]
    pub platform: PlatformArgs,
    #[command(flatten)]
    pub flow: CriticalFlowArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct DronesArgs {
    /// Front length to hold, m.
    #[arg(long)]
    pub meters: Span,
    #[arg(long, default_value = "20")]
    pub payload: Span,
    #[arg(long, default_value = "6")]
    pub cycle_min: Span,
    #[command(flatten)]
    pub flow: CriticalFlowArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct RunArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    /// Base seed for fields and ignition draws; the scenario seed by default.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub replicates: usize,
    /// Platform arrival time, min.
    #[arg(long)]
    pub ta_min: Option<f64>,
    /// Wetted cells per platform.
    #[arg(long)]
    pub nc: Option<usize>,
    /// Number of platforms laying the line.
    #[arg(long)]
    pub platforms: Option<u32>,
    #[arg(long)]
    pub max_steps: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Also run every replicate without the water line on the same draws.
    #[arg(long)]
    pub paired: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum SweepParam {
    /// Platform arrival time, min.
    TaMin,
    /// Grid wind, km/h.
    Wind,
    /// Wetted cells per platform.
    Nc,
    /// Number of platforms.
    Platforms,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, value_enum)]
    pub param: SweepParam,
    /// start:end:step or a single value.
    #[arg(long)]
    pub values: Span,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

impl Figure {
    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct ReproduceArgs {
    #[arg(value_enum)]
    pub figure: Figure,
    /// Monte Carlo replicates for the spread figure.
    #[arg(long, default_value_t = 30)]
    pub replicates: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Critical water flow with every intermediate of the balance.
    Cf(CfArgs),
    /// Sustained water flow of one or more platforms.
    Flow(FlowArgs),
    /// Metres of front the platforms can hold.
    Meters(MetersArgs),
    /// Drones needed to hold a front.
    Drones(DronesArgs),
    /// Replicated fire-spread runs of a scenario.
    Simulate(SimulateArgs),
    /// Mean final burned area across values of one parameter.
    Sweep(SweepArgs),
    /// Data behind one of the figures.
    Reproduce(ReproduceArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Cf(a) => commands::cf(a),
        Command::Flow(a) => commands::flow(a),
        Command::Meters(a) => commands::meters(a),
        Command::Drones(a) => commands::drones(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Reproduce(a) => commands::reproduce(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("firefront: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

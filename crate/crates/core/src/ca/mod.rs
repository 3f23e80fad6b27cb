//! Stochastic cellular-automaton fire spread with a drone water line.
//!
//! Cells are Empty (0), Fuel (1), Burning (2), Burned (3) or Water (4).
//! Burning cells burn out after one step; while burning they try to
//! ignite each Fuel cell of a wind-dependent Moore neighbourhood with a
//! probability built from base spread, vegetation, density, wind, slope
//! and moisture factors. Water cells are permanent.

pub mod draws;
mod engine;
mod grid;
pub mod intervention;
mod paired;
pub mod rules;

pub use draws::{derive_seed, DrawSource, HashDraws};
pub use engine::{run, run_with, CellCounts, RunOutcome, SimState, Simulation, TimeSeriesRecord};
pub use grid::{
    default_minutes_per_step, CellState, Density, DensityValues, GridError, GridScenario, SpreadProbabilities,
    Vegetation, VegetationValues, WindUnits,
};
pub use intervention::{compute_nc, FrontOrientation, InterventionOutcome, InterventionPlan};
pub use paired::{mean_series, paired_run, MeanStd, PairedRun};
pub use rules::MoistureUnits;

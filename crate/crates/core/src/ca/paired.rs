//! Paired baseline/treated runs and replicate statistics.

use super::engine::{run, RunOutcome, TimeSeriesRecord};
use super::grid::{GridError, GridScenario};
use super::intervention::InterventionPlan;

#[derive(Debug, Clone, PartialEq)]
pub struct PairedRun {
    pub baseline: RunOutcome,
    pub treated: RunOutcome,
}

/// Runs the scenario without and with the plan on the same ignition
/// draws, so every difference between the two is caused by the water.
pub fn paired_run(scenario: &GridScenario, plan: &InterventionPlan) -> Result<PairedRun, GridError> {
    Ok(PairedRun {
        baseline: run(scenario, None)?,
        treated: run(scenario, Some(plan))?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanStd {
    pub mean: f64,
    /// Standard error of the mean.
    pub stderr: f64,
    pub n: usize,
}

impl MeanStd {
    pub fn of(samples: &[f64]) -> Self {
        let n = samples.len();
        if n == 0 {
            return Self {
                mean: f64::NAN,
                stderr: f64::NAN,
                n,
            };
        }
        let mean = samples.iter().sum::<f64>() / n as f64;
        let stderr = if n > 1 {
            let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        Self { mean, stderr, n }
    }
}

/// Step-wise mean of several series. Runs that stopped early hold their
/// last record, since a dead fire no longer changes.
pub fn mean_series(runs: &[&[TimeSeriesRecord]], minutes_per_step: f64) -> Vec<TimeSeriesRecord> {
    let len = runs.iter().map(|r| r.len()).max().unwrap_or(0);
    let n = runs.len() as f64;
    (0..len)
        .map(|k| {
            let at = |r: &&[TimeSeriesRecord]| r[k.min(r.len() - 1)];
            let avg = |f: fn(&TimeSeriesRecord) -> f64| runs.iter().map(|r| f(&at(r))).sum::<f64>() / n;
            TimeSeriesRecord {
                step: k as u64,
                clock_min: k as f64 * minutes_per_step,
                burning_cells: avg(|r| r.burning_cells as f64).round() as usize,
                burned_cells: avg(|r| r.burned_cells as f64).round() as usize,
                water_cells: avg(|r| r.water_cells as f64).round() as usize,
                burned_area_m2: avg(|r| r.burned_area_m2),
            }
        })
        .collect()
}

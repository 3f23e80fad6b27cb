use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::fields::{generate_fields, FieldSpec};
use super::ScenarioError;
use crate::ca::{
    default_minutes_per_step, FrontOrientation, GridScenario, InterventionPlan, SpreadProbabilities, Vegetation,
    VegetationValues,
};
use crate::physics::{critical_flow, FireEnvironment, FuelModel, IntensityPath, SpreadParams};
use crate::swarm::PlatformConfig;

pub const SCHEMA_VERSION: u32 = 1;

/// Top-level scenario document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema_version: u32,
    #[serde(default)]
    pub fuel: FuelModel,
    #[serde(default)]
    pub spread: SpreadParams,
    #[serde(default)]
    pub environment: FireEnvironment,
    #[serde(default)]
    pub platforms: Vec<PlatformConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intervention: Option<InterventionConfig>,
    #[serde(default)]
    pub outputs: OutputConfig,
}

/// Lattice description; per-cell fields are either generated from
/// category weights or given inline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub rows: usize,
    pub cols: usize,
    #[serde(default = "default_cell_size")]
    pub cell_size_m: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub vegetation: FieldSpec<Vegetation>,
    #[serde(default)]
    pub density: FieldSpec<crate::ca::Density>,
    /// Default dead-fuel moisture per vegetation type, fraction.
    #[serde(default = "default_moisture")]
    pub moisture_by_type: VegetationValues,
    /// Per-cell moisture override, fraction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moisture: Option<Vec<Vec<f64>>>,
    /// Per-cell elevation, m. Flat when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elevation: Option<Vec<Vec<f64>>>,
    #[serde(default = "default_wind")]
    pub wind_kmh: f64,
    /// Bearing the wind blows toward, radians clockwise from north.
    #[serde(default)]
    pub wind_direction_rad: f64,
    #[serde(default)]
    pub probabilities: SpreadProbabilities,
    /// `[row, col]` cells lit at step 0; the centre cell when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ignition: Option<Vec<[usize; 2]>>,
    #[serde(default = "default_max_steps")]
    pub max_steps: u64,
    /// Overrides the step length derived from the grass rate of spread.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minutes_per_step: Option<f64>,
}

fn default_cell_size() -> f64 {
    2.0
}
fn default_moisture() -> VegetationValues {
    VegetationValues {
        grass: 0.18,
        shrub: 0.24,
    }
}
fn default_wind() -> f64 {
    20.0
}
fn default_max_steps() -> u64 {
    2000
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterventionConfig {
    /// Index into `platforms` of the platform that lays the line.
    #[serde(default)]
    pub platform: usize,
    /// Identical platforms operating from that position.
    #[serde(default = "one")]
    pub count: u32,
    /// Pins the number of wetted cells per platform.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cells_per_platform: Option<usize>,
    /// Critical flow for sizing, L min⁻¹ m⁻¹; computed from `environment`
    /// when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cf_l_min_m: Option<f64>,
    #[serde(default)]
    pub orientation: FrontOrientation,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub timeseries: bool,
    pub snapshot: bool,
    pub label: Option<String>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            timeseries: true,
            snapshot: true,
            label: None,
        }
    }
}

impl ScenarioFile {
    /// A scenario with every default and the given lattice.
    pub fn with_grid(rows: usize, cols: usize, seed: u64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            fuel: FuelModel::default(),
            spread: SpreadParams::default(),
            environment: FireEnvironment::default(),
            platforms: Vec::new(),
            grid: Some(GridConfig {
                rows,
                cols,
                cell_size_m: default_cell_size(),
                seed,
                vegetation: FieldSpec::default(),
                density: FieldSpec::default(),
                moisture_by_type: default_moisture(),
                moisture: None,
                elevation: None,
                wind_kmh: default_wind(),
                wind_direction_rad: 0.0,
                probabilities: SpreadProbabilities::default(),
                ignition: None,
                max_steps: default_max_steps(),
                minutes_per_step: None,
            }),
            intervention: None,
            outputs: OutputConfig::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let file: Self = serde_json::from_str(text).map_err(|e| ScenarioError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        file.validate()?;
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario values are always serialisable")
    }

    pub fn grid(&self) -> Result<&GridConfig, ScenarioError> {
        self.grid
            .as_ref()
            .ok_or_else(|| ScenarioError::invalid("grid", "section is required"))
    }

    pub fn grid_mut(&mut self) -> Result<&mut GridConfig, ScenarioError> {
        self.grid
            .as_mut()
            .ok_or_else(|| ScenarioError::invalid("grid", "section is required"))
    }

    /// Checks everything that does not need the generated fields.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(ScenarioError::invalid(
                "schema_version",
                format!("expected {SCHEMA_VERSION}, found {}", self.schema_version),
            ));
        }
        self.fuel.validate()?;
        self.environment.validate()?;
        for p in &self.platforms {
            p.validate()?;
        }
        let grid = self.grid()?;
        if grid.rows == 0 || grid.cols == 0 {
            return Err(ScenarioError::invalid("grid", "rows and cols must be >= 1"));
        }
        grid.vegetation.validate("grid.vegetation", grid.rows, grid.cols)?;
        grid.density.validate("grid.density", grid.rows, grid.cols)?;
        check_matrix("grid.moisture", grid.moisture.as_deref(), grid.rows, grid.cols)?;
        check_matrix("grid.elevation", grid.elevation.as_deref(), grid.rows, grid.cols)?;
        if let Some(m) = grid.minutes_per_step {
            if !(m.is_finite() && m > 0.0) {
                return Err(ScenarioError::invalid("grid.minutes_per_step", "must be > 0"));
            }
        }
        if let Some(iv) = &self.intervention {
            if iv.platform >= self.platforms.len() {
                return Err(ScenarioError::invalid(
                    "intervention.platform",
                    format!("no platform at index {}", iv.platform),
                ));
            }
            if iv.count == 0 {
                return Err(ScenarioError::invalid("intervention.count", "must be >= 1"));
            }
        }
        Ok(())
    }

    /// Builds the lattice, drawing random fields from `seed` instead of
    /// the file's own seed.
    pub fn resolve_with_seed(&self, seed: u64) -> Result<GridScenario, ScenarioError> {
        let g = self.grid()?;
        let fields = generate_fields(g, seed)?;
        let n = g.rows * g.cols;
        let moisture = match &g.moisture {
            Some(m) => m.iter().flatten().copied().collect(),
            None => fields.moisture,
        };
        let elevation = match &g.elevation {
            Some(e) => e.iter().flatten().copied().collect(),
            None => vec![0.0; n],
        };
        let minutes_per_step = match g.minutes_per_step {
            Some(m) => m,
            None => default_minutes_per_step(g.cell_size_m, g.wind_kmh, g.moisture_by_type.grass, &self.spread)
                .ok_or_else(|| {
                    ScenarioError::invalid(
                        "grid.minutes_per_step",
                        "required when the grass rate of spread is zero (no wind)",
                    )
                })?,
        };
        let ignition = match &g.ignition {
            Some(cells) => cells.iter().map(|[r, c]| (*r, *c)).collect(),
            None => vec![(g.rows / 2, g.cols / 2)],
        };
        let scenario = GridScenario {
            rows: g.rows,
            cols: g.cols,
            cell_size: g.cell_size_m,
            vegetation: fields.vegetation,
            density: fields.density,
            moisture,
            elevation,
            wind_kmh: g.wind_kmh,
            wind_direction: g.wind_direction_rad,
            probabilities: g.probabilities,
            ignition,
            seed,
            max_steps: g.max_steps,
            minutes_per_step,
        };
        scenario.validate().map_err(|e| {
            let field = match e.field.as_str() {
                "grid" => "grid".to_string(),
                f => format!("grid.{f}"),
            };
            ScenarioError::Invalid {
                field,
                reason: e.reason,
            }
        })?;
        Ok(scenario)
    }

    pub fn resolve(&self) -> Result<GridScenario, ScenarioError> {
        self.resolve_with_seed(self.grid()?.seed)
    }

    /// The water-line plan, if the scenario asks for one.
    pub fn intervention_plan(&self) -> Result<Option<InterventionPlan>, ScenarioError> {
        let Some(iv) = &self.intervention else {
            return Ok(None);
        };
        let platform = self.platforms[iv.platform];
        if let Some(cells) = iv.cells_per_platform {
            return Ok(Some(InterventionPlan::pinned(platform, iv.count, cells)));
        }
        let cf = match iv.cf_l_min_m {
            Some(cf) => cf,
            None => {
                critical_flow(
                    &self.fuel,
                    &self.environment,
                    &self.spread,
                    IntensityPath::RateOfSpread,
                    None,
                )?
                .cf_linear
            }
        };
        let cell_size = self.grid()?.cell_size_m;
        Ok(Some(InterventionPlan::sized(
            platform,
            iv.count,
            cf,
            cell_size,
            iv.orientation,
        )?))
    }
}

fn check_matrix(field: &str, m: Option<&[Vec<f64>]>, rows: usize, cols: usize) -> Result<(), ScenarioError> {
    let Some(m) = m else { return Ok(()) };
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(ScenarioError::invalid(field, format!("must be {rows} x {cols}")));
    }
    if m.iter().flatten().any(|v| !v.is_finite()) {
        return Err(ScenarioError::invalid(field, "values must be finite"));
    }
    Ok(())
}

/// Reads and validates a scenario file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<ScenarioFile, ScenarioError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    ScenarioFile::from_json(&text)
}

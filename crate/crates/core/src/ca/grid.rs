use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::rules::{self, MoistureUnits};
use crate::physics::{rate_of_spread, SpreadParams};

#[derive(Debug, Error, Clone, PartialEq)]
#[error("invalid grid scenario field `{field}`: {reason}")]
pub struct GridError {
    pub field: String,
    pub reason: String,
}

impl GridError {
    pub fn new(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

/// Lattice cell state. The discriminants are the on-disk digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[repr(u8)]
pub enum CellState {
    #[default]
    Empty = 0,
    Fuel = 1,
    Burning = 2,
    Burned = 3,
    Water = 4,
}

impl CellState {
    pub fn digit(self) -> char {
        (b'0' + self as u8) as char
    }

    pub fn from_digit(c: char) -> Option<Self> {
        Some(match c {
            '0' => Self::Empty,
            '1' => Self::Fuel,
            '2' => Self::Burning,
            '3' => Self::Burned,
            '4' => Self::Water,
            _ => return None,
        })
    }

    /// Whether `self -> next` is an allowed transition (or no change).
    pub fn may_become(self, next: CellState) -> bool {
        use CellState::*;
        self == next
            || matches!(
                (self, next),
                (Fuel, Burning) | (Burning, Burned) | (Fuel, Water) | (Burning, Water)
            )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Vegetation {
    /// Bare ground; the cell starts Empty.
    None,
    Grass,
    Shrub,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Density {
    Sparse,
    Normal,
    Dense,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VegetationValues {
    pub grass: f64,
    pub shrub: f64,
}

impl VegetationValues {
    pub fn get(&self, v: Vegetation) -> f64 {
        match v {
            Vegetation::None => 0.0,
            Vegetation::Grass => self.grass,
            Vegetation::Shrub => self.shrub,
        }
    }
}

impl Default for VegetationValues {
    fn default() -> Self {
        Self { grass: 0.4, shrub: 0.4 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DensityValues {
    pub sparse: f64,
    pub normal: f64,
    pub dense: f64,
}

impl DensityValues {
    pub fn get(&self, d: Density) -> f64 {
        match d {
            Density::Sparse => self.sparse,
            Density::Normal => self.normal,
            Density::Dense => self.dense,
        }
    }
}

impl Default for DensityValues {
    fn default() -> Self {
        Self {
            sparse: -0.4,
            normal: 0.0,
            dense: 0.3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum WindUnits {
    /// The wind coefficients act on m s⁻¹.
    #[default]
    MetersPerSecond,
    KilometersPerHour,
}

/// Constants of the ignition-probability model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpreadProbabilities {
    /// Base probability on flat ground in still air.
    pub p0: f64,
    pub c1: f64,
    pub c2: f64,
    /// Slope coefficient; required when the terrain is not flat.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope_coefficient: Option<f64>,
    pub moisture_coefficient: f64,
    pub moisture_units: MoistureUnits,
    pub wind_units: WindUnits,
    pub p_veg: VegetationValues,
    pub p_den: DensityValues,
}

impl Default for SpreadProbabilities {
    fn default() -> Self {
        Self {
            p0: 0.6,
            c1: 0.045,
            c2: 0.131,
            slope_coefficient: None,
            moisture_coefficient: 0.111,
            moisture_units: MoistureUnits::Percent,
            wind_units: WindUnits::MetersPerSecond,
            p_veg: VegetationValues::default(),
            p_den: DensityValues::default(),
        }
    }
}

/// Fully resolved lattice: one value per cell for every field.
#[derive(Debug, Clone, PartialEq)]
pub struct GridScenario {
    pub rows: usize,
    pub cols: usize,
    /// Cell side, m.
    pub cell_size: f64,
    pub vegetation: Vec<Vegetation>,
    pub density: Vec<Density>,
    /// Dead-fuel moisture per cell, as a fraction.
    pub moisture: Vec<f64>,
    /// Ground elevation per cell, m.
    pub elevation: Vec<f64>,
    pub wind_kmh: f64,
    /// Bearing the wind blows toward, radians clockwise from north.
    pub wind_direction: f64,
    pub probabilities: SpreadProbabilities,
    pub ignition: Vec<(usize, usize)>,
    pub seed: u64,
    pub max_steps: u64,
    pub minutes_per_step: f64,
}

impl GridScenario {
    /// Uniform grass lattice of normal density with the default
    /// probabilities, centre ignition and a one-minute step.
    pub fn uniform(rows: usize, cols: usize) -> Self {
        let n = rows * cols;
        Self {
            rows,
            cols,
            cell_size: 2.0,
            vegetation: vec![Vegetation::Grass; n],
            density: vec![Density::Normal; n],
            moisture: vec![0.18; n],
            elevation: vec![0.0; n],
            wind_kmh: 0.0,
            wind_direction: 0.0,
            probabilities: SpreadProbabilities::default(),
            ignition: vec![(rows / 2, cols / 2)],
            seed: 0,
            max_steps: 1000,
            minutes_per_step: 1.0,
        }
    }

    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.cols + col
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx / self.cols, idx % self.cols)
    }

    pub fn is_flat(&self) -> bool {
        self.elevation.windows(2).all(|w| w[0] == w[1])
    }

    /// Wind speed in the unit the wind coefficients expect.
    pub fn wind_for_coefficients(&self) -> f64 {
        match self.probabilities.wind_units {
            WindUnits::MetersPerSecond => self.wind_kmh / 3.6,
            WindUnits::KilometersPerHour => self.wind_kmh,
        }
    }

    /// Ignition probability for a Burning `source` onto a Fuel `target`.
    pub fn p_burn(&self, source: (usize, usize), target: (usize, usize)) -> f64 {
        let pr = &self.probabilities;
        let s = self.index(source.0, source.1);
        let t = self.index(target.0, target.1);
        let d_row = target.0 as i32 - source.0 as i32;
        let d_col = target.1 as i32 - source.1 as i32;
        let cos = rules::cos_to_wind(d_row, d_col, self.wind_direction);
        let pw = rules::p_wind(cos.clamp(-1.0, 1.0).acos(), self.wind_for_coefficients(), pr.c1, pr.c2);
        let ps = match pr.slope_coefficient {
            Some(a_s) => {
                let dist = self.cell_size * f64::from(d_row).hypot(f64::from(d_col));
                rules::p_slope(self.elevation[t], self.elevation[s], dist, a_s)
            }
            None => 1.0,
        };
        let pm = rules::p_moisture(self.moisture[t], pr.moisture_coefficient, pr.moisture_units);
        rules::combine(
            pr.p0,
            pr.p_veg.get(self.vegetation[t]),
            pr.p_den.get(self.density[t]),
            pw,
            ps,
            pm,
        )
    }

    pub fn validate(&self) -> Result<(), GridError> {
        if self.rows == 0 || self.cols == 0 {
            return Err(GridError::new("grid", "rows and cols must be >= 1"));
        }
        if self.cols > u32::MAX as usize || self.len() > u32::MAX as usize {
            return Err(GridError::new("grid", "lattice too large"));
        }
        let n = self.len();
        for (name, len) in [
            ("vegetation", self.vegetation.len()),
            ("density", self.density.len()),
            ("moisture", self.moisture.len()),
            ("elevation", self.elevation.len()),
        ] {
            if len != n {
                return Err(GridError::new(name, format!("has {len} cells, grid has {n}")));
            }
        }
        if !(self.cell_size.is_finite() && self.cell_size > 0.0) {
            return Err(GridError::new("cell_size_m", "must be > 0"));
        }
        if !(self.wind_kmh.is_finite() && self.wind_kmh >= 0.0) {
            return Err(GridError::new("wind_kmh", "must be >= 0"));
        }
        if !self.wind_direction.is_finite() {
            return Err(GridError::new("wind_direction_rad", "must be finite"));
        }
        let pr = &self.probabilities;
        if !(0.0..=1.0).contains(&pr.p0) {
            return Err(GridError::new("probabilities.p0", "must lie in [0, 1]"));
        }
        if self.moisture.iter().any(|m| !(m.is_finite() && *m >= 0.0)) {
            return Err(GridError::new("moisture", "values must be >= 0"));
        }
        if self.elevation.iter().any(|e| !e.is_finite()) {
            return Err(GridError::new("elevation", "values must be finite"));
        }
        if !self.is_flat() && pr.slope_coefficient.is_none() {
            return Err(GridError::new(
                "probabilities.slope_coefficient",
                "required when elevation is not constant",
            ));
        }
        if self.ignition.is_empty() {
            return Err(GridError::new("ignition", "at least one cell required"));
        }
        if let Some(&(r, c)) = self.ignition.iter().find(|(r, c)| *r >= self.rows || *c >= self.cols) {
            return Err(GridError::new("ignition", format!("cell ({r}, {c}) outside the grid")));
        }
        if !(self.minutes_per_step.is_finite() && self.minutes_per_step > 0.0) {
            return Err(GridError::new("minutes_per_step", "must be > 0"));
        }
        Ok(())
    }
}

/// Step length that makes an unimpeded downwind front advance one cell per
/// step at the physical rate of spread of grass. `None` in still air,
/// where the rate-of-spread regression predicts no spread.
pub fn default_minutes_per_step(
    cell_size: f64,
    wind_kmh: f64,
    grass_moisture_fraction: f64,
    spread: &SpreadParams,
) -> Option<f64> {
    let ros_m_per_min = rate_of_spread(wind_kmh, grass_moisture_fraction * 100.0, spread) * 1000.0 / 60.0;
    (ros_m_per_min > 0.0).then(|| cell_size / ros_m_per_min)
}

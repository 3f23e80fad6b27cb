//! Per-cell category fields, generated from seeded weights or spelled out
//! row by row.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::file::GridConfig;
use super::ScenarioError;
use crate::ca::{derive_seed, Density, Vegetation};

const WEIGHT_TOLERANCE: f64 = 1e-9;
const VEGETATION_STREAM: u64 = 0x7665_6765;
const DENSITY_STREAM: u64 = 0x6465_6e73;

/// A category with a one-character code for inline rows.
pub trait Category: Copy + Ord {
    fn code(self) -> char;
    fn from_code(c: char) -> Option<Self>;
    fn uniform() -> BTreeMap<Self, f64>;
}

impl Category for Vegetation {
    fn code(self) -> char {
        match self {
            Vegetation::None => '.',
            Vegetation::Grass => 'g',
            Vegetation::Shrub => 's',
        }
    }
    fn from_code(c: char) -> Option<Self> {
        match c {
            '.' => Some(Vegetation::None),
            'g' => Some(Vegetation::Grass),
            's' => Some(Vegetation::Shrub),
            _ => None,
        }
    }
    fn uniform() -> BTreeMap<Self, f64> {
        BTreeMap::from([(Vegetation::Grass, 0.5), (Vegetation::Shrub, 0.5)])
    }
}

impl Category for Density {
    fn code(self) -> char {
        match self {
            Density::Sparse => 's',
            Density::Normal => 'n',
            Density::Dense => 'd',
        }
    }
    fn from_code(c: char) -> Option<Self> {
        match c {
            's' => Some(Density::Sparse),
            'n' => Some(Density::Normal),
            'd' => Some(Density::Dense),
            _ => None,
        }
    }
    fn uniform() -> BTreeMap<Self, f64> {
        let third = 1.0 / 3.0;
        BTreeMap::from([
            (Density::Sparse, third),
            (Density::Normal, third),
            (Density::Dense, third),
        ])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSpec<T: Ord> {
    /// Independent draw per cell with the given category weights.
    Generate { weights: BTreeMap<T, f64> },
    /// One string per row, one category code per cell
    /// (vegetation `.`/`g`/`s`, density `s`/`n`/`d`).
    Rows(Vec<String>),
}

impl<T: Category> Default for FieldSpec<T> {
    fn default() -> Self {
        FieldSpec::Generate { weights: T::uniform() }
    }
}

impl<T: Category> FieldSpec<T> {
    pub fn validate(&self, field: &str, rows: usize, cols: usize) -> Result<(), ScenarioError> {
        match self {
            FieldSpec::Generate { weights } => {
                if weights.values().any(|w| !(w.is_finite() && *w >= 0.0)) {
                    return Err(ScenarioError::invalid(field, "weights must be >= 0"));
                }
                let sum: f64 = weights.values().sum();
                if (sum - 1.0).abs() > WEIGHT_TOLERANCE {
                    return Err(ScenarioError::invalid(
                        field,
                        format!("weights sum to {sum}, expected 1"),
                    ));
                }
                Ok(())
            }
            FieldSpec::Rows(lines) => {
                if lines.len() != rows {
                    return Err(ScenarioError::invalid(
                        field,
                        format!("has {} rows, expected {rows}", lines.len()),
                    ));
                }
                for (i, line) in lines.iter().enumerate() {
                    if line.chars().count() != cols {
                        return Err(ScenarioError::invalid(field, format!("row {i} must have {cols} cells")));
                    }
                    if let Some(c) = line.chars().find(|&c| T::from_code(c).is_none()) {
                        return Err(ScenarioError::invalid(field, format!("unknown code {c:?} in row {i}")));
                    }
                }
                Ok(())
            }
        }
    }

    fn realise(&self, field: &str, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Result<Vec<T>, ScenarioError> {
        self.validate(field, rows, cols)?;
        Ok(match self {
            FieldSpec::Generate { weights } => {
                let cats: Vec<(T, f64)> = weights
                    .iter()
                    .filter(|(_, w)| **w > 0.0)
                    .map(|(k, w)| (*k, *w))
                    .collect();
                let last = cats.last().map(|c| c.0).expect("weights sum to one");
                (0..rows * cols)
                    .map(|_| {
                        let u: f64 = rng.gen();
                        let mut acc = 0.0;
                        for &(cat, w) in &cats {
                            acc += w;
                            if u < acc {
                                return cat;
                            }
                        }
                        last
                    })
                    .collect()
            }
            FieldSpec::Rows(lines) => lines
                .iter()
                .flat_map(|l| l.chars().map(|c| T::from_code(c).expect("validated")))
                .collect(),
        })
    }
}

/// Realised per-cell fields, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Fields {
    pub vegetation: Vec<Vegetation>,
    pub density: Vec<Density>,
    /// Moisture from the per-type defaults, fraction.
    pub moisture: Vec<f64>,
}

/// Draws the vegetation and density fields for `seed`. Each field has its
/// own random stream, so changing one set of weights leaves the other
/// field untouched.
pub fn generate_fields(grid: &GridConfig, seed: u64) -> Result<Fields, ScenarioError> {
    let mut veg_rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, VEGETATION_STREAM));
    let mut den_rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, DENSITY_STREAM));
    let vegetation = grid
        .vegetation
        .realise("grid.vegetation", grid.rows, grid.cols, &mut veg_rng)?;
    let density = grid
        .density
        .realise("grid.density", grid.rows, grid.cols, &mut den_rng)?;
    let moisture = vegetation.iter().map(|&v| grid.moisture_by_type.get(v)).collect();
    Ok(Fields {
        vegetation,
        density,
        moisture,
    })
}

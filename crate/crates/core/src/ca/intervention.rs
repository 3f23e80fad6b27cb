//! Drone water line laid across the fire front.

use serde::{Deserialize, Serialize};

use super::engine::SimState;
use super::grid::CellState;
use crate::swarm::{extinguishable_meters, PlatformConfig, SwarmError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FrontOrientation {
    /// Front runs along rows or columns; one cell covers `l` metres.
    #[default]
    Straight,
    /// Front runs along a diagonal; one cell covers `sqrt(2) l` metres.
    Diagonal,
}

/// Number of lattice cells a front of `meters` spans.
pub fn compute_nc(meters: f64, cell_size: f64, orientation: FrontOrientation) -> usize {
    let per_cell = match orientation {
        FrontOrientation::Straight => cell_size,
        FrontOrientation::Diagonal => std::f64::consts::SQRT_2 * cell_size,
    };
    (meters / per_cell).floor().max(0.0) as usize
}

/// What the platforms will do once their drones reach the fire.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterventionPlan {
    pub platform: PlatformConfig,
    pub platforms: u32,
    /// Critical flow used for sizing, L min⁻¹ m⁻¹; `None` when the cell
    /// count was pinned directly.
    pub cf_l_min_m: Option<f64>,
    /// Total cells held wet by all platforms.
    pub cells: usize,
}

impl InterventionPlan {
    /// Sizes the line from the platforms' sustained flow.
    pub fn sized(
        platform: PlatformConfig,
        platforms: u32,
        cf_l_min_m: f64,
        cell_size: f64,
        orientation: FrontOrientation,
    ) -> Result<Self, SwarmError> {
        let meters = extinguishable_meters(&platform, platforms, cf_l_min_m)?;
        Ok(Self {
            platform,
            platforms,
            cf_l_min_m: Some(cf_l_min_m),
            cells: compute_nc(meters, cell_size, orientation),
        })
    }

    /// Pins `cells_per_platform` cells for each platform.
    pub fn pinned(platform: PlatformConfig, platforms: u32, cells_per_platform: usize) -> Self {
        Self {
            platform,
            platforms,
            cf_l_min_m: None,
            cells: cells_per_platform * platforms as usize,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InterventionOutcome {
    Applied {
        step: u64,
        /// `(row, col)` of each wetted cell, in selection order.
        cells: Vec<(usize, usize)>,
        /// Burning cells on the front when the line was laid.
        front_size: usize,
    },
    /// The fire had no front left to attack.
    NoFront {
        step: u64,
    },
    /// The plan holds zero cells.
    Skipped,
    AlreadyApplied,
}

/// Burning cells touching at least one Fuel cell, ascending index.
pub fn fire_front(state: &SimState) -> Vec<usize> {
    state
        .cells
        .iter()
        .enumerate()
        .filter(|&(i, &s)| {
            s == CellState::Burning && state.moore_neighbors(i).any(|n| state.cells[n] == CellState::Fuel)
        })
        .map(|(i, _)| i)
        .collect()
}

/// Picks up to `n` front cells nearest the platform at `position`
/// (`[row, col]`, lattice units), grown as one 8-connected chain.
///
/// The chain starts at the front cell closest to the platform and
/// repeatedly absorbs the closest front cell adjacent to it; ties go to
/// the lower row-major index. If that component of the front runs out
/// before `n` cells, a new chain starts at the closest remaining front
/// cell. Returns the chosen indices and the front size.
pub fn select_water_line(state: &SimState, position: [f64; 2], n: usize) -> (Vec<usize>, usize) {
    let front = fire_front(state);
    let size = front.len();
    if n == 0 || front.is_empty() {
        return (Vec::new(), size);
    }
    let cols = state.cols;
    let dist: Vec<f64> = front
        .iter()
        .map(|&i| {
            let (r, c) = ((i / cols) as f64, (i % cols) as f64);
            (r - position[0]).hypot(c - position[1])
        })
        .collect();
    let adjacent = |a: usize, b: usize| {
        let (ar, ac) = ((a / cols) as i64, (a % cols) as i64);
        let (br, bc) = ((b / cols) as i64, (b % cols) as i64);
        (ar - br).abs() <= 1 && (ac - bc).abs() <= 1
    };

    let mut chosen = vec![false; front.len()];
    let mut reachable = vec![false; front.len()];
    let mut line = Vec::with_capacity(n.min(front.len()));
    while line.len() < n && line.len() < front.len() {
        // Nearest reachable cell, else nearest unchosen cell overall.
        let pick = |only_reachable: bool| {
            (0..front.len())
                .filter(|&k| !chosen[k] && (!only_reachable || reachable[k]))
                .min_by(|&a, &b| dist[a].total_cmp(&dist[b]).then(front[a].cmp(&front[b])))
        };
        let k = match pick(true).or_else(|| pick(false)) {
            Some(k) => k,
            None => break,
        };
        chosen[k] = true;
        line.push(front[k]);
        for j in 0..front.len() {
            if !chosen[j] && adjacent(front[k], front[j]) {
                reachable[j] = true;
            }
        }
    }
    (line, size)
}

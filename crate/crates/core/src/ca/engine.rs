use serde::{Deserialize, Serialize};

use super::draws::{DrawSource, HashDraws};
use super::grid::{CellState, GridError, GridScenario, Vegetation};
use super::intervention::{self, InterventionOutcome, InterventionPlan};
use super::rules;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CellCounts {
    pub empty: usize,
    pub fuel: usize,
    pub burning: usize,
    pub burned: usize,
    pub water: usize,
}

impl CellCounts {
    pub fn census(cells: &[CellState]) -> Self {
        let mut c = Self::default();
        for &s in cells {
            *c.slot(s) += 1;
        }
        c
    }

    pub fn total(&self) -> usize {
        self.empty + self.fuel + self.burning + self.burned + self.water
    }

    fn slot(&mut self, s: CellState) -> &mut usize {
        match s {
            CellState::Empty => &mut self.empty,
            CellState::Fuel => &mut self.fuel,
            CellState::Burning => &mut self.burning,
            CellState::Burned => &mut self.burned,
            CellState::Water => &mut self.water,
        }
    }

    fn shift(&mut self, from: CellState, to: CellState) {
        *self.slot(from) -= 1;
        *self.slot(to) += 1;
    }
}

/// Lattice state at one step.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub rows: usize,
    pub cols: usize,
    pub step: u64,
    pub clock_min: f64,
    /// Row-major cell states.
    pub cells: Vec<CellState>,
    pub counts: CellCounts,
    /// Cells turned to water, once an intervention has been resolved.
    pub water_line: Option<Vec<usize>>,
}

impl SimState {
    pub fn initial(scenario: &GridScenario) -> Self {
        let mut cells: Vec<CellState> = scenario
            .vegetation
            .iter()
            .map(|v| match v {
                Vegetation::None => CellState::Empty,
                _ => CellState::Fuel,
            })
            .collect();
        for &(r, c) in &scenario.ignition {
            let i = scenario.index(r, c);
            if cells[i] == CellState::Fuel {
                cells[i] = CellState::Burning;
            }
        }
        let counts = CellCounts::census(&cells);
        Self {
            rows: scenario.rows,
            cols: scenario.cols,
            step: 0,
            clock_min: 0.0,
            cells,
            counts,
            water_line: None,
        }
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> CellState {
        self.cells[row * self.cols + col]
    }

    pub fn set(&mut self, idx: usize, to: CellState) {
        let from = self.cells[idx];
        if from != to {
            self.cells[idx] = to;
            self.counts.shift(from, to);
        }
    }

    /// Moore-1 neighbour indices of `idx`.
    pub fn moore_neighbors(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        let (r, c) = ((idx / self.cols) as i64, (idx % self.cols) as i64);
        let (rows, cols) = (self.rows as i64, self.cols as i64);
        (-1i64..=1)
            .flat_map(move |dr| (-1i64..=1).map(move |dc| (r + dr, c + dc)))
            .filter(move |&(nr, nc)| (nr, nc) != (r, c) && nr >= 0 && nc >= 0 && nr < rows && nc < cols)
            .map(move |(nr, nc)| (nr * cols + nc) as usize)
    }
}

/// One row of the burned-area time series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeSeriesRecord {
    pub step: u64,
    pub clock_min: f64,
    pub burning_cells: usize,
    pub burned_cells: usize,
    pub water_cells: usize,
    pub burned_area_m2: f64,
}

#[derive(Debug, Clone, Copy)]
struct KernelOffset {
    d_row: i32,
    d_col: i32,
    wind: f64,
    dist: f64,
}

/// Per-run cache of the factors of the ignition probability.
#[derive(Debug, Clone)]
struct SpreadKernel {
    offsets: Vec<KernelOffset>,
    veg: Vec<f64>,
    den: Vec<f64>,
    moisture: Vec<f64>,
    p0: f64,
    slope: Option<f64>,
}

impl SpreadKernel {
    fn new(s: &GridScenario) -> Self {
        let pr = &s.probabilities;
        let speed = s.wind_for_coefficients();
        let offsets = rules::neighborhood(s.wind_kmh)
            .into_iter()
            .map(|(d_row, d_col)| {
                let cos = rules::cos_to_wind(d_row, d_col, s.wind_direction);
                KernelOffset {
                    d_row,
                    d_col,
                    wind: rules::p_wind(cos.clamp(-1.0, 1.0).acos(), speed, pr.c1, pr.c2),
                    dist: s.cell_size * f64::from(d_row).hypot(f64::from(d_col)),
                }
            })
            .collect();
        Self {
            offsets,
            veg: s.vegetation.iter().map(|&v| pr.p_veg.get(v)).collect(),
            den: s.density.iter().map(|&d| pr.p_den.get(d)).collect(),
            moisture: s
                .moisture
                .iter()
                .map(|&m| rules::p_moisture(m, pr.moisture_coefficient, pr.moisture_units))
                .collect(),
            p0: pr.p0,
            slope: pr.slope_coefficient,
        }
    }

    #[inline]
    fn probability(&self, elevation: &[f64], source: usize, target: usize, off: &KernelOffset) -> f64 {
        let ps = match self.slope {
            Some(a_s) => rules::p_slope(elevation[target], elevation[source], off.dist, a_s),
            None => 1.0,
        };
        rules::combine(
            self.p0,
            self.veg[target],
            self.den[target],
            off.wind,
            ps,
            self.moisture[target],
        )
    }
}

/// A single stochastic fire on one lattice.
pub struct Simulation<'a, D: DrawSource = HashDraws> {
    scenario: &'a GridScenario,
    kernel: SpreadKernel,
    draws: D,
    state: SimState,
    burning: Vec<usize>,
}

impl<'a> Simulation<'a, HashDraws> {
    pub fn new(scenario: &'a GridScenario) -> Result<Self, GridError> {
        Self::with_draws(scenario, HashDraws::new(scenario.seed))
    }
}

impl<'a, D: DrawSource> Simulation<'a, D> {
    pub fn with_draws(scenario: &'a GridScenario, draws: D) -> Result<Self, GridError> {
        scenario.validate()?;
        let state = SimState::initial(scenario);
        let burning = burning_cells(&state);
        Ok(Self {
            scenario,
            kernel: SpreadKernel::new(scenario),
            draws,
            state,
            burning,
        })
    }

    pub fn state(&self) -> &SimState {
        &self.state
    }

    pub fn scenario(&self) -> &GridScenario {
        self.scenario
    }

    pub fn is_active(&self) -> bool {
        self.state.counts.burning > 0
    }

    pub fn record(&self) -> TimeSeriesRecord {
        let c = &self.state.counts;
        TimeSeriesRecord {
            step: self.state.step,
            clock_min: self.state.clock_min,
            burning_cells: c.burning,
            burned_cells: c.burned,
            water_cells: c.water,
            burned_area_m2: c.burned as f64 * self.scenario.cell_size * self.scenario.cell_size,
        }
    }

    /// Advances the lattice by one synchronous step.
    ///
    /// Each Burning cell gets one attempt on every Fuel cell of its
    /// neighbourhood and then burns out. A cell lit during this step
    /// cannot spread until the next one, which keeps the in-place update
    /// equivalent to a double-buffered one.
    pub fn step(&mut self) {
        let (rows, cols) = (self.scenario.rows as i64, self.scenario.cols as i64);
        let elevation = &self.scenario.elevation;
        let mut lit = Vec::with_capacity(self.burning.len() * 2);
        for &src in &self.burning {
            let (r, c) = ((src as i64) / cols, (src as i64) % cols);
            for off in &self.kernel.offsets {
                let (nr, nc) = (r + i64::from(off.d_row), c + i64::from(off.d_col));
                if nr < 0 || nc < 0 || nr >= rows || nc >= cols {
                    continue;
                }
                let dst = (nr * cols + nc) as usize;
                if self.state.cells[dst] != CellState::Fuel {
                    continue;
                }
                let p = self.kernel.probability(elevation, src, dst, off);
                if self.draws.uniform(src, dst) < p {
                    self.state.cells[dst] = CellState::Burning;
                    lit.push(dst);
                }
            }
        }
        for &src in &self.burning {
            self.state.cells[src] = CellState::Burned;
        }
        let c = &mut self.state.counts;
        c.burned += self.burning.len();
        c.burning = lit.len();
        c.fuel -= lit.len();
        self.burning = lit;
        self.state.step += 1;
        self.state.clock_min = self.state.step as f64 * self.scenario.minutes_per_step;
    }

    /// Lays the water line of `plan`, once. Later calls leave the lattice
    /// untouched and report the line already laid.
    pub fn apply_intervention(&mut self, plan: &InterventionPlan) -> InterventionOutcome {
        if self.state.water_line.is_some() {
            return InterventionOutcome::AlreadyApplied;
        }
        if plan.cells == 0 {
            return InterventionOutcome::Skipped;
        }
        let (line, front_size) = intervention::select_water_line(&self.state, plan.platform.position, plan.cells);
        if line.is_empty() {
            return InterventionOutcome::NoFront { step: self.state.step };
        }
        for &i in &line {
            self.state.set(i, CellState::Water);
        }
        let cells = &self.state.cells;
        self.burning.retain(|&i| cells[i] == CellState::Burning);
        let coords = line.iter().map(|&i| self.scenario.coords(i)).collect();
        self.state.water_line = Some(line);
        InterventionOutcome::Applied {
            step: self.state.step,
            cells: coords,
            front_size,
        }
    }

    pub fn into_state(self) -> SimState {
        self.state
    }
}

fn burning_cells(state: &SimState) -> Vec<usize> {
    state
        .cells
        .iter()
        .enumerate()
        .filter(|(_, s)| **s == CellState::Burning)
        .map(|(i, _)| i)
        .collect()
}

/// Result of a full run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    /// One record per step, starting at step 0.
    pub series: Vec<TimeSeriesRecord>,
    pub final_state: SimState,
    pub intervention: Option<InterventionOutcome>,
    /// No Burning cell remained when the run stopped.
    pub extinct: bool,
}

impl RunOutcome {
    pub fn final_record(&self) -> &TimeSeriesRecord {
        self.series.last().expect("series always holds step 0")
    }
}

/// Runs the fire until it dies out or `scenario.max_steps` is reached.
/// At least one step is always taken. With a plan, the water line is laid
/// at the first step whose clock has reached the platform's arrival time.
pub fn run(scenario: &GridScenario, plan: Option<&InterventionPlan>) -> Result<RunOutcome, GridError> {
    run_with(Simulation::new(scenario)?, plan, |_| {})
}

/// [`run`] with a callback observing the state before every step and
/// after the last one.
pub fn run_with<D: DrawSource>(
    mut sim: Simulation<'_, D>,
    plan: Option<&InterventionPlan>,
    mut observe: impl FnMut(&SimState),
) -> Result<RunOutcome, GridError> {
    let max_steps = sim.scenario().max_steps;
    let mut series = vec![sim.record()];
    let mut outcome = None;
    observe(sim.state());
    loop {
        if let Some(plan) = plan {
            if outcome.is_none() && sim.state().clock_min >= plan.platform.intervention_min {
                outcome = Some(sim.apply_intervention(plan));
            }
        }
        sim.step();
        series.push(sim.record());
        observe(sim.state());
        if !sim.is_active() || sim.state().step >= max_steps {
            break;
        }
    }
    let extinct = !sim.is_active();
    Ok(RunOutcome {
        series,
        final_state: sim.into_state(),
        intervention: outcome,
        extinct,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn certain_spread(rows: usize, cols: usize) -> GridScenario {
        let mut g = GridScenario::uniform(rows, cols);
        g.probabilities.p0 = 1.0;
        g.moisture = vec![0.0; rows * cols];
        g
    }

    #[test]
    fn certain_spread_lights_the_ring() {
        let g = certain_spread(5, 5);
        let mut sim = Simulation::new(&g).unwrap();
        sim.step();
        let s = sim.state();
        assert_eq!(s.get(2, 2), CellState::Burned);
        for r in 1..=3 {
            for c in 1..=3 {
                if (r, c) != (2, 2) {
                    assert_eq!(s.get(r, c), CellState::Burning, "({r},{c})");
                }
            }
        }
        assert_eq!(s.counts.burning, 8);
        assert_eq!(s.counts, CellCounts::census(&s.cells));
    }

    #[test]
    fn zero_base_probability_dies_after_one_step() {
        let mut g = GridScenario::uniform(9, 9);
        g.probabilities.p0 = 0.0;
        let out = run(&g, None).unwrap();
        assert!(out.extinct);
        assert_eq!(out.series.len(), 2);
        assert_eq!(out.final_record().burned_cells, 1);
    }

    #[test]
    fn bare_ground_stops_at_step_one() {
        let mut g = GridScenario::uniform(6, 6);
        g.vegetation = vec![Vegetation::None; 36];
        let out = run(&g, None).unwrap();
        assert_eq!(out.final_state.step, 1);
        assert_eq!(out.final_record().burned_area_m2, 0.0);
    }

    #[test]
    fn seeded_runs_repeat() {
        let mut g = GridScenario::uniform(40, 40);
        g.moisture = vec![0.02; 1600];
        g.wind_kmh = 15.0;
        g.seed = 99;
        let a = run(&g, None).unwrap();
        let b = run(&g, None).unwrap();
        assert_eq!(a, b);
        g.seed = 100;
        let c = run(&g, None).unwrap();
        assert_ne!(a.series, c.series);
    }

    #[test]
    fn kernel_matches_scenario_probability() {
        let mut g = GridScenario::uniform(7, 7);
        g.wind_kmh = 30.0;
        g.wind_direction = 1.1;
        g.probabilities.slope_coefficient = Some(0.078);
        for i in 0..49 {
            g.elevation[i] = (i * 7 % 11) as f64;
            g.vegetation[i] = if i % 3 == 0 {
                Vegetation::Shrub
            } else {
                Vegetation::Grass
            };
            g.moisture[i] = 0.01 * (i % 5) as f64;
        }
        let k = SpreadKernel::new(&g);
        let src = g.index(3, 3);
        for off in &k.offsets {
            let (tr, tc) = ((3 + off.d_row) as usize, (3 + off.d_col) as usize);
            let dst = g.index(tr, tc);
            assert_eq!(k.probability(&g.elevation, src, dst, off), g.p_burn((3, 3), (tr, tc)));
        }
    }

    #[test]
    fn clock_tracks_steps() {
        let mut g = certain_spread(30, 30);
        g.minutes_per_step = 0.37;
        let out = run(&g, None).unwrap();
        for r in &out.series {
            assert_eq!(r.clock_min, r.step as f64 * 0.37);
            assert_eq!(r.burned_area_m2, r.burned_cells as f64 * 4.0);
        }
    }
}

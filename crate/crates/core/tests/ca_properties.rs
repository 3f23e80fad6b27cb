use std::collections::{BTreeMap, HashSet};

use firefront::ca::{run, run_with, CellState, Density, InterventionPlan, MoistureUnits, Simulation, Vegetation};
use firefront::scenario::{FieldSpec, ScenarioFile};
use firefront::swarm::PlatformConfig;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_file(rng: &mut ChaCha8Rng, size: usize) -> ScenarioFile {
    let mut f = ScenarioFile::with_grid(size, size, rng.gen());
    let g = f.grid.as_mut().unwrap();
    let none: f64 = rng.gen_range(0.0..0.2);
    let grass: f64 = rng.gen_range(0.0..1.0 - none);
    g.vegetation = FieldSpec::Generate {
        weights: BTreeMap::from([
            (Vegetation::None, none),
            (Vegetation::Grass, grass),
            (Vegetation::Shrub, 1.0 - none - grass),
        ]),
    };
    g.wind_kmh = rng.gen_range(0.0..40.0);
    g.wind_direction_rad = rng.gen_range(0.0..std::f64::consts::TAU);
    g.probabilities.moisture_units = if rng.gen_bool(0.7) {
        MoistureUnits::Fraction
    } else {
        MoistureUnits::Percent
    };
    g.minutes_per_step = Some(rng.gen_range(0.5..2.0));
    g.max_steps = 200;
    let n = rng.gen_range(1..4);
    g.ignition = Some(
        (0..n)
            .map(|_| [rng.gen_range(0..size), rng.gen_range(0..size)])
            .collect(),
    );
    f
}

fn random_plan(rng: &mut ChaCha8Rng, size: usize) -> InterventionPlan {
    let platform = PlatformConfig {
        intervention_min: rng.gen_range(0.0..20.0),
        position: [rng.gen_range(0.0..size as f64), rng.gen_range(0.0..size as f64)],
        ..PlatformConfig::default()
    };
    InterventionPlan::pinned(platform, 1, rng.gen_range(0..60))
}

/// Runs and returns every observed grid together with the cells that were
/// ever Burning.
fn history(
    scenario: &firefront::ca::GridScenario,
    plan: Option<&InterventionPlan>,
) -> (Vec<Vec<CellState>>, HashSet<usize>) {
    let mut grids = Vec::new();
    let mut lit = HashSet::new();
    run_with(Simulation::new(scenario).unwrap(), plan, |s| {
        lit.extend(
            s.cells
                .iter()
                .enumerate()
                .filter(|(_, c)| **c == CellState::Burning)
                .map(|(i, _)| i),
        );
        grids.push(s.cells.clone());
    })
    .unwrap();
    (grids, lit)
}

#[test]
fn transitions_conservation_and_monotone_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..25 {
        let file = random_file(&mut rng, 40);
        let scenario = file.resolve().unwrap();
        let plan = random_plan(&mut rng, 40);
        let (grids, _) = history(&scenario, Some(&plan));
        for w in grids.windows(2) {
            for (a, b) in w[0].iter().zip(&w[1]) {
                assert!(a == b || a.may_become(*b), "{a:?} -> {b:?}");
                if *a == CellState::Burning {
                    assert!(matches!(b, CellState::Burned | CellState::Water));
                }
            }
        }
        let out = run(&scenario, Some(&plan)).unwrap();
        for w in out.series.windows(2) {
            assert!(w[1].burned_cells >= w[0].burned_cells);
            assert_eq!(w[1].step, w[0].step + 1);
        }
        let census = firefront::ca::CellCounts::census(&out.final_state.cells);
        assert_eq!(census, out.final_state.counts);
        assert_eq!(census.total(), 1600);
        let last = out.final_record();
        assert_eq!(last.burned_area_m2, last.burned_cells as f64 * 4.0);
        assert_eq!(out.series.len() as u64, last.step + 1);
    }
}

#[test]
fn treated_fire_is_a_subset_of_baseline() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..40 {
        let file = random_file(&mut rng, 40);
        let scenario = file.resolve().unwrap();
        let plan = random_plan(&mut rng, 40);
        let (_, base) = history(&scenario, None);
        let (_, treated) = history(&scenario, Some(&plan));
        assert!(treated.is_subset(&base));

        let b = run(&scenario, None).unwrap().series;
        let t = run(&scenario, Some(&plan)).unwrap().series;
        for k in 0..b.len().max(t.len()) {
            let bk = &b[k.min(b.len() - 1)];
            let tk = &t[k.min(t.len() - 1)];
            assert!(tk.burned_cells <= bk.burned_cells, "step {k}");
        }
    }
}

#[test]
fn seed_determinism() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let file = random_file(&mut rng, 30);
        let plan = random_plan(&mut rng, 30);
        let a = history(&file.resolve().unwrap(), Some(&plan));
        let b = history(&file.resolve().unwrap(), Some(&plan));
        assert_eq!(a.0, b.0);
    }
}

/// Ever-burned counts in the 8 open wedges between the axes and the
/// diagonals, on the 4 axis rays and on the 4 diagonal rays.
fn octant_stats(cells: &[CellState], size: usize) -> ([f64; 8], [f64; 4], [f64; 4]) {
    let c = (size / 2) as i64;
    let (mut wedges, mut axes, mut diags) = ([0.0; 8], [0.0; 4], [0.0; 4]);
    for (i, s) in cells.iter().enumerate() {
        if !matches!(s, CellState::Burned | CellState::Burning) {
            continue;
        }
        let (dr, dc) = ((i / size) as i64 - c, (i % size) as i64 - c);
        if dr == 0 && dc == 0 {
            continue;
        }
        let (ar, ac) = (dr.abs(), dc.abs());
        if dr == 0 || dc == 0 {
            let k = if dr < 0 {
                0
            } else if dc > 0 {
                1
            } else if dr > 0 {
                2
            } else {
                3
            };
            axes[k] += 1.0;
        } else if ar == ac {
            let k = match (dr < 0, dc > 0) {
                (true, true) => 0,
                (false, true) => 1,
                (false, false) => 2,
                (true, false) => 3,
            };
            diags[k] += 1.0;
        } else {
            let quadrant = match (dr < 0, dc > 0) {
                (true, true) => 0,
                (false, true) => 1,
                (false, false) => 2,
                (true, false) => 3,
            };
            let steep = ar > ac;
            wedges[quadrant * 2 + usize::from(steep)] += 1.0;
        }
    }
    (wedges, axes, diags)
}

fn assert_exchangeable(samples: &[Vec<f64>], what: &str) {
    let k = samples[0].len();
    let n = samples.len() as f64;
    for j in 0..k {
        let d: Vec<f64> = samples
            .iter()
            .map(|s| s[j] - s.iter().sum::<f64>() / k as f64)
            .collect();
        let mean = d.iter().sum::<f64>() / n;
        let var = d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let se = (var / n).sqrt();
        assert!(mean.abs() <= 3.0 * se, "{what}[{j}]: {mean} vs 3 SE {}", 3.0 * se);
    }
}

#[test]
fn still_air_spread_is_isotropic() {
    let size = 31;
    let mut file = ScenarioFile::with_grid(size, size, 0);
    let g = file.grid.as_mut().unwrap();
    g.vegetation = FieldSpec::Generate {
        weights: BTreeMap::from([(Vegetation::Grass, 1.0)]),
    };
    g.density = FieldSpec::Generate {
        weights: BTreeMap::from([(Density::Normal, 1.0)]),
    };
    g.wind_kmh = 0.0;
    g.minutes_per_step = Some(1.0);
    g.probabilities.p0 = 0.35;
    g.probabilities.moisture_units = MoistureUnits::Fraction;
    g.max_steps = 12;

    let (mut wedges, mut axes, mut diags) = (Vec::new(), Vec::new(), Vec::new());
    let mut total = 0.0;
    for seed in 0..1200u64 {
        let out = run(&file.resolve_with_seed(seed).unwrap(), None).unwrap();
        let (w, a, d) = octant_stats(&out.final_state.cells, size);
        total += w.iter().sum::<f64>();
        wedges.push(w.to_vec());
        axes.push(a.to_vec());
        diags.push(d.to_vec());
    }
    assert!(total > 1200.0 * 20.0, "fire too small to test symmetry: {total}");
    assert_exchangeable(&wedges, "wedge");
    assert_exchangeable(&axes, "axis");
    assert_exchangeable(&diags, "diagonal");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn any_seed_keeps_cell_total(seed in any::<u64>(), wind in 0.0..45.0f64, dir in 0.0..6.3f64) {
        let mut file = ScenarioFile::with_grid(25, 25, seed);
        let g = file.grid.as_mut().unwrap();
        g.wind_kmh = wind;
        g.wind_direction_rad = dir;
        g.minutes_per_step = Some(1.0);
        g.probabilities.moisture_units = MoistureUnits::Fraction;
        let out = run(&file.resolve().unwrap(), None).unwrap();
        for r in &out.series {
            prop_assert!(r.burning_cells + r.burned_cells <= 625);
        }
        prop_assert_eq!(out.final_state.counts.total(), 625);
    }
}

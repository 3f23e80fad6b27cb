//! Data bundles behind the critical-flow, swarm and spread figures.
//!
//! Every bundle is a list of named files. Output is a pure function of
//! the inputs, so writing a bundle twice gives identical bytes.

use std::fmt::Write as _;
use std::path::Path;

use crate::ca::{InterventionOutcome, InterventionPlan};
use crate::experiment::{run_paired_replicates, run_replicates, PairedSummary, Summary};
use crate::physics::{critical_flow, FireEnvironment, FuelModel, IntensityPath, SpreadParams};
use crate::scenario::output::{write_text, Curve};
use crate::scenario::{write_curve, ScenarioError, ScenarioFile};
use crate::swarm::{drone_flow, PlatformConfig};

/// The spread scenario shipped with the crate.
pub const FIG5_SCENARIO: &str = include_str!("../../../scenarios/fig5.json");

/// Flame lengths for the flame-length path, m.
pub const FIG2_FLAME_LENGTHS: (f64, f64, f64) = (0.1, 10.0, 0.05);
pub const FIG2_INTENSITY_PER_AREA: [f64; 2] = [500.0, 2000.0];
pub const FIG2_WINDS_MS: [f64; 2] = [0.0, 10.0];

pub const FIG3_WINDS_KMH: (f64, f64, f64) = (0.0, 30.0, 0.1);
pub const FIG3_MOISTURES_PCT: (f64, f64, f64) = (5.0, 30.0, 0.1);
pub const FIG3A_MOISTURES: [f64; 6] = [10.0, 14.0, 18.0, 22.0, 26.0, 30.0];
pub const FIG3B_WINDS: [f64; 4] = [15.0, 20.0, 25.0, 30.0];
pub const FIG3_DEPTHS: [f64; 4] = [1.0, 2.0, 3.0, 4.0];

/// Critical flow giving 72 m of front for one 400 L/min platform, the
/// middle of the reported 70 to 75 m.
pub const FIG4_PINNED_CF: f64 = 400.0 / 72.0;
pub const FIG4_PAYLOADS: [f64; 5] = [10.0, 20.0, 30.0, 40.0, 50.0];
pub const FIG4_DRONES: [u32; 5] = [40, 80, 120, 160, 200];
pub const FIG4_WINDS_KMH: (f64, f64, f64) = (1.0, 30.0, 0.5);

pub const FIG5_WINDS_KMH: [f64; 3] = [10.0, 20.0, 30.0];
pub const FIG5_ARRIVALS_MIN: [f64; 4] = [10.0, 15.0, 20.0, 25.0];

#[derive(Debug, Clone, PartialEq)]
pub enum BundleFile {
    Curve(Curve),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Bundle {
    pub files: Vec<(String, BundleFile)>,
}

impl Bundle {
    fn curve(&mut self, name: &str, c: Curve) {
        self.files.push((format!("{name}.csv"), BundleFile::Curve(c)));
    }

    fn text(&mut self, name: &str, t: String) {
        self.files.push((name.to_string(), BundleFile::Text(t)));
    }

    pub fn get_curve(&self, name: &str) -> Option<&Curve> {
        self.files.iter().find_map(|(n, f)| match f {
            BundleFile::Curve(c) if n == name || n.strip_suffix(".csv") == Some(name) => Some(c),
            _ => None,
        })
    }

    pub fn get_text(&self, name: &str) -> Option<&str> {
        self.files.iter().find_map(|(n, f)| match f {
            BundleFile::Text(t) if n == name => Some(t.as_str()),
            _ => None,
        })
    }

    pub fn write(&self, dir: impl AsRef<Path>) -> Result<(), ScenarioError> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(ScenarioError::io(dir))?;
        for (name, file) in &self.files {
            let path = dir.join(name);
            match file {
                BundleFile::Curve(c) => write_curve(&path, c)?,
                BundleFile::Text(t) => write_text(&path, t)?,
            }
        }
        Ok(())
    }
}

/// Inclusive grid `start, start + step, ...` up to `end`.
pub fn linspace((start, end, step): (f64, f64, f64)) -> Vec<f64> {
    let n = ((end - start) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| start + i as f64 * step).collect()
}

fn ros_cf(fuel: &FuelModel, spread: &SpreadParams, wind: f64, moisture: f64, depth: f64) -> Result<f64, ScenarioError> {
    let env = FireEnvironment {
        wind_kmh: wind,
        moisture_pct: moisture,
        depth_m: depth,
        flame_length_m: None,
    };
    Ok(critical_flow(fuel, &env, spread, IntensityPath::RateOfSpread, None)?.cf_linear)
}

fn labelled<T: std::fmt::Display>(prefix: &str, values: &[T], unit: &str) -> Vec<String> {
    values.iter().map(|v| format!("{prefix}{v}{unit}")).collect()
}

/// Critical flow against flame length, one file per heat release rate.
pub fn fig2(fuel: &FuelModel) -> Result<Bundle, ScenarioError> {
    let spread = SpreadParams::default();
    let mut b = Bundle::default();
    for ir in FIG2_INTENSITY_PER_AREA {
        let mut c = Curve::new("flame_length_m", labelled("cf_u", &FIG2_WINDS_MS, "ms"));
        for lf in linspace(FIG2_FLAME_LENGTHS) {
            let mut row = vec![lf];
            for u in FIG2_WINDS_MS {
                let env = FireEnvironment {
                    wind_kmh: u * 3.6,
                    flame_length_m: Some(lf),
                    ..FireEnvironment::default()
                };
                row.push(critical_flow(fuel, &env, &spread, IntensityPath::FlameLength, Some(ir))?.cf_linear);
            }
            c.rows.push(row);
        }
        b.curve(&format!("fig2_ir{ir}"), c);
    }
    Ok(b)
}

/// Critical flow on the rate-of-spread path: against wind and moisture
/// at D = 2 m, then against wind and moisture for several depths.
pub fn fig3(fuel: &FuelModel, spread: &SpreadParams) -> Result<Bundle, ScenarioError> {
    let mut b = Bundle::default();
    let sweep =
        |xs: Vec<f64>, x_label: &str, labels: Vec<String>, f: &dyn Fn(f64, usize) -> Result<f64, ScenarioError>| {
            let mut c = Curve::new(x_label, labels.clone());
            for x in xs {
                let mut row = vec![x];
                for i in 0..labels.len() {
                    row.push(f(x, i)?);
                }
                c.rows.push(row);
            }
            Ok::<_, ScenarioError>(c)
        };
    let winds = linspace(FIG3_WINDS_KMH);
    let moist = linspace(FIG3_MOISTURES_PCT);
    b.curve(
        "fig3a",
        sweep(
            winds.clone(),
            "wind_kmh",
            labelled("cf_md", &FIG3A_MOISTURES, "pct"),
            &|u, i| ros_cf(fuel, spread, u, FIG3A_MOISTURES[i], 2.0),
        )?,
    );
    b.curve(
        "fig3b",
        sweep(
            moist.clone(),
            "moisture_pct",
            labelled("cf_u", &FIG3B_WINDS, "kmh"),
            &|m, i| ros_cf(fuel, spread, FIG3B_WINDS[i], m, 2.0),
        )?,
    );
    b.curve(
        "fig3c",
        sweep(winds, "wind_kmh", labelled("cf_d", &FIG3_DEPTHS, "m"), &|u, i| {
            ros_cf(fuel, spread, u, 18.0, FIG3_DEPTHS[i])
        })?,
    );
    b.curve(
        "fig3d",
        sweep(moist, "moisture_pct", labelled("cf_d", &FIG3_DEPTHS, "m"), &|m, i| {
            ros_cf(fuel, spread, 20.0, m, FIG3_DEPTHS[i])
        })?,
    );
    Ok(b)
}

fn platform(drones: u32, payload_l: f64) -> PlatformConfig {
    PlatformConfig {
        drones,
        payload_l,
        ..PlatformConfig::default()
    }
}

fn meters(cfg: &PlatformConfig, platforms: u32, cf: f64) -> f64 {
    if cf > 0.0 {
        drone_flow(cfg, platforms).flow_l_min / cf
    } else {
        f64::INFINITY
    }
}

/// Arrestable front length. Panel (a) is written twice: with the pinned
/// critical flow and with the one computed from the formula chain, plus a
/// short report comparing the two at 120 drones of 20 L.
pub fn fig4(fuel: &FuelModel, spread: &SpreadParams) -> Result<Bundle, ScenarioError> {
    let mut b = Bundle::default();
    let computed = ros_cf(fuel, spread, 20.0, 18.0, 2.0)?;
    for (name, cf) in [("fig4a", FIG4_PINNED_CF), ("fig4a_computed", computed)] {
        let mut c = Curve::new("drones", labelled("mf_ld", &FIG4_PAYLOADS, "l"));
        for n in (10..=200).step_by(10) {
            let mut row = vec![n as f64];
            row.extend(FIG4_PAYLOADS.iter().map(|&ld| meters(&platform(n, ld), 1, cf)));
            c.rows.push(row);
        }
        b.curve(name, c);
    }

    let winds = linspace(FIG4_WINDS_KMH);
    let mut c = Curve::new("wind_kmh", labelled("mf_nd", &FIG4_DRONES, ""));
    for &u in &winds {
        let cf = ros_cf(fuel, spread, u, 18.0, 2.0)?;
        let mut row = vec![u];
        row.extend(FIG4_DRONES.iter().map(|&n| meters(&platform(n, 20.0), 1, cf)));
        c.rows.push(row);
    }
    b.curve("fig4b", c);

    let reference = platform(120, 20.0);
    let mut c = Curve::new("wind_kmh", labelled("mf_d", &FIG3_DEPTHS, "m"));
    for &u in &winds {
        let mut row = vec![u];
        for d in FIG3_DEPTHS {
            row.push(meters(&reference, 1, ros_cf(fuel, spread, u, 18.0, d)?));
        }
        c.rows.push(row);
    }
    b.curve("fig4c", c);

    let mut c = Curve::new("moisture_pct", labelled("mf_d", &FIG3_DEPTHS, "m"));
    for m in linspace((5.0, 30.0, 0.5)) {
        let mut row = vec![m];
        for d in FIG3_DEPTHS {
            row.push(meters(&reference, 1, ros_cf(fuel, spread, 20.0, m, d)?));
        }
        c.rows.push(row);
    }
    b.curve("fig4d", c);

    let mut c = Curve::new("ros_kmh", labelled("mf_ld", &FIG4_PAYLOADS, "l"));
    for &u in &winds {
        let ros = crate::physics::rate_of_spread(u, 18.0, spread);
        let cf = ros_cf(fuel, spread, u, 18.0, 2.0)?;
        let mut row = vec![ros];
        row.extend(FIG4_PAYLOADS.iter().map(|&ld| meters(&platform(120, ld), 1, cf)));
        c.rows.push(row);
    }
    b.curve("fig4e", c);

    let mut c = Curve::new("wind_kmh", labelled("mf_platforms", &[1, 2, 3], ""));
    for &u in &winds {
        let cf = ros_cf(fuel, spread, u, 18.0, 2.0)?;
        let mut row = vec![u];
        row.extend((1..=3).map(|p| meters(&reference, p, cf)));
        c.rows.push(row);
    }
    b.curve("fig4f", c);

    let pinned_m = meters(&reference, 1, FIG4_PINNED_CF);
    let computed_m = meters(&reference, 1, computed);
    let mut report = String::new();
    writeln!(report, "quantity,pinned,computed").unwrap();
    writeln!(report, "cf_l_min_m,{FIG4_PINNED_CF},{computed}").unwrap();
    writeln!(report, "mf_120x20l_m,{pinned_m},{computed_m}").unwrap();
    writeln!(report, "in_70_75_band,{},{}", in_band(pinned_m), in_band(computed_m)).unwrap();
    writeln!(report, "ratio_computed_over_pinned,1,{}", computed_m / pinned_m).unwrap();
    b.text("fig4_divergence.csv", report);
    Ok(b)
}

fn in_band(m: f64) -> bool {
    (70.0..=75.0).contains(&m)
}

pub fn fig5_scenario() -> ScenarioFile {
    ScenarioFile::from_json(FIG5_SCENARIO).expect("bundled scenario is valid")
}

fn with_wind(file: &ScenarioFile, wind: f64) -> ScenarioFile {
    let mut f = file.clone();
    f.environment.wind_kmh = wind;
    if let Some(g) = f.grid.as_mut() {
        g.wind_kmh = wind;
    }
    f
}

fn with_arrival(plan: &InterventionPlan, minutes: f64) -> InterventionPlan {
    let mut p = *plan;
    p.platform.intervention_min = minutes;
    p
}

/// Adds one mean-area column per summary, holding each series' last value.
fn area_curve(minutes_per_step: f64, labels: Vec<String>, summaries: &[&Summary]) -> Curve {
    let len = summaries.iter().map(|s| s.mean_series.len()).max().unwrap_or(0);
    let mut c = Curve::new("clock_min", labels);
    for k in 0..len {
        let mut row = vec![k as f64 * minutes_per_step];
        for s in summaries {
            let at = k.min(s.mean_series.len() - 1);
            row.push(s.mean_series[at].burned_area_m2);
        }
        c.rows.push(row);
    }
    c
}

/// Mean burned area over time with and without the water line: for three
/// winds, then at 20 km/h for four arrival times. Also writes the final
/// grids of the first replicate and a table of final areas.
pub fn fig5(file: &ScenarioFile, replicates: usize) -> Result<Bundle, ScenarioError> {
    let plan = file
        .intervention_plan()?
        .ok_or_else(|| ScenarioError::invalid("intervention", "section is required"))?;
    let seed = file.grid()?.seed;
    let minutes_per_step = file.resolve()?.minutes_per_step;
    let mut b = Bundle::default();
    let mut table =
        String::from("case,wind_kmh,platforms,arrival_min,mean_final_area_m2,stderr_m2,extinct_fraction,replicates\n");
    let mut row = |case: &str, wind: f64, platforms: u32, arrival: Option<f64>, s: &Summary| {
        let arrival = arrival.map(|a| a.to_string()).unwrap_or_default();
        writeln!(
            table,
            "{case},{wind},{platforms},{arrival},{},{},{},{}",
            s.final_area.mean, s.final_area.stderr, s.extinct_fraction, s.final_area.n
        )
        .unwrap();
    };

    let mut labels = Vec::new();
    let mut summaries = Vec::new();
    for wind in FIG5_WINDS_KMH {
        let pairs = run_paired_replicates(&with_wind(file, wind), seed, replicates, &plan)?;
        let s = PairedSummary::of(&pairs);
        row("baseline", wind, 0, None, &s.baseline);
        row(
            "treated",
            wind,
            plan.platforms,
            Some(plan.platform.intervention_min),
            &s.treated,
        );
        labels.push(format!("baseline_u{wind}kmh"));
        labels.push(format!("treated_u{wind}kmh"));
        summaries.push(s.baseline);
        summaries.push(s.treated);
    }
    b.curve(
        "fig5a",
        area_curve(minutes_per_step, labels, &summaries.iter().collect::<Vec<_>>()),
    );

    let wind = file.grid()?.wind_kmh;
    let baseline = run_replicates(file, seed, replicates, None)?;
    let base = Summary::of(&baseline.iter().collect::<Vec<_>>());
    let mut labels = vec!["baseline".to_string()];
    let mut summaries = vec![base];
    for ta in FIG5_ARRIVALS_MIN {
        let runs = run_replicates(file, seed, replicates, Some(&with_arrival(&plan, ta)))?;
        let s = Summary::of(&runs.iter().collect::<Vec<_>>());
        row("arrival", wind, plan.platforms, Some(ta), &s);
        labels.push(format!("treated_ta{ta}min"));
        summaries.push(s);
    }
    b.curve(
        "fig5b",
        area_curve(minutes_per_step, labels, &summaries.iter().collect::<Vec<_>>()),
    );

    let double = InterventionPlan {
        platforms: plan.platforms * 2,
        cells: plan.cells * 2,
        ..plan
    };
    let runs = run_replicates(file, seed, replicates, Some(&double))?;
    row(
        "double",
        wind,
        double.platforms,
        Some(double.platform.intervention_min),
        &Summary::of(&runs.iter().collect::<Vec<_>>()),
    );
    b.text("fig5_summary.csv", table);

    let first = crate::ca::paired_run(
        &file.resolve_with_seed(crate::experiment::replicate_seed(seed, 0))?,
        &plan,
    )
    .map_err(|e| ScenarioError::invalid(format!("grid.{}", e.field), e.reason))?;
    b.text("fig5c_baseline_grid.txt", snapshot_text(&first.baseline.final_state));
    b.text("fig5d_treated_grid.txt", snapshot_text(&first.treated.final_state));
    if let Some(InterventionOutcome::Applied {
        cells,
        front_size,
        step,
    }) = &first.treated.intervention
    {
        let mut t = format!("# step {step}, front {front_size} cells\nrow,col\n");
        for (r, c) in cells {
            writeln!(t, "{r},{c}").unwrap();
        }
        b.text("fig5d_water_line.csv", t);
    }
    Ok(b)
}

fn snapshot_text(state: &crate::ca::SimState) -> String {
    let mut s = String::new();
    for row in state.cells.chunks(state.cols) {
        s.extend(row.iter().map(|c| c.digit()));
        s.push('\n');
    }
    s
}

pub const FIGURES: [&str; 4] = ["fig2", "fig3", "fig4", "fig5"];

/// Builds the named bundle with default parameters.
pub fn reproduce(name: &str, replicates: usize) -> Result<Bundle, ScenarioError> {
    let fuel = FuelModel::default();
    let spread = SpreadParams::default();
    match name {
        "fig2" => fig2(&fuel),
        "fig3" => fig3(&fuel, &spread),
        "fig4" => fig4(&fuel, &spread),
        "fig5" => fig5(&fig5_scenario(), replicates),
        other => Err(ScenarioError::invalid(
            "figure",
            format!("unknown figure {other:?}, expected one of {}", FIGURES.join(", ")),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_is_inclusive() {
        let xs = linspace((0.0, 30.0, 0.5));
        assert_eq!(xs.len(), 61);
        assert_eq!(*xs.last().unwrap(), 30.0);
        assert_eq!(linspace(FIG2_FLAME_LENGTHS).len(), 199);
    }

    #[test]
    fn fig4a_pinned_band() {
        let b = fig4(&FuelModel::default(), &SpreadParams::default()).unwrap();
        let a = b.get_curve("fig4a").unwrap();
        let row = a.rows.iter().find(|r| r[0] == 120.0).unwrap();
        assert!(in_band(row[2]), "{}", row[2]);
        let report = b.get_text("fig4_divergence.csv").unwrap();
        assert!(report.contains("in_70_75_band,true,false"), "{report}");
    }

    #[test]
    fn fig2_files() {
        let b = fig2(&FuelModel::default()).unwrap();
        let names: Vec<&str> = b.files.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["fig2_ir500.csv", "fig2_ir2000.csv"]);
        assert_eq!(b.get_curve("fig2_ir500").unwrap().labels, ["cf_u0ms", "cf_u10ms"]);
    }

    #[test]
    fn unknown_figure() {
        assert!(reproduce("fig9", 1).is_err());
    }

    #[test]
    fn bundled_scenario_parses() {
        let f = fig5_scenario();
        assert_eq!(f.intervention_plan().unwrap().unwrap().cells, 31);
        assert_eq!(f.resolve().unwrap().minutes_per_step, 1.5);
    }
}

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use firefront::ca::InterventionPlan;
use firefront::ca::RunOutcome;
use firefront::experiment::{run_paired_replicates, run_replicates, PairedSummary, Summary};
use firefront::figures;
use firefront::physics::{critical_flow, CriticalFlowResult, FireEnvironment, FuelModel, IntensityPath, SpreadParams};
use firefront::scenario::output::write_text;
use firefront::scenario::{
    load_scenario, write_curve, write_snapshot, write_timeseries, Curve, InterventionConfig, ScenarioFile,
};
use firefront::swarm::{
    drone_flow, extinguishable_meters, required_drones, required_drones_exact, required_flow, PlatformConfig,
};
use serde::Serialize;
use serde_json::json;

use crate::out;
use crate::range::Span;
use crate::{
    CfArgs, CliError, CriticalFlowArgs, DronesArgs, FlowArgs, MetersArgs, OutputArgs, PlatformArgs, ReproduceArgs,
    RunArgs, SimulateArgs, SweepArgs, SweepParam,
};

/// Prints a line to stdout, going quiet once the reader has hung up.
macro_rules! say {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

type Flags = Vec<(&'static str, Option<Span>)>;

/// Numeric flags evaluated at one point of an optional range.
struct Point<'a> {
    flags: &'a Flags,
    over: Option<(&'static str, f64)>,
}

impl Point<'_> {
    fn get(&self, name: &str) -> Option<f64> {
        if let Some((n, v)) = self.over {
            if n == name {
                return Some(v);
            }
        }
        self.flags
            .iter()
            .find(|(n, _)| *n == name)
            .and_then(|(_, s)| s.map(|s| s.first()))
    }

    fn req(&self, name: &str) -> f64 {
        self.get(name).expect("checked by require")
    }
}

fn the_range(flags: &Flags) -> Result<Option<(&'static str, Span)>, CliError> {
    let ranges: Vec<_> = flags
        .iter()
        .filter_map(|(n, s)| s.filter(Span::is_range).map(|s| (*n, s)))
        .collect();
    match ranges.as_slice() {
        [] => Ok(None),
        [one] => Ok(Some(*one)),
        _ => Err(CliError::Usage(format!(
            "only one range flag at a time, got {}",
            ranges
                .iter()
                .map(|(n, _)| format!("--{}", n.replace('_', "-")))
                .collect::<Vec<_>>()
                .join(", ")
        ))),
    }
}

fn require(flags: &Flags, names: &[&str], context: &str) -> Result<(), CliError> {
    for name in names {
        if flags.iter().all(|(n, s)| n != name || s.is_none()) {
            return Err(CliError::Usage(format!(
                "--{} is required {context}",
                name.replace('_', "-")
            )));
        }
    }
    Ok(())
}

fn count(name: &str, v: f64) -> Result<u32, CliError> {
    if v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
        Ok(v as u32)
    } else {
        Err(CliError::Usage(format!(
            "--{name} must be a positive whole number, got {v}"
        )))
    }
}

fn print_pairs(pairs: &[(&str, f64)]) {
    let mut s = String::new();
    for (k, v) in pairs {
        writeln!(s, "{k} = {v}").unwrap();
    }
    say!("{}", s.trim_end());
}

/// Evaluates `f` at every point of the single range flag and writes the
/// columns as a curve, or prints them for a plain invocation.
fn emit(
    subcommand: &str,
    flags: &Flags,
    output: &OutputArgs,
    meta: impl Serialize,
    f: impl Fn(&Point) -> Result<Vec<(&'static str, f64)>, CliError>,
) -> Result<(), CliError> {
    match the_range(flags)? {
        None => {
            let values = f(&Point { flags, over: None })?;
            print_pairs(&values);
            Ok(())
        }
        Some((name, span)) => {
            let mut curve: Option<Curve> = None;
            for x in span.values() {
                let values = f(&Point {
                    flags,
                    over: Some((name, x)),
                })?;
                let c =
                    curve.get_or_insert_with(|| Curve::new(name, values.iter().map(|(k, _)| k.to_string()).collect()));
                c.rows
                    .push(std::iter::once(x).chain(values.iter().map(|(_, v)| *v)).collect());
            }
            let dir = out::resolve(output.out.as_deref(), subcommand, output.label.as_deref());
            let path = dir.join(format!("{subcommand}.csv"));
            std::fs::create_dir_all(&dir).map_err(firefront::scenario::ScenarioError::io(&dir))?;
            write_curve(&path, &curve.expect("ranges hold at least one value"))?;
            out::write_meta(&dir, subcommand, json!(meta))?;
            say!("{}", path.display());
            Ok(())
        }
    }
}

fn constants(scenario: Option<&Path>) -> Result<(FuelModel, SpreadParams), CliError> {
    Ok(match scenario {
        Some(p) => {
            let f = load_scenario(p)?;
            (f.fuel, f.spread)
        }
        None => (FuelModel::default(), SpreadParams::default()),
    })
}

fn breakdown(r: &CriticalFlowResult) -> Vec<(&'static str, f64)> {
    let mut v = vec![
        ("cf_linear_l_min_m", r.cf_linear),
        ("cf_area_kg_m2_s", r.cf_area),
        ("cf_area_unclamped_kg_m2_s", r.cf_area_unclamped),
        ("mass_burning_rate_kg_m2_s", r.mass_burning_rate),
        ("intensity_kw_m", r.intensity),
        ("flame_length_m", r.flame_length),
        ("flame_angle_deg", r.flame.angle_deg),
        ("flame_tip_height_m", r.flame.tip_height),
        ("depth_m", r.depth),
        ("q_ext_radiative_kw_m2", r.fluxes.external_radiative),
        ("q_ext_convective_kw_m2", r.fluxes.external_convective),
        ("q_loss_radiative_kw_m2", r.fluxes.loss_radiative),
        ("q_loss_convective_kw_m2", r.fluxes.loss_convective),
    ];
    if let Some(ros) = r.rate_of_spread {
        v.insert(4, ("rate_of_spread_kmh", ros));
    }
    v
}

pub fn cf(a: &CfArgs) -> Result<(), CliError> {
    let (fuel, spread) = constants(a.scenario.as_deref())?;
    let flags: Flags = vec![
        ("wind", a.wind),
        ("moisture", a.moisture),
        ("depth", a.depth),
        ("flame_length", a.flame_length),
    ];
    let path = if a.flame_length.is_some() {
        if a.ir.is_none() {
            return Err(CliError::Usage("--ir is required with --flame-length".into()));
        }
        IntensityPath::FlameLength
    } else {
        require(&flags, &["wind", "moisture", "depth"], "on the rate-of-spread path")?;
        IntensityPath::RateOfSpread
    };
    emit("cf", &flags, &a.output, a, |p| {
        let env = FireEnvironment {
            wind_kmh: p.get("wind").unwrap_or(0.0),
            moisture_pct: p.get("moisture").unwrap_or(FireEnvironment::default().moisture_pct),
            depth_m: p.get("depth").unwrap_or(FireEnvironment::default().depth_m),
            flame_length_m: p.get("flame_length"),
        };
        let r = critical_flow(&fuel, &env, &spread, path, a.ir)?;
        let mut v = vec![("wind_kmh", env.wind_kmh)];
        match path {
            IntensityPath::FlameLength => v.push(("ir_kw_m2", a.ir.unwrap_or_default())),
            IntensityPath::RateOfSpread => v.push(("moisture_pct", env.moisture_pct)),
        }
        v.extend(breakdown(&r));
        Ok(v)
    })
}

fn platform_flags(p: &PlatformArgs) -> Flags {
    vec![
        ("drones", Some(p.drones)),
        ("payload", Some(p.payload)),
        ("cycle_min", Some(p.cycle_min)),
        ("platforms", Some(p.platforms)),
    ]
}

fn platform_at(p: &Point) -> Result<(PlatformConfig, u32), CliError> {
    let cfg = PlatformConfig {
        drones: count("drones", p.req("drones"))?,
        payload_l: p.req("payload"),
        cycle_min: p.req("cycle_min"),
        ..PlatformConfig::default()
    };
    cfg.validate()?;
    Ok((cfg, count("platforms", p.req("platforms"))?))
}

fn cf_flags(c: &CriticalFlowArgs) -> Flags {
    vec![
        ("cf", c.cf),
        ("wind", c.wind),
        ("moisture", c.moisture),
        ("depth", c.depth),
    ]
}

fn check_cf_source(flags: &Flags, c: &CriticalFlowArgs) -> Result<(), CliError> {
    if c.cf.is_none() {
        require(flags, &["wind", "moisture", "depth"], "unless --cf is given")?;
    }
    Ok(())
}

fn cf_at(p: &Point) -> Result<f64, CliError> {
    if let Some(cf) = p.get("cf") {
        return Ok(cf);
    }
    let env = FireEnvironment {
        wind_kmh: p.req("wind"),
        moisture_pct: p.req("moisture"),
        depth_m: p.req("depth"),
        flame_length_m: None,
    };
    env.validate()?;
    Ok(critical_flow(
        &FuelModel::default(),
        &env,
        &SpreadParams::default(),
        IntensityPath::RateOfSpread,
        None,
    )?
    .cf_linear)
}

pub fn flow(a: &FlowArgs) -> Result<(), CliError> {
    let flags = platform_flags(&a.platform);
    emit("flow", &flags, &a.output, a, |p| {
        let (cfg, platforms) = platform_at(p)?;
        let r = drone_flow(&cfg, platforms);
        Ok(vec![
            ("flow_l_min", r.flow_l_min),
            ("litres_per_hour", r.litres_per_hour),
            ("discharges_per_hour", r.discharges_per_hour),
            ("discharges_per_drone_hour", r.discharges_per_drone_hour),
        ])
    })
}

pub fn meters(a: &MetersArgs) -> Result<(), CliError> {
    let mut flags = platform_flags(&a.platform);
    flags.extend(cf_flags(&a.flow));
    check_cf_source(&flags, &a.flow)?;
    emit("meters", &flags, &a.output, a, |p| {
        let (cfg, platforms) = platform_at(p)?;
        let cf = cf_at(p)?;
        let m = extinguishable_meters(&cfg, platforms, cf)?;
        Ok(vec![
            ("meters", m),
            ("cf_l_min_m", cf),
            ("flow_l_min", drone_flow(&cfg, platforms).flow_l_min),
        ])
    })
}

pub fn drones(a: &DronesArgs) -> Result<(), CliError> {
    let mut flags: Flags = vec![
        ("meters", Some(a.meters)),
        ("payload", Some(a.payload)),
        ("cycle_min", Some(a.cycle_min)),
    ];
    flags.extend(cf_flags(&a.flow));
    check_cf_source(&flags, &a.flow)?;
    emit("drones", &flags, &a.output, a, |p| {
        let (m, ld, dt) = (p.req("meters"), p.req("payload"), p.req("cycle_min"));
        if m < 0.0 || ld.is_nan() || ld <= 0.0 || dt.is_nan() || dt <= 0.0 {
            return Err(CliError::Usage(
                "--meters must be >= 0, --payload and --cycle-min > 0".into(),
            ));
        }
        let cf = cf_at(p)?;
        if cf < 0.0 {
            return Err(CliError::Usage(format!("--cf must be >= 0, got {cf}")));
        }
        Ok(vec![
            ("drones", required_drones(m, cf, ld, dt) as f64),
            ("drones_exact", required_drones_exact(m, cf, ld, dt)),
            ("flow_l_min", required_flow(m, cf)),
            ("cf_l_min_m", cf),
        ])
    })
}

/// Loads the scenario and applies the command-line overrides.
fn scenario_for(run: &RunArgs) -> Result<ScenarioFile, CliError> {
    let mut file = load_scenario(&run.scenario)?;
    if run.ta_min.is_some() || run.nc.is_some() || run.platforms.is_some() {
        if file.platforms.is_empty() {
            file.platforms.push(PlatformConfig::default());
        }
        let iv = file.intervention.get_or_insert(InterventionConfig {
            platform: 0,
            count: 1,
            cells_per_platform: None,
            cf_l_min_m: None,
            orientation: Default::default(),
        });
        if let Some(nc) = run.nc {
            iv.cells_per_platform = Some(nc);
        }
        if let Some(n) = run.platforms {
            iv.count = n;
        }
        let index = iv.platform;
        if let Some(ta) = run.ta_min {
            if let Some(p) = file.platforms.get_mut(index) {
                p.intervention_min = ta;
            }
        }
    }
    if let Some(m) = run.max_steps {
        file.grid_mut()?.max_steps = m;
    }
    if run.replicates == 0 {
        return Err(CliError::Usage("--replicates must be >= 1".into()));
    }
    file.validate()?;
    Ok(file)
}

fn write_runs(dir: &Path, runs: &[&RunOutcome], file: &ScenarioFile) -> Result<(), CliError> {
    if file.outputs.timeseries {
        for (i, r) in runs.iter().enumerate() {
            write_timeseries(dir.join(format!("replicate_{i:04}.csv")), &r.series)?;
        }
    }
    Ok(())
}

fn pm(s: &Summary) -> String {
    format!("{} ± {}", s.final_area.mean, s.final_area.stderr)
}

fn summary_row(table: &mut String, case: &str, s: &Summary) {
    writeln!(
        table,
        "{case},{},{},{},{}",
        s.final_area.mean, s.final_area.stderr, s.extinct_fraction, s.final_area.n
    )
    .unwrap();
}

const SUMMARY_HEADER: &str = "case,mean_final_area_m2,stderr_m2,extinct_fraction,replicates\n";

pub fn simulate(a: &SimulateArgs) -> Result<(), CliError> {
    let file = scenario_for(&a.run)?;
    let seed = a.run.seed.unwrap_or(file.grid()?.seed);
    let plan = file.intervention_plan()?;
    let label = a.output.label.as_deref().or(file.outputs.label.as_deref());
    let dir = out::resolve(a.output.out.as_deref(), "simulate", label);
    std::fs::create_dir_all(&dir).map_err(firefront::scenario::ScenarioError::io(&dir))?;
    let mut table = String::from(SUMMARY_HEADER);

    if a.paired {
        let plan = plan.ok_or_else(|| CliError::Usage("--paired needs an intervention section or --nc".into()))?;
        let pairs = run_paired_replicates(&file, seed, a.run.replicates, &plan)?;
        let s = PairedSummary::of(&pairs);
        for (name, pick) in [("baseline", 0), ("treated", 1)] {
            let runs: Vec<&RunOutcome> = pairs
                .iter()
                .map(|p| if pick == 0 { &p.baseline } else { &p.treated })
                .collect();
            let sub = dir.join(name);
            std::fs::create_dir_all(&sub).map_err(firefront::scenario::ScenarioError::io(&sub))?;
            write_runs(&sub, &runs, &file)?;
            let summary = if pick == 0 { &s.baseline } else { &s.treated };
            write_timeseries(dir.join(format!("mean_{name}.csv")), &summary.mean_series)?;
            if file.outputs.snapshot {
                write_snapshot(dir.join(format!("{name}_final.txt")), &runs[0].final_state)?;
            }
            summary_row(&mut table, name, summary);
        }
        write_text(dir.join("summary.csv"), &table)?;
        say!("replicates = {}", a.run.replicates);
        say!("wetted_cells = {}", plan.cells);
        say!("baseline_final_area_m2 = {}", pm(&s.baseline));
        say!("treated_final_area_m2 = {}", pm(&s.treated));
        say!("area_saved_m2 = {} ± {}", s.area_saved.mean, s.area_saved.stderr);
        say!("treated_extinct_fraction = {}", s.treated.extinct_fraction);
    } else {
        let runs = run_replicates(&file, seed, a.run.replicates, plan.as_ref())?;
        let refs: Vec<&RunOutcome> = runs.iter().collect();
        let s = Summary::of(&refs);
        let sub = dir.join("series");
        std::fs::create_dir_all(&sub).map_err(firefront::scenario::ScenarioError::io(&sub))?;
        write_runs(&sub, &refs, &file)?;
        write_timeseries(dir.join("mean_series.csv"), &s.mean_series)?;
        if file.outputs.snapshot {
            write_snapshot(dir.join("final.txt"), &runs[0].final_state)?;
        }
        summary_row(&mut table, if plan.is_some() { "treated" } else { "baseline" }, &s);
        write_text(dir.join("summary.csv"), &table)?;
        say!("replicates = {}", a.run.replicates);
        say!("final_area_m2 = {}", pm(&s));
        say!("extinct_fraction = {}", s.extinct_fraction);
    }
    out::write_meta(&dir, "simulate", json!({ "args": a, "base_seed": seed }))?;
    say!("output = {}", dir.display());
    Ok(())
}

fn with_param(
    file: &ScenarioFile,
    param: SweepParam,
    v: f64,
) -> Result<(ScenarioFile, Option<InterventionPlan>), CliError> {
    let mut f = file.clone();
    match param {
        SweepParam::Wind => {
            f.grid_mut()?.wind_kmh = v;
            f.environment.wind_kmh = v;
        }
        SweepParam::TaMin | SweepParam::Nc | SweepParam::Platforms => {
            let iv = f
                .intervention
                .as_mut()
                .ok_or_else(|| CliError::Usage("this sweep needs an intervention section or --nc".into()))?;
            match param {
                SweepParam::Nc => iv.cells_per_platform = Some(v as usize),
                SweepParam::Platforms => iv.count = count("values", v)?,
                _ => {
                    let i = iv.platform;
                    f.platforms[i].intervention_min = v;
                }
            }
        }
    }
    f.validate()?;
    let plan = f.intervention_plan()?;
    Ok((f, plan))
}

pub fn sweep(a: &SweepArgs) -> Result<(), CliError> {
    let file = scenario_for(&a.run)?;
    let seed = a.run.seed.unwrap_or(file.grid()?.seed);
    let labels = [
        "baseline_mean_m2",
        "baseline_stderr_m2",
        "treated_mean_m2",
        "treated_stderr_m2",
        "treated_extinct_fraction",
    ];
    let x_label = match a.param {
        SweepParam::TaMin => "ta_min",
        SweepParam::Wind => "wind_kmh",
        SweepParam::Nc => "nc",
        SweepParam::Platforms => "platforms",
    };
    let mut curve = Curve::new(x_label, labels.iter().map(|s| s.to_string()).collect());
    for v in a.values.values() {
        let (f, plan) = with_param(&file, a.param, v)?;
        let row = match plan {
            Some(plan) => {
                let s = PairedSummary::of(&run_paired_replicates(&f, seed, a.run.replicates, &plan)?);
                vec![
                    v,
                    s.baseline.final_area.mean,
                    s.baseline.final_area.stderr,
                    s.treated.final_area.mean,
                    s.treated.final_area.stderr,
                    s.treated.extinct_fraction,
                ]
            }
            None => {
                let runs = run_replicates(&f, seed, a.run.replicates, None)?;
                let s = Summary::of(&runs.iter().collect::<Vec<_>>());
                vec![v, s.final_area.mean, s.final_area.stderr, f64::NAN, f64::NAN, f64::NAN]
            }
        };
        curve.rows.push(row);
    }
    let dir = out::resolve(a.output.out.as_deref(), "sweep", a.output.label.as_deref());
    std::fs::create_dir_all(&dir).map_err(firefront::scenario::ScenarioError::io(&dir))?;
    let path: PathBuf = dir.join("sweep.csv");
    write_curve(&path, &curve)?;
    out::write_meta(&dir, "sweep", json!({ "args": a, "base_seed": seed }))?;
    say!(
        "{}",
        std::fs::read_to_string(&path).map_err(firefront::scenario::ScenarioError::io(&path))?
    );
    Ok(())
}

pub fn reproduce(a: &ReproduceArgs) -> Result<(), CliError> {
    if a.replicates == 0 {
        return Err(CliError::Usage("--replicates must be >= 1".into()));
    }
    let name = a.figure.name();
    let bundle = figures::reproduce(name, a.replicates)?;
    let dir = out::resolve(
        a.output.out.as_deref(),
        "reproduce",
        Some(a.output.label.as_deref().unwrap_or(name)),
    );
    bundle.write(&dir)?;
    out::write_meta(&dir, "reproduce", json!(a))?;
    for (file, _) in &bundle.files {
        say!("{}", dir.join(file).display());
    }
    Ok(())
}

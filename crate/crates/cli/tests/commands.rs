use std::path::Path;
use std::process::{Command, Output};

fn firefront(args: &[&str], out_base: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_firefront"))
        .args(args)
        .env("FIREFRONT_OUT_DIR", out_base)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn value(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("{key} missing from\n{text}"))
        .split(' ')
        .next()
        .unwrap()
        .parse()
        .unwrap()
}

fn scenario(name: &str) -> String {
    format!("{}/../../scenarios/{name}", env!("CARGO_MANIFEST_DIR"))
}

/// Every file below `dir` except `meta.json`, which echoes the label.
fn read_tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    assert!(dir.join("meta.json").is_file());
    let mut files = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else if p.file_name().unwrap() != "meta.json" {
                let rel = p.strip_prefix(dir).unwrap().display().to_string();
                files.push((rel, std::fs::read(&p).unwrap()));
            }
        }
    }
    files.sort();
    files
}

#[test]
fn cf_prints_the_breakdown() {
    let tmp = tempfile::tempdir().unwrap();
    let o = firefront(&["cf", "--wind", "10", "--moisture", "18", "--depth", "2"], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!((value(&text, "cf_linear_l_min_m") - 2.326668).abs() < 1e-5);
    for key in [
        "mass_burning_rate_kg_m2_s",
        "rate_of_spread_kmh",
        "intensity_kw_m",
        "flame_angle_deg",
        "q_loss_convective_kw_m2",
    ] {
        value(&text, key);
    }
}

#[test]
fn cf_flame_length_path() {
    let tmp = tempfile::tempdir().unwrap();
    let o = firefront(&["cf", "--flame-length", "1", "--ir", "500"], tmp.path());
    let text = stdout(&o);
    assert!((value(&text, "intensity_kw_m") - 259.833).abs() < 1e-9);
    assert!((value(&text, "depth_m") - 259.833 / 500.0).abs() < 1e-12);
}

#[test]
fn usage_errors_name_the_flag() {
    let tmp = tempfile::tempdir().unwrap();
    let cases: [(&[&str], &str); 4] = [
        (&["cf", "--wind", "10", "--moisture", "18"], "--depth"),
        (&["cf", "--flame-length", "1"], "--ir"),
        (
            &["cf", "--wind", "0:30:1", "--moisture", "5:30:1", "--depth", "2"],
            "--moisture",
        ),
        (&["cf", "--flame-length", "1", "--ir", "500", "--depth", "2"], "--depth"),
    ];
    for (args, flag) in cases {
        let o = firefront(args, tmp.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stdout(&o).is_empty());
        assert!(stderr(&o).contains(flag), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn swarm_commands() {
    let tmp = tempfile::tempdir().unwrap();
    let o = firefront(
        &["flow", "--drones", "120", "--payload", "20", "--cycle-min", "6"],
        tmp.path(),
    );
    assert_eq!(value(&stdout(&o), "flow_l_min"), 400.0);
    let o = firefront(&["flow", "--platforms", "2"], tmp.path());
    assert_eq!(value(&stdout(&o), "flow_l_min"), 800.0);

    let o = firefront(
        &[
            "drones",
            "--meters",
            "70",
            "--payload",
            "30",
            "--cycle-min",
            "6",
            "--cf",
            "4.286",
        ],
        tmp.path(),
    );
    assert_eq!(value(&stdout(&o), "drones"), 60.0);

    let o = firefront(&["meters", "--cf", "400"], tmp.path());
    assert_eq!(value(&stdout(&o), "meters"), 1.0);

    let o = firefront(&["meters", "--cf", "0"], tmp.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).is_empty());
    assert!(stderr(&o).contains("critical flow"));

    let o = firefront(&["meters"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--wind"));
}

#[test]
fn range_writes_curve_and_meta_under_the_env_base() {
    let tmp = tempfile::tempdir().unwrap();
    let o = firefront(
        &[
            "cf",
            "--wind",
            "0:30:0.5",
            "--moisture",
            "18",
            "--depth",
            "2",
            "--label",
            "w",
        ],
        tmp.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let dir = tmp.path().join("cf").join("w");
    let csv = std::fs::read_to_string(dir.join("cf.csv")).unwrap();
    assert_eq!(csv.lines().count(), 62);
    assert!(csv.starts_with("wind,"));
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("meta.json")).unwrap()).unwrap();
    assert_eq!(meta["subcommand"], "cf");
    assert_eq!(meta["flags"]["wind"], "0:30:0.5");
    assert_eq!(meta["flags"]["moisture"], 18.0);
    assert_eq!(stdout(&o).trim(), dir.join("cf.csv").display().to_string());

    let o = firefront(&["flow", "--drones", "40:200:40"], tmp.path());
    assert!(o.status.success());
    let stamped: Vec<_> = std::fs::read_dir(tmp.path().join("flow")).unwrap().collect();
    assert_eq!(stamped.len(), 1);
}

#[test]
fn simulate_is_deterministic_and_paired() {
    let tmp = tempfile::tempdir().unwrap();
    let s = scenario("fig5.json");
    let mut trees = Vec::new();
    for label in ["a", "b"] {
        let o = firefront(
            &[
                "simulate",
                "--scenario",
                &s,
                "--replicates",
                "1",
                "--seed",
                "7",
                "--label",
                label,
            ],
            tmp.path(),
        );
        assert!(o.status.success(), "{}", stderr(&o));
        trees.push(read_tree(&tmp.path().join("simulate").join(label)));
    }
    assert_eq!(trees[0], trees[1]);

    let out = tmp.path().join("paired");
    let o = firefront(
        &[
            "simulate",
            "--scenario",
            &s,
            "--replicates",
            "6",
            "--paired",
            "--out",
            out.to_str().unwrap(),
        ],
        tmp.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(value(&text, "treated_final_area_m2") < value(&text, "baseline_final_area_m2"));
    for f in [
        "summary.csv",
        "meta.json",
        "mean_baseline.csv",
        "mean_treated.csv",
        "baseline/replicate_0005.csv",
        "treated/replicate_0000.csv",
    ] {
        assert!(out.join(f).is_file(), "{f}");
    }
}

#[test]
fn earlier_arrival_burns_less() {
    let tmp = tempfile::tempdir().unwrap();
    let s = scenario("fig5.json");
    let area = |ta: &str| {
        let o = firefront(
            &[
                "simulate",
                "--scenario",
                &s,
                "--replicates",
                "8",
                "--ta-min",
                ta,
                "--label",
                ta,
            ],
            tmp.path(),
        );
        assert!(o.status.success(), "{}", stderr(&o));
        value(&stdout(&o), "final_area_m2")
    };
    assert!(area("10") <= area("25"));
}

#[test]
fn sweep_writes_one_row_per_value() {
    let tmp = tempfile::tempdir().unwrap();
    let o = firefront(
        &[
            "sweep",
            "--scenario",
            &scenario("fig5.json"),
            "--replicates",
            "3",
            "--param",
            "nc",
            "--values",
            "0:40:20",
            "--label",
            "nc",
        ],
        tmp.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(tmp.path().join("sweep/nc/sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.starts_with("nc,baseline_mean_m2"));
}

#[test]
fn scenario_errors_reach_stderr() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"grid\": {\n    \"rows\": 0\n  }\n}\n").unwrap();
    let o = firefront(&["simulate", "--scenario", bad.to_str().unwrap()], tmp.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).is_empty());
    assert!(!stderr(&o).is_empty());

    let o = firefront(&["simulate", "--scenario", "missing.json"], tmp.path());
    assert!(stderr(&o).contains("missing.json"));
}

#[test]
fn reproduce_twice_is_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    for label in ["one", "two"] {
        let o = firefront(&["reproduce", "fig2", "--label", label], tmp.path());
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let one = read_tree(&tmp.path().join("reproduce/one"));
    assert_eq!(one, read_tree(&tmp.path().join("reproduce/two")));
    let names: Vec<&str> = one.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["fig2_ir2000.csv", "fig2_ir500.csv"]);

    let o = firefront(&["reproduce", "fig9"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
}

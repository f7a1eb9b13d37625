use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn epictrl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epictrl"))
        .args(args)
        .env_remove("EPICTRL_SEED")
        .output()
        .expect("spawn epictrl")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn simulate_reports_peaks_and_terminal_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = epictrl(&["simulate", "--config", "paper_italy", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = read(dir.path(), "report.txt");
    for needle in ["peak I:", "peak Q:", "terminal (persons):", " R ", " D ", " P ", "sensitivity", "steps per day"] {
        assert!(report.contains(needle), "missing {needle:?} in\n{report}");
    }
    assert_eq!(read(dir.path(), "timeseries.csv").lines().count(), 94);
}

#[test]
fn optimize_reports_doses() {
    let dir = tempfile::tempdir().unwrap();
    let out = epictrl(&["optimize", "--config", "paper_italy", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = read(dir.path(), "report.txt");
    assert!(report.contains("W(t_f):") && report.contains("J(u*)") && report.contains("iterations"));
    assert!(read(dir.path(), "timeseries.csv").lines().next().unwrap().ends_with("u [1/day]"));
    assert_eq!(read(dir.path(), "control.csv").lines().count(), 94);
}

#[test]
fn compare_shares_initial_state() {
    let dir = tempfile::tempdir().unwrap();
    let out = epictrl(&["compare", "--config", "paper_italy", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let a = read(dir.path(), "uncontrolled.csv");
    let b = read(dir.path(), "controlled.csv");
    let first = |t: &str| t.lines().nth(1).unwrap().split(',').take(10).collect::<Vec<_>>().join(",");
    assert_eq!(first(&a), first(&b));
    assert_eq!(a.lines().count(), b.lines().count());
    assert!(read(dir.path(), "report.txt").contains("difference"));
}

#[test]
fn transport_emits_table_snapshot_and_bracket() {
    let dir = tempfile::tempdir().unwrap();
    let out = epictrl(&["transport", "--config", "paper_italy", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = read(dir.path(), "report.txt");
    assert!(report.contains("-94.5 degC is bracketed by"), "{report}");
    let table = read(dir.path(), "transport_table.csv");
    assert_eq!(table.lines().count(), 13);
    let field = read(dir.path(), "field.csv");
    assert_eq!(field.lines().nth(1), Some("r [m],z [m],T [degC]"));
    assert_eq!(field.lines().count(), 2 + 101 * 101);
}

#[test]
fn fit_on_fixture_and_synthetic_data() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("fit.toml");
    std::fs::write(
        &cfg,
        r#"
schema_version = 1
population = 60480000.0
steps_per_day = 4
[window]
start = "2020-11-01"
end = "2020-11-20"
[initial]
source = "explicit"
quarantined = 418142.0
recovered = 252959.0
dead = 38826.0
[initial.latent]
rule = "explicit"
exposed = 340000.0
infected = 87000.0
[fit]
max_iterations = 5
synthetic_noise = 0.01
"#,
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = epictrl(&[
        "fit",
        "--config",
        cfg.to_str().unwrap(),
        "--data",
        fixture("dpc_3rows.csv").to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let fit: serde_json::Value = serde_json::from_str(&read(&out_dir, "fit.json")).unwrap();
    assert_eq!(fit["observations"], 3);
    assert!(fit["sse"].as_f64().unwrap() <= fit["initial_sse"].as_f64().unwrap());
    assert!(String::from_utf8_lossy(&out.stdout).contains("omega ="));

    // synthetic series, seed from the environment overriding the flag
    let run = |seed_env: Option<&str>, seed_flag: &str, dir: &Path| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_epictrl"));
        c.args(["fit", "--config", cfg.to_str().unwrap(), "--seed", seed_flag, "--out", dir.to_str().unwrap()]);
        match seed_env {
            Some(s) => c.env("EPICTRL_SEED", s),
            None => c.env_remove("EPICTRL_SEED"),
        };
        let o = c.output().unwrap();
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        read(dir, "fit.json")
    };
    let a = run(None, "7", &dir.path().join("a"));
    let b = run(Some("7"), "99", &dir.path().join("b"));
    let c = run(None, "99", &dir.path().join("c"));
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn bad_config_path_exits_2_naming_path() {
    let out = epictrl(&["simulate", "--config", "/no/such/scenario.toml"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/no/such/scenario.toml"));
}

#[test]
fn schema_violation_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("typo.toml");
    std::fs::write(&cfg, "schema_version = 1\npopulation = 10.0\nomga = 1\n[window]\nstart = \"2020-11-01\"\nend = \"2020-11-05\"\n").unwrap();
    let out = epictrl(&["simulate", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("omga"));
}

#[test]
fn bad_seed_and_usage_errors_exit_2() {
    let out = Command::new(env!("CARGO_BIN_EXE_epictrl"))
        .args(["transport", "--config", "paper_italy"])
        .env("EPICTRL_SEED", "abc")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(epictrl(&["explode"]).status.code(), Some(2));
    assert_eq!(epictrl(&["simulate"]).status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("blowup.toml");
    std::fs::write(
        &cfg,
        r#"
schema_version = 1
population = 1e308
steps_per_day = 1
[window]
start = "2020-11-01"
end = "2020-12-30"
[initial]
source = "explicit"
quarantined = 0.0
recovered = 0.0
dead = 0.0
[initial.latent]
rule = "explicit"
exposed = 1e300
infected = 1e307
[params]
omega = 0.0
beta = 5000.0
gamma = 1.0
delta = 1.0
lambda1 = 0.1
lambda2 = 0.05
lambda3 = 30.0
kappa1 = 0.002
kappa2 = 0.01
kappa3 = 60.0
"#,
    )
    .unwrap();
    let out = epictrl(&["simulate", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("non-finite"));
}

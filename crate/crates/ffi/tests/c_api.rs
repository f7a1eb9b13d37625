use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use epictrl_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(epictrl_last_error()) }.to_string_lossy().into_owned()
}

fn italy() -> *mut EpictrlScenario {
    let name = CString::new("paper_italy").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { epictrl_scenario_load(name.as_ptr(), &mut s) }, EpictrlStatus::Ok);
    assert!(!s.is_null());
    s
}

#[test]
fn simulate_and_optimize_through_handles() {
    let s = italy();
    unsafe {
        let mut x0 = [0.0; 8];
        assert_eq!(epictrl_scenario_initial_state(s, x0.as_mut_ptr()), EpictrlStatus::Ok);
        assert!((x0.iter().sum::<f64>() - 60_480_000.0).abs() < 1e-6);

        let mut free = ptr::null_mut();
        assert_eq!(epictrl_simulate(s, &mut free), EpictrlStatus::Ok);
        assert_eq!(epictrl_run_len(free), 921);
        let mut x = [0.0; 8];
        assert_eq!(epictrl_run_state(free, 0, x.as_mut_ptr()), EpictrlStatus::Ok);
        assert_eq!(x, x0);
        let mut t = 0.0;
        assert_eq!(epictrl_run_time(free, 920, &mut t), EpictrlStatus::Ok);
        assert!((t - 92.0).abs() < 1e-12);
        let mut u = 0.0;
        assert_eq!(epictrl_run_control(free, 0, &mut u), EpictrlStatus::InvalidArgument);
        assert!(last_error().contains("no control"));
        assert_eq!(epictrl_run_state(free, 921, x.as_mut_ptr()), EpictrlStatus::OutOfRange);

        let mut opt = ptr::null_mut();
        assert_eq!(epictrl_optimize(s, &mut opt), EpictrlStatus::Ok);
        assert_eq!(last_error(), "");
        assert_eq!(epictrl_run_control(opt, 0, &mut u), EpictrlStatus::Ok);
        assert!((0.0..=1.0).contains(&u));
        let mut a = std::mem::zeroed::<EpictrlSummary>();
        let mut b = std::mem::zeroed::<EpictrlSummary>();
        assert_eq!(epictrl_run_summary(free, &mut a), EpictrlStatus::Ok);
        assert_eq!(epictrl_run_summary(opt, &mut b), EpictrlStatus::Ok);
        assert!(a.cost.is_nan() && a.doses == 0.0);
        assert!(b.converged && b.iterations > 0 && b.doses > 1e7);
        assert!(b.peak_infected < a.peak_infected);

        epictrl_run_free(free);
        epictrl_run_free(opt);
        epictrl_scenario_free(s);
    }
}

#[test]
fn transport_temperature() {
    let s = italy();
    unsafe {
        let (mut t0, mut phi) = (0.0, 0.0);
        let st = epictrl_transport_initial_temperature(
            s,
            EpictrlCap::Insulated,
            EpictrlCriterion::Center,
            0.0,
            0.0,
            &mut t0,
            &mut phi,
        );
        assert_eq!(st, EpictrlStatus::Ok);
        assert!((t0 - (-70.0 / phi)).abs() < 1e-9);
        assert!((t0 + 71.6).abs() < 0.05, "{t0}");
        let st = epictrl_transport_initial_temperature(
            s,
            EpictrlCap::Dirichlet,
            EpictrlCriterion::Probe,
            0.5,
            0.02,
            &mut t0,
            ptr::null_mut(),
        );
        assert_eq!(st, EpictrlStatus::Config);
        assert!(!last_error().is_empty());
        epictrl_scenario_free(s);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(epictrl_scenario_load(ptr::null(), &mut s), EpictrlStatus::NullPointer);
        let name = CString::new("/no/such/file.toml").unwrap();
        assert_eq!(epictrl_scenario_load(name.as_ptr(), &mut s), EpictrlStatus::Config);
        assert!(s.is_null());
        assert!(last_error().contains("/no/such/file.toml"));
        let bad = CString::new("schema_version = 1\npopulation = 1.0\nomga = 2\n").unwrap();
        assert_eq!(epictrl_scenario_from_toml(bad.as_ptr(), &mut s), EpictrlStatus::Config);
        assert!(last_error().contains("omga"));
        assert_eq!(epictrl_simulate(ptr::null(), &mut ptr::null_mut()), EpictrlStatus::NullPointer);
        assert_eq!(epictrl_run_len(ptr::null()), 0);
        epictrl_run_free(ptr::null_mut());
        epictrl_scenario_free(ptr::null_mut());
        let v = CStr::from_ptr(epictrl_version()).to_str().unwrap();
        assert_eq!(v, env!("CARGO_PKG_VERSION"));
    }
}

#[test]
fn blow_up_reports_numerical_status() {
    let toml = r#"
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
"#;
    let text = CString::new(toml).unwrap();
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(epictrl_scenario_from_toml(text.as_ptr(), &mut s), EpictrlStatus::Ok);
        let mut run = ptr::null_mut();
        assert_eq!(epictrl_simulate(s, &mut run), EpictrlStatus::Numerical);
        assert!(run.is_null());
        assert!(last_error().contains("non-finite"));
        epictrl_scenario_free(s);
    }
}

fn compiler() -> Option<&'static str> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "epictrl.h"

int main(void) {
    EpictrlScenario *s = NULL;
    EpictrlRun *run = NULL;
    EpictrlSummary sum;
    double t0 = 0.0;
    if (epictrl_scenario_load("paper_italy", &s) != EPICTRL_STATUS_OK) {
        fprintf(stderr, "%s\n", epictrl_last_error());
        return 1;
    }
    if (epictrl_simulate(s, &run) != EPICTRL_STATUS_OK) return 2;
    if (epictrl_run_summary(run, &sum) != EPICTRL_STATUS_OK) return 3;
    if (epictrl_transport_initial_temperature(s, EPICTRL_CAP_INSULATED, EPICTRL_CRITERION_CENTER,
                                              0.0, 0.0, &t0, NULL) != EPICTRL_STATUS_OK) return 4;
    printf("%zu %.0f %.3f\n", epictrl_run_len(run), sum.peak_infected, t0);
    epictrl_run_free(run);
    epictrl_scenario_free(s);
    return 0;
}
"#;

fn include_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include")
}

#[test]
fn header_compiles_as_c() {
    let Some(cc) = compiler() else {
        eprintln!("no C compiler found; skipping header check");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let out = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(include_dir())
        .arg(&src)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn c_program_links_against_static_library() {
    let Some(cc) = compiler() else {
        eprintln!("no C compiler found; skipping link check");
        return;
    };
    // the test binary sits in <target>/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    let lib = exe.parent().and_then(Path::parent).unwrap().join("libepictrl_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping link check", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let (src, bin) = (dir.path().join("main.c"), dir.path().join("main"));
    std::fs::write(&src, C_PROGRAM).unwrap();
    let out = Command::new(cc)
        .args(["-std=c99", "-I"])
        .arg(include_dir())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let text = String::from_utf8_lossy(&run.stdout);
    let fields: Vec<&str> = text.split_whitespace().collect();
    assert_eq!(fields[0], "921");
    assert!((fields[2].parse::<f64>().unwrap() + 71.6).abs() < 0.05, "{text}");
}

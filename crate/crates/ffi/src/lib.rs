//! C interface to `epictrl`.
//!
//! Objects cross the boundary as opaque handles created by `*_load`,
//! `epictrl_simulate` and `epictrl_optimize` and released with the matching
//! `*_free`. Every fallible call returns an [`EpictrlStatus`]; on failure the
//! message is available from [`epictrl_last_error`] on the same thread.
//!
//! # Safety
//!
//! Pointer arguments must be null or valid for the access the function
//! documents. Handles must come from this library and be freed once.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use epictrl::epi::{CompartmentState, EpidemicParams};
use epictrl::io::output::headline;
use epictrl::io::config::Window;
use epictrl::io::{load_observed_series, ScenarioConfig};
use epictrl::ocp::{self, ControlSignal};
use epictrl::ode::Trajectory;
use epictrl::thermal::{self, CapCondition, Criterion};
use epictrl::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpictrlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Malformed or inconsistent configuration, data or thermal scenario.
    Config = 3,
    /// Non-finite state or another numerical failure.
    Numerical = 4,
    Io = 5,
    OutOfRange = 6,
    /// A Rust panic was caught at the boundary.
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpictrlCap {
    Dirichlet = 0,
    Insulated = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpictrlCriterion {
    Center = 0,
    VolumeAverage = 1,
    /// Point given by the `probe_r`, `probe_z` arguments, metres.
    Probe = 2,
}

/// Headline numbers of a run. Times are days since the window start.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpictrlSummary {
    pub peak_infected: f64,
    pub peak_infected_day: f64,
    pub peak_quarantined: f64,
    pub peak_quarantined_day: f64,
    /// `W(t_f)`, persons vaccinated.
    pub doses: f64,
    /// Objective value; NaN for uncontrolled runs.
    pub cost: f64,
    /// Sweep iterations; 0 for uncontrolled runs.
    pub iterations: u32,
    pub converged: bool,
}

/// A resolved scenario: parameters, grid and initial state.
pub struct EpictrlScenario {
    cfg: ScenarioConfig,
    params: EpidemicParams,
    x0: CompartmentState,
}

/// Trajectory of one run, with its control when optimized.
pub struct EpictrlRun {
    window: Window,
    state: Trajectory<8>,
    control: Option<ControlSignal>,
    cost: f64,
    iterations: u32,
    converged: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

type Failure = (EpictrlStatus, String);

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(e: &Error) -> EpictrlStatus {
    match e {
        Error::InvalidArgument(_) => EpictrlStatus::InvalidArgument,
        Error::Io { .. } => EpictrlStatus::Io,
        Error::NonFinite { .. } | Error::Numerical(_) => EpictrlStatus::Numerical,
        Error::Parse { .. } | Error::Config { .. } | Error::Scenario(_) | Error::GridMismatch(_) => {
            EpictrlStatus::Config
        }
    }
}

fn fail(e: Error) -> Failure {
    (status_of(&e), e.to_string())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> EpictrlStatus {
    let status = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EpictrlStatus::Ok,
        Ok(Err((status, message))) => {
            set_last_error(&message);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(&format!("internal panic: {msg}"));
            EpictrlStatus::Panic
        }
    };
    if status == EpictrlStatus::Ok {
        set_last_error("");
    }
    status
}

fn null(what: &str) -> Failure {
    (EpictrlStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (EpictrlStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

fn resolve(cfg: ScenarioConfig) -> Result<EpictrlScenario, Failure> {
    let params = cfg.params().ok_or_else(|| {
        (
            EpictrlStatus::Config,
            "scenario requests a fit; the C interface needs explicit params".to_string(),
        )
    })?;
    let obs = match (&cfg.data.path, cfg.needs_data()) {
        (Some(path), true) => Some(load_observed_series(path, &cfg.data.columns).map_err(fail)?),
        _ => None,
    };
    let (x0, _) = cfg.initial_state(&params, obs.as_ref()).map_err(fail)?;
    Ok(EpictrlScenario { cfg, params, x0 })
}

unsafe fn emit<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Loads a TOML scenario file, or a built-in scenario such as
/// `"paper_italy"`, into `*out`.
#[no_mangle]
pub unsafe extern "C" fn epictrl_scenario_load(path: *const c_char, out: *mut *mut EpictrlScenario) -> EpictrlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let path = text(path, "path")?;
        let s = resolve(ScenarioConfig::load(Path::new(path)).map_err(fail)?)?;
        emit(out, s);
        Ok(())
    })
}

/// Parses a scenario from TOML text.
#[no_mangle]
pub unsafe extern "C" fn epictrl_scenario_from_toml(
    toml: *const c_char,
    out: *mut *mut EpictrlScenario,
) -> EpictrlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let toml = text(toml, "toml")?;
        let s = resolve(ScenarioConfig::from_toml_str(toml, "<memory>").map_err(fail)?)?;
        emit(out, s);
        Ok(())
    })
}

/// Writes the eight initial compartments S, E, I, Q, R, D, P, W to `out`.
#[no_mangle]
pub unsafe extern "C" fn epictrl_scenario_initial_state(
    scenario: *const EpictrlScenario,
    out: *mut f64,
) -> EpictrlStatus {
    guard(|| {
        let s = handle(scenario, "scenario")?;
        if out.is_null() {
            return Err(null("out"));
        }
        ptr::copy_nonoverlapping(s.x0.to_array().as_ptr(), out, 8);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn epictrl_scenario_free(scenario: *mut EpictrlScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Runs the model without vaccination.
#[no_mangle]
pub unsafe extern "C" fn epictrl_simulate(scenario: *const EpictrlScenario, out: *mut *mut EpictrlRun) -> EpictrlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let s = handle(scenario, "scenario")?;
        let grid = s.cfg.grid().map_err(fail)?;
        let state = ocp::simulate_uncontrolled(&s.params, &s.x0, grid).map_err(fail)?;
        emit(
            out,
            EpictrlRun {
                window: s.cfg.window,
                state,
                control: None,
                cost: f64::NAN,
                iterations: 0,
                converged: true,
            },
        );
        Ok(())
    })
}

/// Solves the optimal vaccination problem. A sweep that stops at the
/// iteration limit still succeeds; check `converged` in the summary.
#[no_mangle]
pub unsafe extern "C" fn epictrl_optimize(scenario: *const EpictrlScenario, out: *mut *mut EpictrlRun) -> EpictrlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let s = handle(scenario, "scenario")?;
        let grid = s.cfg.grid().map_err(fail)?;
        let r = ocp::forward_backward_sweep(&s.params, &s.x0, grid, &s.cfg.sweep_config()).map_err(fail)?;
        emit(
            out,
            EpictrlRun {
                window: s.cfg.window,
                state: r.state,
                control: Some(r.control),
                cost: r.cost,
                iterations: r.iterations as u32,
                converged: r.converged,
            },
        );
        Ok(())
    })
}

/// Number of grid nodes in the run; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn epictrl_run_len(run: *const EpictrlRun) -> usize {
    run.as_ref().map_or(0, |r| r.state.values.len())
}

fn node_of(r: &EpictrlRun, node: usize) -> Result<usize, Failure> {
    if node < r.state.values.len() {
        Ok(node)
    } else {
        Err((
            EpictrlStatus::OutOfRange,
            format!("node {node} outside 0..{}", r.state.values.len()),
        ))
    }
}

/// Grid time of `node`, days.
#[no_mangle]
pub unsafe extern "C" fn epictrl_run_time(run: *const EpictrlRun, node: usize, out: *mut f64) -> EpictrlStatus {
    guard(|| {
        let r = handle(run, "run")?;
        let k = node_of(r, node)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = r.state.grid.time(k);
        Ok(())
    })
}

/// Writes the eight compartments at `node` to `out`.
#[no_mangle]
pub unsafe extern "C" fn epictrl_run_state(run: *const EpictrlRun, node: usize, out: *mut f64) -> EpictrlStatus {
    guard(|| {
        let r = handle(run, "run")?;
        let k = node_of(r, node)?;
        if out.is_null() {
            return Err(null("out"));
        }
        ptr::copy_nonoverlapping(r.state.values[k].as_ptr(), out, 8);
        Ok(())
    })
}

/// Vaccination rate at `node`, 1/day. Fails for uncontrolled runs.
#[no_mangle]
pub unsafe extern "C" fn epictrl_run_control(run: *const EpictrlRun, node: usize, out: *mut f64) -> EpictrlStatus {
    guard(|| {
        let r = handle(run, "run")?;
        let k = node_of(r, node)?;
        let u = r
            .control
            .as_ref()
            .ok_or_else(|| (EpictrlStatus::InvalidArgument, "run has no control".to_string()))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = u.values[k];
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn epictrl_run_summary(run: *const EpictrlRun, out: *mut EpictrlSummary) -> EpictrlStatus {
    guard(|| {
        let r = handle(run, "run")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let h = headline(&r.state, r.window.start);
        *out = EpictrlSummary {
            peak_infected: h.infected_peak.value,
            peak_infected_day: h.infected_peak.time,
            peak_quarantined: h.quarantined_peak.value,
            peak_quarantined_day: h.quarantined_peak.time,
            doses: h.doses,
            cost: r.cost,
            iterations: r.iterations,
            converged: r.converged,
        };
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn epictrl_run_free(run: *mut EpictrlRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// Departure temperature (°C) that meets the scenario's target at arrival
/// under the given cap condition and criterion, from the explicit FD solver.
/// `out_unit_response` may be null.
#[no_mangle]
pub unsafe extern "C" fn epictrl_transport_initial_temperature(
    scenario: *const EpictrlScenario,
    cap: EpictrlCap,
    criterion: EpictrlCriterion,
    probe_r: f64,
    probe_z: f64,
    out_temperature: *mut f64,
    out_unit_response: *mut f64,
) -> EpictrlStatus {
    guard(|| {
        let s = handle(scenario, "scenario")?;
        if out_temperature.is_null() {
            return Err(null("out_temperature"));
        }
        let t = thermal::TransportScenario {
            cap: match cap {
                EpictrlCap::Dirichlet => CapCondition::Dirichlet,
                EpictrlCap::Insulated => CapCondition::Insulated,
            },
            criterion: match criterion {
                EpictrlCriterion::Center => Criterion::Center,
                EpictrlCriterion::VolumeAverage => Criterion::VolumeAverage,
                EpictrlCriterion::Probe => Criterion::Probe { r: probe_r, z: probe_z },
            },
            ..s.cfg.transport
        };
        let v = thermal::required_initial_temperature(&t).map_err(fail)?;
        *out_temperature = v.initial_temperature;
        if !out_unit_response.is_null() {
            *out_unit_response = v.unit_response;
        }
        Ok(())
    })
}

/// Message of the last failed call on this thread, or an empty string. The
/// pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn epictrl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn epictrl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

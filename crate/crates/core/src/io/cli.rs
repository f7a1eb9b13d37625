//! The `epictrl` command line: `fit`, `simulate`, `optimize`, `transport`
//! and `compare`.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::calibration::{self, FitConfig, FitResult, Latents, ObservedSeries, SyntheticSpec};
use crate::epi::{CompartmentState, EpidemicParams};
use crate::io::config::{InitialSpec, ScenarioConfig};
use crate::io::data::{load_observed_series, restrict_to_window};
use crate::io::output::{self, headline, Headline, RunReport};
use crate::ocp::{self, SweepResult};
use crate::ode::{TimeGrid, Trajectory};
use crate::thermal::{self, Criterion, TableRow};
use crate::{Error, Result};

pub const SEED_ENV: &str = "EPICTRL_SEED";

/// Temperature the transport report brackets, °C.
pub const REFERENCE_INITIAL_TEMPERATURE: f64 = -94.5;

#[derive(Debug, Parser)]
#[command(name = "epictrl", version, about = "SEIQRDP calibration, vaccination control and vial heat transport")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Scenario file (TOML) or a built-in name such as `paper_italy`.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory; overrides `output_dir` in the config.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// RNG seed for synthetic data; the EPICTRL_SEED variable takes precedence.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// National feed CSV; overrides `data.path` in the config.
    #[arg(long)]
    pub data: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Calibrate the model to observed (Q, R, D).
    Fit(DataArgs),
    /// Run the model without vaccination.
    Simulate(DataArgs),
    /// Solve the optimal vaccination problem.
    Optimize(DataArgs),
    /// Departure temperature table for the vial.
    Transport(CommonArgs),
    /// Runs with and without vaccination on one grid.
    Compare(DataArgs),
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match run_captured(args) {
        Ok(summary) => {
            print!("{summary}");
            0
        }
        Err((code, message)) => {
            eprint!("{message}");
            code
        }
    }
}

/// Like [`run`] but returns the console summary, or the exit status and
/// error text, instead of printing them.
pub fn run_captured<I, T>(args: I) -> std::result::Result<String, (i32, String)>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| (e.exit_code(), e.render().to_string()))?;
    execute(&cli.command).map_err(|e| (e.exit_code(), format!("error: {e}\n")))
}

struct Context {
    cfg: ScenarioConfig,
    out: PathBuf,
    seed: u64,
}

impl Context {
    fn new(common: &CommonArgs) -> Result<Self> {
        let cfg = ScenarioConfig::load(&common.config)?;
        let seed = match std::env::var(SEED_ENV) {
            Ok(v) => v.trim().parse::<u64>().map_err(|_| Error::Config {
                path: SEED_ENV.into(),
                message: format!("`{v}` is not an unsigned integer"),
            })?,
            Err(_) => common.seed.unwrap_or(0),
        };
        let out = common
            .out
            .clone()
            .or_else(|| cfg.output_dir.clone())
            .unwrap_or_else(|| PathBuf::from("out"));
        fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
        Ok(Self { cfg, out, seed })
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn report(&self, title: &str) -> Result<RunReport> {
        let mut r = RunReport::new(title);
        r.config_echo = self.cfg.to_toml_string()?;
        Ok(r)
    }

    fn grid_line(&self) -> String {
        format!(
            "grid: {} days from {}, RK4 step {} d ({} steps per day)",
            self.cfg.window.days(),
            self.cfg.window.start,
            1.0 / self.cfg.steps_per_day as f64,
            self.cfg.steps_per_day
        )
    }
}

fn load_data(ctx: &Context, flag: Option<&Path>) -> Result<Option<ObservedSeries>> {
    let path = flag.map(Path::to_path_buf).or_else(|| ctx.cfg.data.path.clone());
    let Some(path) = path else { return Ok(None) };
    let obs = load_observed_series(&path, &ctx.cfg.data.columns)?;
    let w = ctx.cfg.window;
    restrict_to_window(&obs, w.start, w.end)
        .map(Some)
        .map_err(|e| Error::Parse {
            path,
            line: 0,
            message: e.to_string(),
        })
}

/// Parameters, initial state and (when the config asks for one) the fit.
struct Model {
    params: EpidemicParams,
    x0: CompartmentState,
    latents: Latents,
    fit: Option<FitResult>,
}

fn resolve_model(ctx: &Context, obs: Option<&ObservedSeries>) -> Result<Model> {
    if let Some(params) = ctx.cfg.params() {
        let (x0, latents) = ctx.cfg.initial_state(&params, obs)?;
        return Ok(Model {
            params,
            x0,
            latents,
            fit: None,
        });
    }
    let (fit, _) = run_fit(ctx, obs)?;
    let (x0, _) = ctx.cfg.initial_state(&fit.params, obs)?;
    let x0 = match obs {
        Some(o) => calibration::initial_state(fit.params.population, &fit.latents, o.quarantined[0], o.recovered[0], o.dead[0]),
        None => CompartmentState::with_susceptible_remainder(
            fit.params.population,
            fit.latents.exposed,
            fit.latents.infected,
            x0.q,
            x0.r,
            x0.d,
        ),
    };
    Ok(Model {
        params: fit.params,
        x0,
        latents: fit.latents,
        fit: Some(fit),
    })
}

fn fit_guess(cfg: &ScenarioConfig) -> EpidemicParams {
    match (&cfg.fit, cfg.params()) {
        (Some(f), _) => f.guess.expect("resolved").with_population(cfg.population),
        (None, Some(p)) => p,
        (None, None) => EpidemicParams::italy_initial_guess(cfg.population),
    }
}

/// Fits to the data, or to a seeded synthetic series when the config asks
/// for one and no data is given. Returns the fit and the series used.
fn run_fit(ctx: &Context, obs: Option<&ObservedSeries>) -> Result<(FitResult, ObservedSeries)> {
    let cfg = &ctx.cfg;
    let guess = fit_guess(cfg);
    let spec = cfg.fit.unwrap_or(crate::io::config::FitSpec {
        guess: None,
        fit_initial_latent: true,
        max_iterations: 500,
        normalize_series: false,
        synthetic_noise: None,
    });
    let series = match (obs, spec.synthetic_noise) {
        (Some(o), _) => o.clone(),
        (None, Some(noise)) => {
            let truth = EpidemicParams::italy_fitted(cfg.population);
            let (x0, latents) = cfg.initial_state(&truth, None)?;
            let days = cfg.window.days() as usize;
            let spec = SyntheticSpec {
                start: cfg.window.start,
                days,
                anchor: [x0.q, x0.r, x0.d],
                steps_per_day: cfg.steps_per_day,
            };
            calibration::synthetic_series(&truth, &latents, &spec, noise, ctx.seed)?
        }
        (None, None) => {
            return Err(Error::Config {
                path: "data".into(),
                message: "fitting needs observed data (--data or data.path) or fit.synthetic_noise".into(),
            })
        }
    };
    let (_, latent_guess) = cfg.initial_state(&guess, Some(&series))?;
    let mut fc = FitConfig::new(guess, latent_guess, series.len());
    fc.fit_initial_latent = spec.fit_initial_latent;
    fc.max_iterations = spec.max_iterations;
    fc.residual.steps_per_day = cfg.steps_per_day;
    fc.residual.normalize_series = spec.normalize_series;
    // a guess outside the default box widens the box rather than failing
    let theta: Vec<f64> = guess
        .fitted_values()
        .into_iter()
        .chain([latent_guess.exposed, latent_guess.infected])
        .collect();
    for (b, v) in fc.bounds.0.iter_mut().zip(theta) {
        b.1 = b.1.max(2.0 * v);
    }
    log::info!("fitting {} days of observations", series.len());
    Ok((calibration::fit_parameters(&series, &fc)?, series))
}

fn mass_balance_line(traj: &Trajectory<8>, population: f64) -> String {
    let worst = traj
        .values
        .iter()
        .map(|x| (x.iter().sum::<f64>() - population).abs())
        .fold(0.0, f64::max);
    format!("max |sum of compartments - N| / N: {:.3e}", worst / population)
}

fn params_lines(p: &EpidemicParams, l: &Latents) -> Vec<String> {
    p.fitted_values()
        .iter()
        .zip(EpidemicParams::NAMES)
        .map(|(v, n)| format!("{n} = {v:.6}"))
        .chain([
            format!("E0 = {:.1} persons", l.exposed),
            format!("I0 = {:.1} persons", l.infected),
        ])
        .collect()
}

/// Peak I and Q as the latent initial pool is scaled.
pub fn latent_sensitivity(
    params: &EpidemicParams,
    x0: &CompartmentState,
    grid: TimeGrid,
    start: chrono::NaiveDate,
    factors: &[f64],
) -> Result<Vec<(f64, Headline)>> {
    factors
        .iter()
        .map(|&f| {
            let x = CompartmentState::with_susceptible_remainder(
                params.population,
                f * x0.e,
                f * x0.i,
                x0.q,
                x0.r,
                x0.d,
            );
            let traj = ocp::simulate_uncontrolled(params, &x, grid)?;
            Ok((f, headline(&traj, start)))
        })
        .collect()
}

pub const SENSITIVITY_FACTORS: [f64; 7] = [0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 4.0];

fn sensitivity_lines(rows: &[(f64, Headline)], x0: &CompartmentState) -> Vec<String> {
    let mut out = vec!["scale  E0 [persons]  I0 [persons]  peak I [persons]  peak I date  peak Q [persons]  peak Q date".to_string()];
    for (f, h) in rows {
        out.push(format!(
            "{f:>5.2}  {:>12.0}  {:>12.0}  {:>16.0}  {}  {:>16.0}  {}",
            f * x0.e,
            f * x0.i,
            h.infected_peak.value,
            h.infected_peak.date,
            h.quarantined_peak.value,
            h.quarantined_peak.date
        ));
    }
    out
}

fn initial_lines(cfg: &ScenarioConfig, x0: &CompartmentState) -> Vec<String> {
    let mut out = vec![format!(
        "S0 {:.0}, E0 {:.0}, I0 {:.0}, Q0 {:.0}, R0 {:.0}, D0 {:.0}, P0 {:.0}, W0 {:.0} (persons)",
        x0.s, x0.e, x0.i, x0.q, x0.r, x0.d, x0.p, x0.w
    )];
    if let InitialSpec::Explicit { approximate: true, .. } = cfg.initial {
        out.push("Q0, R0, D0 are approximate values entered by hand, not read from the feed".into());
    }
    out
}

fn execute(command: &Command) -> Result<String> {
    match command {
        Command::Fit(a) => cmd_fit(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Optimize(a) => cmd_optimize(a),
        Command::Transport(a) => cmd_transport(a),
        Command::Compare(a) => cmd_compare(a),
    }
}

fn cmd_fit(a: &DataArgs) -> Result<String> {
    let ctx = Context::new(&a.common)?;
    let obs = load_data(&ctx, a.data.as_deref())?;
    let (fit, series) = run_fit(&ctx, obs.as_ref())?;

    let reference = EpidemicParams::italy_fitted(ctx.cfg.population);
    let (_, reference_latents) = ctx.cfg.initial_state(&reference, Some(&series))?;
    let resid = calibration::ResidualOptions { steps_per_day: ctx.cfg.steps_per_day, ..Default::default() };
    let reference_sse = calibration::sum_of_squares(&calibration::residual_vector_with(
        &reference,
        &reference_latents,
        &series,
        &resid,
    ));

    let file = json!({
        "params": fit.params,
        "latents": fit.latents,
        "sse": fit.sse,
        "initial_sse": fit.initial_sse,
        "reference_sse": reference_sse,
        "iterations": fit.iterations,
        "converged": fit.converged,
        "warnings": fit.warnings,
        "observations": series.len(),
        "window_start": series.start,
    });
    let path = ctx.path("fit.json");
    fs::write(&path, serde_json::to_string_pretty(&file).expect("json")).map_err(|e| Error::io(&path, e))?;

    let mut report = ctx.report("fit")?;
    report.section(
        "fit",
        vec![
            format!("observations: {} days from {} (Q, R, D in persons)", series.len(), series.start),
            ctx.grid_line(),
            format!("sse: {:.6e} persons², from {:.6e} at the initial guess", fit.sse, fit.initial_sse),
            format!("sse with the default parameter set: {reference_sse:.6e} persons²"),
            format!("iterations: {}, converged: {}", fit.iterations, if fit.converged { "yes" } else { "no" }),
        ],
    );
    report.section("fitted parameters (rates in 1/day, lambda3 and kappa3 in days)", params_lines(&fit.params, &fit.latents));
    if !fit.warnings.is_empty() {
        report.section("warnings", fit.warnings.clone());
    }
    report.write(&ctx.path("report.txt"))?;
    Ok(format!(
        "{}\nsse {:.6e} (initial {:.6e}), converged: {}\nwritten to {}\n",
        params_lines(&fit.params, &fit.latents).join("\n"),
        fit.sse,
        fit.initial_sse,
        fit.converged,
        ctx.out.display()
    ))
}

fn cmd_simulate(a: &DataArgs) -> Result<String> {
    let ctx = Context::new(&a.common)?;
    let obs = load_data(&ctx, a.data.as_deref())?;
    let m = resolve_model(&ctx, obs.as_ref())?;
    let grid = ctx.cfg.grid()?;
    let start = ctx.cfg.window.start;
    let traj = ocp::simulate_uncontrolled(&m.params, &m.x0, grid)?;
    output::write_timeseries(&traj, None, start, &ctx.path("timeseries.csv"))?;
    let h = headline(&traj, start);
    let sens = latent_sensitivity(&m.params, &m.x0, grid, start, &SENSITIVITY_FACTORS)?;

    let mut report = ctx.report("simulate (no vaccination)")?;
    report.section("run", vec![ctx.grid_line(), mass_balance_line(&traj, m.params.population)]);
    report.section("initial state", initial_lines(&ctx.cfg, &m.x0));
    report.section("headline", h.lines());
    report.section("peak sensitivity to the latent initial pool (E0, I0)", sensitivity_lines(&sens, &m.x0));
    if m.fit.is_some() {
        report.section("fitted parameters", params_lines(&m.params, &m.latents));
    }
    report.write(&ctx.path("report.txt"))?;
    Ok(format!("{}\nwritten to {}\n", h.lines().join("\n"), ctx.out.display()))
}

fn sweep_lines(r: &SweepResult) -> Vec<String> {
    vec![
        format!("J(u*): {:.6e}, J(0): {:.6e} (persons² day)", r.cost, r.baseline_cost),
        format!("iterations: {}, converged: {}", r.iterations, if r.converged { "yes" } else { "no (best iterate reported)" }),
        format!("fixed-point residual: {:.3e}", r.fixed_point_residual),
        format!(
            "u range: {:.6} .. {:.6} (1/day)",
            r.control.values.iter().cloned().fold(f64::INFINITY, f64::min),
            r.control.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        ),
    ]
}

fn cmd_optimize(a: &DataArgs) -> Result<String> {
    let ctx = Context::new(&a.common)?;
    let obs = load_data(&ctx, a.data.as_deref())?;
    let m = resolve_model(&ctx, obs.as_ref())?;
    let grid = ctx.cfg.grid()?;
    let start = ctx.cfg.window.start;
    let r = ocp::forward_backward_sweep(&m.params, &m.x0, grid, &ctx.cfg.sweep_config())?;
    output::write_timeseries(&r.state, Some(&r.control), start, &ctx.path("timeseries.csv"))?;
    write_control(&r, start, &ctx.path("control.csv"))?;
    let h = headline(&r.state, start);

    let mut report = ctx.report("optimize (vaccination control)")?;
    report.section("run", vec![ctx.grid_line(), mass_balance_line(&r.state, m.params.population)]);
    report.section("initial state", initial_lines(&ctx.cfg, &m.x0));
    report.section("sweep", sweep_lines(&r));
    report.section("headline", h.lines());
    report.write(&ctx.path("report.txt"))?;
    Ok(format!(
        "{}\n{}\nwritten to {}\n",
        sweep_lines(&r).join("\n"),
        h.lines().join("\n"),
        ctx.out.display()
    ))
}

fn write_control(r: &SweepResult, start: chrono::NaiveDate, path: &Path) -> Result<()> {
    let mut text = String::from("date,day,u [1/day]\n");
    for day in 0..=r.control.grid.whole_days() {
        let k = r.control.grid.day_node(day);
        text.push_str(&format!("{},{day},{:.6}\n", start + chrono::Duration::days(day as i64), r.control.values[k]));
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn cmd_compare(a: &DataArgs) -> Result<String> {
    let ctx = Context::new(&a.common)?;
    let obs = load_data(&ctx, a.data.as_deref())?;
    let m = resolve_model(&ctx, obs.as_ref())?;
    let grid = ctx.cfg.grid()?;
    let start = ctx.cfg.window.start;
    let free = ocp::simulate_uncontrolled(&m.params, &m.x0, grid)?;
    let r = ocp::forward_backward_sweep(&m.params, &m.x0, grid, &ctx.cfg.sweep_config())?;
    output::write_timeseries(&free, None, start, &ctx.path("uncontrolled.csv"))?;
    output::write_timeseries(&r.state, Some(&r.control), start, &ctx.path("controlled.csv"))?;
    let (h0, h1) = (headline(&free, start), headline(&r.state, start));

    let row = |name: &str, a: f64, b: f64| format!("{name:<22} {a:>14.0} {b:>14.0} {:>14.0}", b - a);
    let (t0, t1) = (&h0.terminal, &h1.terminal);
    let diff = vec![
        format!("{:<22} {:>14} {:>14} {:>14}", "metric [persons]", "no vaccine", "vaccine", "difference"),
        row("peak I", h0.infected_peak.value, h1.infected_peak.value),
        row("peak Q", h0.quarantined_peak.value, h1.quarantined_peak.value),
        row("terminal S", t0.s, t1.s),
        row("terminal I", t0.i, t1.i),
        row("terminal Q", t0.q, t1.q),
        row("terminal R", t0.r, t1.r),
        row("terminal D", t0.d, t1.d),
        row("terminal P", t0.p, t1.p),
        row("W(t_f)", h0.doses, h1.doses),
        format!("peak I date: {} vs {}", h0.infected_peak.date, h1.infected_peak.date),
        format!("peak Q date: {} vs {}", h0.quarantined_peak.date, h1.quarantined_peak.date),
    ];
    let mut report = ctx.report("compare (with and without vaccination)")?;
    report.section("run", vec![ctx.grid_line(), "both runs share the grid, parameters and initial state".into()]);
    report.section("initial state", initial_lines(&ctx.cfg, &m.x0));
    report.section("sweep", sweep_lines(&r));
    report.section("metrics", diff.clone());
    report.write(&ctx.path("report.txt"))?;
    Ok(format!("{}\nwritten to {}\n", diff.join("\n"), ctx.out.display()))
}

/// Criteria tabulated by `transport`: centre, volume average, the
/// half-radius mid-height probe, and the configured criterion if different.
pub fn transport_criteria(s: &thermal::TransportScenario) -> Vec<Criterion> {
    let mut out = vec![
        Criterion::Center,
        Criterion::VolumeAverage,
        Criterion::Probe {
            r: 0.5 * s.geometry.radius,
            z: 0.5 * s.geometry.height,
        },
    ];
    if !out.contains(&s.criterion) {
        out.push(s.criterion);
    }
    out
}

fn cell(r: &Result<thermal::InitialTemperature>) -> (String, String) {
    match r {
        Ok(v) => (format!("{:.6}", v.unit_response), format!("{:.3}", v.initial_temperature)),
        Err(_) => ("-".into(), "unreachable".into()),
    }
}

fn table_lines(rows: &[TableRow]) -> (String, Vec<String>) {
    let mut csv = String::from("alpha_reading,alpha [m^2/s],cap,criterion,phi_fd [-],T0_fd [degC],phi_series [-],T0_series [degC]\n");
    let mut lines = vec![format!(
        "{:<10} {:>12} {:<10} {:<28} {:>10} {:>12} {:>10} {:>12}",
        "alpha", "[m^2/s]", "cap", "criterion", "phi fd", "T0 fd [C]", "phi ser", "T0 ser [C]"
    )];
    for r in rows {
        let (pf, tf) = cell(&r.fd);
        let (ps, ts) = cell(&r.series);
        csv.push_str(&format!(
            "{},{:.6e},{},\"{}\",{pf},{tf},{ps},{ts}\n",
            r.alpha, r.alpha_value, r.cap, r.criterion
        ));
        lines.push(format!(
            "{:<10} {:>12.4e} {:<10} {:<28} {pf:>10} {tf:>12} {ps:>10} {ts:>12}",
            r.alpha.to_string(),
            r.alpha_value,
            r.cap.to_string(),
            r.criterion.to_string()
        ));
        if let Err(e) = &r.fd {
            lines.push(format!("    {e}"));
        }
    }
    (csv, lines)
}

/// Statement naming the table entries that bracket `reference`.
pub fn bracket_statement(rows: &[TableRow], reference: f64) -> String {
    match thermal::bracketing_rows(rows, reference) {
        Some((lo, hi)) => {
            let v = |r: &TableRow| r.fd.as_ref().map(|x| x.initial_temperature).unwrap_or(f64::NAN);
            format!(
                "{reference} degC is bracketed by [{} caps, {}, alpha {}] at {:.3} degC and [{} caps, {}, alpha {}] at {:.3} degC",
                lo.cap, lo.criterion, lo.alpha, v(lo), hi.cap, hi.criterion, hi.alpha, v(hi)
            )
        }
        None => format!("no pair of table entries brackets {reference} degC"),
    }
}

fn cmd_transport(a: &CommonArgs) -> Result<String> {
    let ctx = Context::new(a)?;
    let s = ctx.cfg.transport;
    let rows = thermal::initial_temperature_table(&s, &transport_criteria(&s));
    let (csv, lines) = table_lines(&rows);
    let path = ctx.path("transport_table.csv");
    fs::write(&path, csv).map_err(|e| Error::io(&path, e))?;
    let bracket = bracket_statement(&rows, REFERENCE_INITIAL_TEMPERATURE);

    let mut snapshot = Vec::new();
    match thermal::required_initial_temperature(&s) {
        Ok(t0) => {
            let field = thermal::solve_fd(&s, t0.initial_temperature)?;
            output::write_field(&field, &ctx.path("field.csv"))?;
            snapshot.push(format!(
                "field.csv: arrival field for T0 = {:.3} degC ({} cap, {}), criterion value {:.3} degC",
                t0.initial_temperature, s.cap, s.criterion, t0.forward_check
            ));
        }
        Err(e) => snapshot.push(format!("no snapshot for the configured scenario: {e}")),
    }

    let mut report = ctx.report("transport (departure temperature)")?;
    report.section(
        "scenario",
        vec![
            format!("vial radius {} m, height {} m", s.geometry.radius, s.geometry.height),
            format!(
                "k {} W/(m degC), rho {} kg/m^3, c {} J/(kg degC)",
                s.material.conductivity, s.material.density, s.material.heat_capacity
            ),
            format!(
                "arrival {} s, wall {} degC, target {} degC",
                s.arrival_time, s.boundary_temperature, s.target_temperature
            ),
            format!(
                "FD grid {} x {} nodes (r x z), explicit step <= {:.4e} s",
                s.grid.radial_nodes,
                s.grid.axial_nodes,
                thermal::stable_time_step(&s)
            ),
        ],
    );
    report.section("T0 by diffusivity reading, cap condition and criterion", lines.clone());
    report.section("bracket", vec![bracket.clone()]);
    report.section("snapshot", snapshot);
    report.write(&ctx.path("report.txt"))?;
    Ok(format!("{}\n{bracket}\nwritten to {}\n", lines.join("\n"), ctx.out.display()))
}

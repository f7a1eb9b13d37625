//! Levenberg-Marquardt calibration of the uncontrolled model to observed
//! (Q, R, D) series.

use chrono::{Duration, NaiveDate};
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::epi::{CompartmentState, EpidemicParams};
use crate::ocp::simulate_uncontrolled;
use crate::ode::{TimeGrid, DEFAULT_STEPS_PER_DAY};
use crate::{Error, Result};

/// Daily observations starting at `start`, one entry per consecutive day.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservedSeries {
    pub start: NaiveDate,
    /// Active quarantined (confirmed positive) cases.
    pub quarantined: Vec<f64>,
    /// Cumulative recovered.
    pub recovered: Vec<f64>,
    /// Cumulative dead.
    pub dead: Vec<f64>,
    /// Newly confirmed cases per day, when the source provides them.
    #[serde(default)]
    pub new_cases: Option<Vec<f64>>,
}

impl ObservedSeries {
    pub fn len(&self) -> usize {
        self.quarantined.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quarantined.is_empty()
    }

    pub fn date(&self, day: usize) -> NaiveDate {
        self.start + Duration::days(day as i64)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        if n == 0 {
            return Err(Error::InvalidArgument("observed series is empty".into()));
        }
        if self.recovered.len() != n || self.dead.len() != n {
            return Err(Error::InvalidArgument("observed columns differ in length".into()));
        }
        if let Some(c) = &self.new_cases {
            if c.len() != n {
                return Err(Error::InvalidArgument("new-case column differs in length".into()));
            }
        }
        for (name, col) in [
            ("quarantined", &self.quarantined),
            ("recovered", &self.recovered),
            ("dead", &self.dead),
        ] {
            if let Some(k) = col.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
                return Err(Error::InvalidArgument(format!(
                    "{name} on {} is negative or not finite",
                    self.date(k)
                )));
            }
        }
        for (name, col) in [("recovered", &self.recovered), ("dead", &self.dead)] {
            if let Some(k) = col.windows(2).position(|w| w[1] < w[0]) {
                return Err(Error::InvalidArgument(format!(
                    "cumulative {name} decreases on {}",
                    self.date(k + 1)
                )));
            }
        }
        Ok(())
    }

    /// Leading `days` observations.
    pub fn truncated(&self, days: usize) -> Self {
        let days = days.min(self.len());
        Self {
            start: self.start,
            quarantined: self.quarantined[..days].to_vec(),
            recovered: self.recovered[..days].to_vec(),
            dead: self.dead[..days].to_vec(),
            new_cases: self.new_cases.as_ref().map(|c| c[..days].to_vec()),
        }
    }
}

/// Latent initial compartments, which the national feed does not report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Latents {
    pub exposed: f64,
    pub infected: f64,
}

impl Latents {
    /// Steady-flux estimate: with `c` new confirmed cases per day, the
    /// infected pool feeding quarantine is `c / delta` and the exposed pool
    /// feeding it is `c / gamma`.
    pub fn steady_flux(new_cases_per_day: f64, p: &EpidemicParams) -> Self {
        Self {
            exposed: new_cases_per_day / p.gamma,
            infected: new_cases_per_day / p.delta,
        }
    }
}

/// Initial state from the first observation row: `P0 = W0 = 0` and `S0`
/// takes the rest of the population.
pub fn initial_state(population: f64, latents: &Latents, q0: f64, r0: f64, d0: f64) -> CompartmentState {
    CompartmentState::with_susceptible_remainder(population, latents.exposed, latents.infected, q0, r0, d0)
}

fn initial_from_obs(p: &EpidemicParams, latents: &Latents, obs: &ObservedSeries) -> CompartmentState {
    initial_state(p.population, latents, obs.quarantined[0], obs.recovered[0], obs.dead[0])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualOptions {
    pub steps_per_day: u32,
    /// Divide each series' residuals by that series' observed maximum.
    pub normalize_series: bool,
}

impl Default for ResidualOptions {
    fn default() -> Self {
        Self {
            steps_per_day: DEFAULT_STEPS_PER_DAY,
            normalize_series: false,
        }
    }
}

/// Model (Q, R, D) sampled on whole days `0..days`.
pub fn simulate_observables(
    params: &EpidemicParams,
    x0: &CompartmentState,
    days: usize,
    steps_per_day: u32,
) -> Result<Vec<[f64; 3]>> {
    let pick = |x: &[f64; 8]| [x[3], x[4], x[5]];
    if days <= 1 {
        return Ok(vec![pick(&x0.to_array()); days]);
    }
    let grid = TimeGrid::days((days - 1) as u32, steps_per_day)?;
    let traj = simulate_uncontrolled(params, x0, grid)?;
    Ok((0..days).map(|d| pick(&traj.values[grid.day_node(d)])).collect())
}

/// `[Q_model - Q_obs, R_model - R_obs, D_model - D_obs]`, three blocks of one
/// entry per observed day. An integration failure yields all-infinite entries.
pub fn residual_vector(params: &EpidemicParams, latents: &Latents, obs: &ObservedSeries) -> Vec<f64> {
    residual_vector_with(params, latents, obs, &ResidualOptions::default())
}

pub fn residual_vector_with(
    params: &EpidemicParams,
    latents: &Latents,
    obs: &ObservedSeries,
    opts: &ResidualOptions,
) -> Vec<f64> {
    let n = obs.len();
    let x0 = initial_from_obs(params, latents, obs);
    let model = match simulate_observables(params, &x0, n, opts.steps_per_day) {
        Ok(m) if m.iter().flatten().all(|v| v.is_finite()) => m,
        _ => return vec![f64::INFINITY; 3 * n],
    };
    let scale = |col: &[f64]| {
        if opts.normalize_series {
            let m = col.iter().cloned().fold(0.0, f64::max);
            if m > 0.0 {
                1.0 / m
            } else {
                1.0
            }
        } else {
            1.0
        }
    };
    let cols = [&obs.quarantined, &obs.recovered, &obs.dead];
    let mut out = Vec::with_capacity(3 * n);
    for (c, col) in cols.iter().enumerate() {
        let s = scale(col);
        out.extend((0..n).map(|d| (model[d][c] - col[d]) * s));
    }
    out
}

pub fn sum_of_squares(r: &[f64]) -> f64 {
    r.iter().map(|v| v * v).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub start: NaiveDate,
    pub days: usize,
    /// Observed (Q, R, D) on day 0.
    pub anchor: [f64; 3],
    pub steps_per_day: u32,
}

/// Noisy daily (Q, R, D) from the uncontrolled model. Each value is scaled
/// by `1 + noise_scale * eta` with seeded standard normal `eta`, floored at
/// zero, and the cumulative series are re-monotonised by running maxima.
pub fn synthetic_series(
    params: &EpidemicParams,
    latents: &Latents,
    spec: &SyntheticSpec,
    noise_scale: f64,
    seed: u64,
) -> Result<ObservedSeries> {
    if !(noise_scale.is_finite() && noise_scale >= 0.0) {
        return Err(Error::InvalidArgument(format!("noise scale must be >= 0, got {noise_scale}")));
    }
    if spec.days == 0 {
        return Err(Error::InvalidArgument("synthetic series needs at least one day".into()));
    }
    let [q0, r0, d0] = spec.anchor;
    let x0 = initial_state(params.population, latents, q0, r0, d0);
    let clean = simulate_observables(params, &x0, spec.days, spec.steps_per_day)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols = [Vec::new(), Vec::new(), Vec::new()];
    for day in &clean {
        for (c, v) in day.iter().enumerate() {
            let eta: f64 = StandardNormal.sample(&mut rng);
            cols[c].push((v * (1.0 + noise_scale * eta)).max(0.0));
        }
    }
    for col in &mut cols[1..] {
        let mut running = 0.0f64;
        for v in col.iter_mut() {
            running = running.max(*v);
            *v = running;
        }
    }
    let [quarantined, recovered, dead] = cols;
    Ok(ObservedSeries {
        start: spec.start,
        quarantined,
        recovered,
        dead,
        new_cases: None,
    })
}

/// Inclusive bounds for each unknown, in [`EpidemicParams::NAMES`] order
/// followed by `E0`, `I0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamBounds(pub Vec<(f64, f64)>);

impl ParamBounds {
    pub fn defaults(window_days: usize, population: f64) -> Self {
        let rate = (0.0, 5.0);
        let day = (0.0, 2.0 * window_days as f64);
        Self(vec![
            rate,
            rate,
            rate,
            rate,
            (0.0, 1.0),
            rate,
            day,
            (0.0, 1.0),
            rate,
            day,
            (0.0, population),
            (0.0, population),
        ])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig {
    pub guess: EpidemicParams,
    pub latent_guess: Latents,
    /// Include `E0`, `I0` among the unknowns.
    pub fit_initial_latent: bool,
    pub bounds: ParamBounds,
    pub damping_seed: f64,
    pub damping_grow: f64,
    pub damping_shrink: f64,
    pub max_iterations: usize,
    /// Stop when `max_j |g_j| max(|θ_j|, 1e-8) / sse` falls below this, with
    /// `g = Jᵀ r`.
    pub gradient_tolerance: f64,
    pub residual: ResidualOptions,
}

impl FitConfig {
    pub fn new(guess: EpidemicParams, latent_guess: Latents, window_days: usize) -> Self {
        Self {
            guess,
            latent_guess,
            fit_initial_latent: true,
            bounds: ParamBounds::defaults(window_days, guess.population),
            damping_seed: 1e-3,
            damping_grow: 10.0,
            damping_shrink: 0.3,
            max_iterations: 500,
            gradient_tolerance: 1e-12,
            residual: ResidualOptions::default(),
        }
    }

    fn unknowns(&self) -> usize {
        if self.fit_initial_latent {
            EpidemicParams::FITTED_LEN + 2
        } else {
            EpidemicParams::FITTED_LEN
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.guess.validate()?;
        if self.bounds.0.len() != EpidemicParams::FITTED_LEN + 2 {
            return Err(Error::InvalidArgument(format!(
                "expected {} bounds, got {}",
                EpidemicParams::FITTED_LEN + 2,
                self.bounds.0.len()
            )));
        }
        let theta = pack(&self.guess, &self.latent_guess, true);
        for (k, ((lo, hi), v)) in self.bounds.0.iter().zip(&theta).enumerate() {
            if !(lo <= hi && *lo <= *v && *v <= *hi) {
                return Err(Error::InvalidArgument(format!(
                    "guess {} = {v} outside bounds [{lo}, {hi}]",
                    unknown_name(k)
                )));
            }
        }
        if !(self.damping_seed > 0.0) {
            return Err(Error::InvalidArgument("damping seed must be positive".into()));
        }
        if !(self.damping_grow > 1.0 && self.damping_shrink > 0.0 && self.damping_shrink < 1.0) {
            return Err(Error::InvalidArgument(
                "damping grow factor must exceed 1 and shrink factor lie in (0, 1)".into(),
            ));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument("max_iterations must be positive".into()));
        }
        Ok(())
    }
}

pub fn unknown_name(k: usize) -> &'static str {
    match k {
        k if k < EpidemicParams::FITTED_LEN => EpidemicParams::NAMES[k],
        10 => "E0",
        _ => "I0",
    }
}

fn pack(p: &EpidemicParams, l: &Latents, with_latent: bool) -> Vec<f64> {
    let mut v = p.fitted_values().to_vec();
    if with_latent {
        v.extend([l.exposed, l.infected]);
    }
    v
}

fn unpack(theta: &[f64], base: &EpidemicParams, base_latent: &Latents) -> (EpidemicParams, Latents) {
    let p = base.with_fitted_values(theta);
    let l = if theta.len() > EpidemicParams::FITTED_LEN {
        Latents {
            exposed: theta[10],
            infected: theta[11],
        }
    } else {
        *base_latent
    };
    (p, l)
}

/// One outer LM iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmStep {
    pub damping: f64,
    pub sse: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone)]
pub struct FitResult {
    pub params: EpidemicParams,
    pub latents: Latents,
    pub sse: f64,
    pub initial_sse: f64,
    pub iterations: usize,
    pub converged: bool,
    pub residuals: Vec<f64>,
    /// Unknowns whose Jacobian column vanished at some iterate.
    pub warnings: Vec<String>,
    pub trace: Vec<LmStep>,
}

fn jacobian(
    theta: &[f64],
    r0: &[f64],
    cfg: &FitConfig,
    obs: &ObservedSeries,
    bump_scale: f64,
) -> Vec<Vec<f64>> {
    (0..theta.len())
        .into_par_iter()
        .map(|j| {
            let hi = cfg.bounds.0[j].1;
            let mut bump = bump_scale * (1.0 + theta[j].abs());
            if theta[j] + bump > hi {
                bump = -bump;
            }
            let mut t = theta.to_vec();
            t[j] += bump;
            let (p, l) = unpack(&t, &cfg.guess, &cfg.latent_guess);
            let r = residual_vector_with(&p, &l, obs, &cfg.residual);
            r.iter().zip(r0).map(|(a, b)| (a - b) / bump).collect()
        })
        .collect()
}

/// Forward-difference Jacobian columns of the residual, one per unknown.
pub fn residual_jacobian(
    params: &EpidemicParams,
    latents: &Latents,
    obs: &ObservedSeries,
    cfg: &FitConfig,
    bump_scale: f64,
) -> Vec<Vec<f64>> {
    let theta = pack(params, latents, cfg.fit_initial_latent);
    let r0 = residual_vector_with(params, latents, obs, &cfg.residual);
    jacobian(&theta, &r0, cfg, obs, bump_scale)
}

/// Damped Gauss-Newton with Marquardt diagonal scaling, bounds enforced by
/// projecting each trial point onto the box.
pub fn fit_parameters(obs: &ObservedSeries, cfg: &FitConfig) -> Result<FitResult> {
    obs.validate()?;
    cfg.validate()?;
    let m = cfg.unknowns();
    let bounds = &cfg.bounds.0[..m];
    let project = |t: &mut [f64]| {
        for (v, (lo, hi)) in t.iter_mut().zip(bounds) {
            *v = v.clamp(*lo, *hi);
        }
    };
    let eval = |t: &[f64]| {
        let (p, l) = unpack(t, &cfg.guess, &cfg.latent_guess);
        residual_vector_with(&p, &l, obs, &cfg.residual)
    };

    let mut theta = pack(&cfg.guess, &cfg.latent_guess, cfg.fit_initial_latent);
    let mut r = eval(&theta);
    let mut sse = sum_of_squares(&r);
    if !sse.is_finite() {
        return Err(Error::Numerical("model diverges at the initial guess".into()));
    }
    let initial_sse = sse;
    let mut damping = cfg.damping_seed;
    let mut warnings: Vec<String> = Vec::new();
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    'outer: while iterations < cfg.max_iterations {
        iterations += 1;
        if sse == 0.0 {
            converged = true;
            break;
        }
        let cols = jacobian(&theta, &r, cfg, obs, 1e-6);
        for (j, col) in cols.iter().enumerate() {
            if col.iter().all(|v| *v == 0.0) {
                let msg = format!("parameter {} is unidentifiable (zero Jacobian column)", unknown_name(j));
                if !warnings.contains(&msg) {
                    log::warn!("{msg}");
                    warnings.push(msg);
                }
            }
        }
        let n = r.len();
        let jac = DMatrix::from_fn(n, m, |i, j| cols[j][i]);
        let res = DVector::from_column_slice(&r);
        let jtj = jac.transpose() * &jac;
        let grad = jac.transpose() * &res;

        let scaled_grad = grad
            .iter()
            .zip(&theta)
            .map(|(g, t)| (g * t.abs().max(1e-8)).abs())
            .fold(0.0, f64::max)
            / sse;
        if scaled_grad <= cfg.gradient_tolerance {
            converged = true;
            break;
        }

        loop {
            let mut lhs = jtj.clone();
            for j in 0..m {
                let d = jtj[(j, j)].max(1e-30);
                lhs[(j, j)] += damping * d;
            }
            let step = match lhs.clone().cholesky() {
                Some(ch) => ch.solve(&(-&grad)),
                None => match lhs.lu().solve(&(-&grad)) {
                    Some(s) => s,
                    None => {
                        damping *= cfg.damping_grow;
                        trace.push(LmStep { damping, sse, accepted: false });
                        if damping > 1e20 {
                            break 'outer;
                        }
                        continue;
                    }
                },
            };
            let mut trial: Vec<f64> = theta.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            project(&mut trial);
            let trial_r = eval(&trial);
            let trial_sse = sum_of_squares(&trial_r);
            if trial_sse.is_finite() && trial_sse < sse {
                let rel_gain = (sse - trial_sse) / sse;
                let rel_step = theta
                    .iter()
                    .zip(&trial)
                    .map(|(a, b)| (a - b).abs() / (a.abs() + 1e-12))
                    .fold(0.0, f64::max);
                theta = trial;
                r = trial_r;
                sse = trial_sse;
                damping = (damping * cfg.damping_shrink).max(1e-15);
                trace.push(LmStep { damping, sse, accepted: true });
                if rel_gain < 1e-15 && rel_step < 1e-12 {
                    converged = true;
                    break 'outer;
                }
                break;
            }
            damping *= cfg.damping_grow;
            trace.push(LmStep { damping, sse, accepted: false });
            if damping > 1e20 {
                // no downhill step at any damping: a stationary point of the projected problem
                converged = true;
                break 'outer;
            }
        }
    }

    let (params, latents) = unpack(&theta, &cfg.guess, &cfg.latent_guess);
    Ok(FitResult {
        params,
        latents,
        sse,
        initial_sse,
        iterations,
        converged,
        residuals: r,
        warnings,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const N: f64 = 60_480_000.0;

    fn params() -> EpidemicParams {
        EpidemicParams::italy_fitted(N)
    }

    fn latents() -> Latents {
        Latents::steady_flux(29_907.0, &params())
    }

    fn spec(days: usize) -> SyntheticSpec {
        SyntheticSpec {
            start: NaiveDate::from_ymd_opt(2020, 11, 1).unwrap(),
            days,
            anchor: [418_142.0, 252_959.0, 38_826.0],
            steps_per_day: 10,
        }
    }

    #[test]
    fn noiseless_series_has_zero_residual() {
        let obs = synthetic_series(&params(), &latents(), &spec(92), 0.0, 1).unwrap();
        let r = residual_vector(&params(), &latents(), &obs);
        assert_eq!(r.len(), 276);
        assert!(r.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn perturbed_beta_gives_positive_sse() {
        let obs = synthetic_series(&params(), &latents(), &spec(40), 0.0, 1).unwrap();
        let p = EpidemicParams { beta: params().beta * 1.1, ..params() };
        assert!(sum_of_squares(&residual_vector(&p, &latents(), &obs)) > 0.0);
    }

    #[test]
    fn synthetic_is_deterministic_and_linear_in_noise() {
        let a = synthetic_series(&params(), &latents(), &spec(30), 0.01, 7).unwrap();
        let b = synthetic_series(&params(), &latents(), &spec(30), 0.01, 7).unwrap();
        assert_eq!(a, b);
        let clean = synthetic_series(&params(), &latents(), &spec(30), 0.0, 7).unwrap();
        let double = synthetic_series(&params(), &latents(), &spec(30), 0.02, 7).unwrap();
        // Q is neither floored nor re-monotonised at these magnitudes
        for d in 0..30 {
            let d1 = a.quarantined[d] - clean.quarantined[d];
            let d2 = double.quarantined[d] - clean.quarantined[d];
            assert!((d2 - 2.0 * d1).abs() <= 1e-9 * clean.quarantined[d]);
        }
        assert!(a.validate().is_ok());
    }

    #[test]
    fn divergent_model_maps_to_infinite_residual() {
        let obs = synthetic_series(&params(), &latents(), &spec(10), 0.0, 1).unwrap();
        let p = EpidemicParams { beta: f64::MAX, ..params() };
        let r = residual_vector(&p, &latents(), &obs);
        assert!(r.iter().all(|v| v.is_infinite()));
    }

    #[test]
    fn validation_catches_decreasing_deaths() {
        let mut obs = synthetic_series(&params(), &latents(), &spec(5), 0.0, 1).unwrap();
        obs.dead[3] = obs.dead[2] - 1.0;
        let msg = obs.validate().unwrap_err().to_string();
        assert!(msg.contains("dead"), "{msg}");
    }

    #[test]
    fn jacobian_columns_converge_with_bump() {
        let obs = synthetic_series(&params(), &latents(), &spec(20), 0.0, 1).unwrap();
        let cfg = FitConfig::new(params(), latents(), 20);
        let a = residual_jacobian(&params(), &latents(), &obs, &cfg, 1e-5);
        let b = residual_jacobian(&params(), &latents(), &obs, &cfg, 5e-6);
        let c = residual_jacobian(&params(), &latents(), &obs, &cfg, 2.5e-6);
        for j in [0, 1, 3, 6] {
            let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let diff = |x: &[f64], y: &[f64]| norm(&x.iter().zip(y).map(|(p, q)| p - q).collect::<Vec<_>>());
            let d1 = diff(&a[j], &b[j]);
            let d2 = diff(&b[j], &c[j]);
            // first-order truncation error halves with the bump
            assert!(d2 <= 0.75 * d1 + 1e-6 * norm(&a[j]), "column {j}: {d1} {d2}");
        }
    }

    #[test]
    fn zero_column_warns() {
        // with no quarantined people the mortality curve never acts on the data
        let obs = ObservedSeries {
            start: NaiveDate::from_ymd_opt(2020, 11, 1).unwrap(),
            quarantined: vec![0.0; 5],
            recovered: vec![0.0, 1.0, 2.0, 3.0, 4.0],
            dead: vec![0.0; 5],
            new_cases: None,
        };
        let mut cfg = FitConfig::new(params(), Latents { exposed: 0.0, infected: 0.0 }, 92);
        cfg.fit_initial_latent = false;
        cfg.max_iterations = 2;
        let fit = fit_parameters(&obs, &cfg).unwrap();
        assert!(fit.warnings.iter().any(|w| w.contains("kappa1")), "{:?}", fit.warnings);
    }

    #[test]
    fn damping_responds_to_acceptance() {
        let obs = synthetic_series(&params(), &latents(), &spec(30), 0.01, 3).unwrap();
        let guess = EpidemicParams { beta: 0.6, delta: 0.3, ..params() };
        let cfg = FitConfig { max_iterations: 30, ..FitConfig::new(guess, latents(), 92) };
        let fit = fit_parameters(&obs, &cfg).unwrap();
        assert!(fit.sse <= fit.initial_sse);
        let mut prev_damping = cfg.damping_seed;
        let mut prev_sse = fit.initial_sse;
        for step in &fit.trace {
            if step.accepted {
                assert!(step.damping < prev_damping || step.damping == 1e-15);
                assert!(step.sse <= prev_sse);
                prev_sse = step.sse;
            } else {
                assert!(step.damping > prev_damping);
            }
            prev_damping = step.damping;
        }
        let again = fit_parameters(&obs, &cfg).unwrap();
        assert_eq!(again.sse.to_bits(), fit.sse.to_bits());
        assert!((sum_of_squares(&fit.residuals) - fit.sse).abs() <= 1e-12 * fit.sse);
    }

    #[test]
    fn config_validation() {
        let mut cfg = FitConfig::new(params(), latents(), 92);
        assert!(cfg.validate().is_ok());
        cfg.bounds.0[1] = (0.0, 0.1);
        assert!(cfg.validate().is_err());
        let cfg = FitConfig { damping_seed: 0.0, ..FitConfig::new(params(), latents(), 92) };
        assert!(cfg.validate().is_err());
    }
}

//! Scenario configuration in TOML.
//!
//! ```toml
//! schema_version = 1
//! population = 60480000.0
//! steps_per_day = 10              # optional
//! output_dir = "out"              # optional
//!
//! [window]
//! start = "2020-11-01"
//! end = "2021-01-31"
//!
//! [initial]                       # optional, defaults to from-data + steady-flux
//! source = "from-data"            # or "explicit" with quarantined, recovered, dead
//! [initial.latent]
//! rule = "steady-flux"            # or "explicit" with exposed, infected
//!
//! [params]                        # exclusive with [fit]
//! omega = 0.0547                  # ... all ten constants
//!
//! [fit]
//! max_iterations = 500
//!
//! [weights]
//! w1 = 1.0
//! w2 = 1.0
//!
//! [sweep]
//! relaxation = 0.5
//!
//! [transport]                     # full thermal scenario; vaccine vial by default
//!
//! [data]
//! path = "dpc-covid19-ita-andamento-nazionale.csv"
//! [data.columns]
//! quarantined = "totale_positivi"
//! ```

use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::calibration::{Latents, ObservedSeries};
use crate::epi::{CompartmentState, EpidemicParams};
use crate::io::data::ColumnMap;
use crate::ocp::{ObjectiveWeights, SweepConfig};
use crate::ode::{TimeGrid, DEFAULT_STEPS_PER_DAY};
use crate::thermal::TransportScenario;
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

const ITALY_SCENARIO: &str = include_str!("../../configs/paper_italy.toml");

/// Built-in scenarios addressable by name instead of a path.
pub const BUILTIN_SCENARIOS: [&str; 1] = ["paper_italy"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl Window {
    /// Calendar days covered, both ends included. The grid runs from day 0
    /// to this many days, one node past the last covered day.
    pub fn days(&self) -> u32 {
        (self.end - self.start).num_days() as u32 + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case", deny_unknown_fields)]
pub enum LatentSpec {
    /// `E0 = c / γ`, `I0 = c / δ` with `c` new cases per day, read from the
    /// data's first row when not given.
    SteadyFlux {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        new_cases_per_day: Option<f64>,
    },
    Explicit { exposed: f64, infected: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialSpec {
    /// Q0, R0, D0 from the first data row in the window.
    FromData { latent: LatentSpec },
    Explicit {
        quarantined: f64,
        recovered: f64,
        dead: f64,
        /// Marks hand-entered values that were not read from the feed.
        #[serde(default)]
        approximate: bool,
        latent: LatentSpec,
    },
}

impl Default for InitialSpec {
    fn default() -> Self {
        InitialSpec::FromData {
            latent: LatentSpec::SteadyFlux { new_cases_per_day: None },
        }
    }
}

/// The ten model constants; N comes from the top-level `population`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    pub omega: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa3: f64,
}

impl ParamsSpec {
    pub fn with_population(&self, population: f64) -> EpidemicParams {
        EpidemicParams {
            omega: self.omega,
            beta: self.beta,
            gamma: self.gamma,
            delta: self.delta,
            lambda1: self.lambda1,
            lambda2: self.lambda2,
            lambda3: self.lambda3,
            kappa1: self.kappa1,
            kappa2: self.kappa2,
            kappa3: self.kappa3,
            population,
        }
    }
}

impl From<EpidemicParams> for ParamsSpec {
    fn from(p: EpidemicParams) -> Self {
        Self {
            omega: p.omega,
            beta: p.beta,
            gamma: p.gamma,
            delta: p.delta,
            lambda1: p.lambda1,
            lambda2: p.lambda2,
            lambda3: p.lambda3,
            kappa1: p.kappa1,
            kappa2: p.kappa2,
            kappa3: p.kappa3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitSpec {
    /// Starting point; the stock initial guesses when omitted.
    #[serde(default)]
    pub guess: Option<ParamsSpec>,
    #[serde(default = "yes")]
    pub fit_initial_latent: bool,
    #[serde(default = "default_fit_iterations")]
    pub max_iterations: usize,
    #[serde(default)]
    pub normalize_series: bool,
    /// Fit a seeded synthetic series with this multiplicative noise level
    /// when no data file is supplied.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synthetic_noise: Option<f64>,
}

fn yes() -> bool {
    true
}

fn default_fit_iterations() -> usize {
    500
}

fn default_steps_per_day() -> u32 {
    DEFAULT_STEPS_PER_DAY
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSettings {
    pub relaxation: f64,
    pub max_iterations: usize,
    pub tolerance: f64,
}

impl Default for SweepSettings {
    fn default() -> Self {
        let d = SweepConfig::default();
        Self {
            relaxation: d.relaxation,
            max_iterations: d.max_iterations,
            tolerance: d.tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub columns: ColumnMap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    pub population: f64,
    pub window: Window,
    #[serde(default = "default_steps_per_day")]
    pub steps_per_day: u32,
    #[serde(default)]
    pub initial: InitialSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitSpec>,
    #[serde(default)]
    pub weights: ObjectiveWeights,
    #[serde(default)]
    pub sweep: SweepSettings,
    #[serde(default = "TransportScenario::vaccine_vial")]
    pub transport: TransportScenario,
    #[serde(default)]
    pub data: DataSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

impl ScenarioConfig {
    /// Parses and resolves `text`; `origin` names the source in errors.
    pub fn from_toml_str(text: &str, origin: &str) -> Result<Self> {
        let config_err = |message: String| Error::Config {
            path: origin.to_string(),
            message,
        };
        let de = toml::Deserializer::parse(text).map_err(|e| config_err(e.to_string()))?;
        let mut cfg: ScenarioConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let key = e.path().to_string();
            let inner = e.into_inner().message().to_string();
            config_err(if key == "." { inner } else { format!("at `{key}`: {inner}") })
        })?;
        cfg.resolve().map_err(config_err)?;
        Ok(cfg)
    }

    /// Reads a config file, or a built-in scenario by name.
    pub fn load(path: &Path) -> Result<Self> {
        let origin = path.display().to_string();
        if !path.exists() {
            if let Some(text) = builtin(&origin) {
                return Self::from_toml_str(text, &origin);
            }
        }
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
            path: origin.clone(),
            message: format!("cannot read file: {e}"),
        })?;
        let mut cfg = Self::from_toml_str(&text, &origin)?;
        // relative data paths are relative to the config file
        if let (Some(data), Some(dir)) = (&cfg.data.path, path.parent()) {
            if data.is_relative() && !dir.as_os_str().is_empty() {
                cfg.data.path = Some(dir.join(data));
            }
        }
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::InvalidArgument(format!("cannot serialize config: {e}")))
    }

    fn resolve(&mut self) -> std::result::Result<(), String> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(format!(
                "at `schema_version`: unsupported version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            ));
        }
        if !(self.population.is_finite() && self.population > 0.0) {
            return Err("at `population`: must be positive".into());
        }
        if self.window.end <= self.window.start {
            return Err(format!(
                "at `window`: end {} must be after start {}",
                self.window.end, self.window.start
            ));
        }
        if self.steps_per_day == 0 {
            return Err("at `steps_per_day`: must be positive".into());
        }
        match (&self.params, &mut self.fit) {
            (Some(_), Some(_)) => return Err("`params` and `fit` are mutually exclusive".into()),
            (None, None) => {
                self.params = Some(EpidemicParams::italy_fitted(self.population).into());
            }
            (None, Some(fit)) => {
                if fit.guess.is_none() {
                    fit.guess = Some(EpidemicParams::italy_initial_guess(self.population).into());
                }
            }
            (Some(_), None) => {}
        }
        if let Some(p) = &self.params {
            p.with_population(self.population)
                .validate()
                .map_err(|e| format!("at `params`: {e}"))?;
        }
        self.weights.validate().map_err(|e| format!("at `weights`: {e}"))?;
        self.sweep_config().validate().map_err(|e| format!("at `sweep`: {e}"))?;
        self.transport.validate().map_err(|e| format!("at `transport`: {e}"))?;
        Ok(())
    }

    pub fn grid(&self) -> Result<TimeGrid> {
        TimeGrid::days(self.window.days(), self.steps_per_day)
    }

    pub fn sweep_config(&self) -> SweepConfig {
        SweepConfig {
            weights: self.weights,
            relaxation: self.sweep.relaxation,
            max_iterations: self.sweep.max_iterations,
            tolerance: self.sweep.tolerance,
        }
    }

    /// Explicit parameters, or `None` when a fit is requested.
    pub fn params(&self) -> Option<EpidemicParams> {
        self.params.map(|p| p.with_population(self.population))
    }

    pub fn needs_data(&self) -> bool {
        let latent_from_data = |l: &LatentSpec| matches!(l, LatentSpec::SteadyFlux { new_cases_per_day: None });
        match &self.initial {
            InitialSpec::FromData { .. } => true,
            InitialSpec::Explicit { latent, .. } => latent_from_data(latent),
        }
    }

    /// Initial compartments and the latent part used to build them.
    pub fn initial_state(
        &self,
        params: &EpidemicParams,
        obs: Option<&ObservedSeries>,
    ) -> Result<(CompartmentState, Latents)> {
        let missing = |what: &str| Error::Config {
            path: "initial".into(),
            message: format!("{what} requires observed data (--data or data.path)"),
        };
        let latents = |spec: &LatentSpec| -> Result<Latents> {
            match *spec {
                LatentSpec::Explicit { exposed, infected } => Ok(Latents { exposed, infected }),
                LatentSpec::SteadyFlux { new_cases_per_day: Some(c) } => Ok(Latents::steady_flux(c, params)),
                LatentSpec::SteadyFlux { new_cases_per_day: None } => {
                    let obs = obs.ok_or_else(|| missing("steady-flux latents without new_cases_per_day"))?;
                    let c = obs
                        .new_cases
                        .as_ref()
                        .map(|c| c[0])
                        .ok_or_else(|| Error::Config {
                            path: "initial.latent".into(),
                            message: "data has no new-case column; set new_cases_per_day".into(),
                        })?;
                    Ok(Latents::steady_flux(c, params))
                }
            }
        };
        let (q0, r0, d0, l) = match &self.initial {
            InitialSpec::Explicit {
                quarantined,
                recovered,
                dead,
                latent,
                ..
            } => (*quarantined, *recovered, *dead, latents(latent)?),
            InitialSpec::FromData { latent } => {
                let obs = obs.ok_or_else(|| missing("initial.source = \"from-data\""))?;
                (obs.quarantined[0], obs.recovered[0], obs.dead[0], latents(latent)?)
            }
        };
        let x0 = crate::calibration::initial_state(self.population, &l, q0, r0, d0);
        if x0.s < 0.0 {
            return Err(Error::Config {
                path: "initial".into(),
                message: "initial compartments exceed the population".into(),
            });
        }
        Ok((x0, l))
    }
}

fn builtin(name: &str) -> Option<&'static str> {
    match name {
        "paper_italy" => Some(ITALY_SCENARIO),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
schema_version = 1
population = 1000000.0
[window]
start = "2020-11-01"
end = "2020-12-01"
"#;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = ScenarioConfig::from_toml_str(MINIMAL, "minimal").unwrap();
        assert_eq!(cfg.steps_per_day, 10);
        assert_eq!(cfg.weights, ObjectiveWeights { w1: 1.0, w2: 1.0 });
        assert_eq!(cfg.window.days(), 31);
        assert_eq!(cfg.params(), Some(EpidemicParams::italy_fitted(1e6)));
        assert_eq!(cfg.initial, InitialSpec::default());
        assert!(cfg.needs_data());
    }

    #[test]
    fn params_and_fit_are_exclusive() {
        let text = format!("{MINIMAL}\n[fit]\n[params]\nomega=0.05\nbeta=0.5\ngamma=0.1\ndelta=0.3\nlambda1=0.1\nlambda2=0.05\nlambda3=30.0\nkappa1=0.002\nkappa2=0.01\nkappa3=60.0\n");
        let err = ScenarioConfig::from_toml_str(&text, "both").unwrap_err().to_string();
        assert!(err.contains("mutually exclusive"), "{err}");
    }

    #[test]
    fn unknown_key_is_named_with_path() {
        let text = format!("{MINIMAL}\n[params]\nomga = 0.05\n");
        let err = ScenarioConfig::from_toml_str(&text, "typo").unwrap_err().to_string();
        assert!(err.contains("omga") && err.contains("params"), "{err}");
        let err = ScenarioConfig::from_toml_str(&format!("{MINIMAL}\nsteps_per_dya = 4\n"), "typo")
            .unwrap_err()
            .to_string();
        assert!(err.contains("steps_per_dya"), "{err}");
    }

    #[test]
    fn version_and_window_checked() {
        let bad = MINIMAL.replace("schema_version = 1", "schema_version = 7");
        assert!(ScenarioConfig::from_toml_str(&bad, "v").is_err());
        let bad = MINIMAL.replace("2020-12-01", "2020-10-01");
        assert!(ScenarioConfig::from_toml_str(&bad, "w").is_err());
    }

    #[test]
    fn round_trip_is_identity() {
        for text in [MINIMAL, ITALY_SCENARIO] {
            let a = ScenarioConfig::from_toml_str(text, "a").unwrap();
            let b = ScenarioConfig::from_toml_str(&a.to_toml_string().unwrap(), "b").unwrap();
            assert_eq!(a, b);
        }
        let fit = format!("{MINIMAL}\n[fit]\nsynthetic_noise = 0.01\n[transport.criterion.probe]\nr = 0.01\nz = 0.02\n");
        let err = ScenarioConfig::from_toml_str(&fit, "f");
        // transport must be given in full
        assert!(err.is_err());
    }

    #[test]
    fn builtin_scenario_resolves() {
        let cfg = ScenarioConfig::load(Path::new("paper_italy")).unwrap();
        assert_eq!(cfg.population, 60_480_000.0);
        assert_eq!(cfg.window.days(), 92);
        let p = cfg.params().unwrap();
        let (x0, l) = cfg.initial_state(&p, None).unwrap();
        assert!((x0.total() - cfg.population).abs() < 1e-6);
        assert!((l.exposed - 29907.0 / 0.0873).abs() < 1e-6);
        assert!(matches!(cfg.initial, InitialSpec::Explicit { approximate: true, .. }));
    }

    #[test]
    fn missing_file_names_path() {
        let err = ScenarioConfig::load(Path::new("/nonexistent/x.toml")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("/nonexistent/x.toml"));
    }
}

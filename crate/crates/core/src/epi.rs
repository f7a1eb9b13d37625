//! SEIQRDP compartmental dynamics, with and without vaccination.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Beyond this exponent magnitude the mortality curve is below f64 resolution.
const MORTALITY_EXP_CLAMP: f64 = 700.0;

/// Model constants. Rates are per day, `lambda3`/`kappa3` are day offsets
/// from the window start, `population` is the constant total N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpidemicParams {
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
    pub population: f64,
}

impl EpidemicParams {
    /// Number of fitted model constants (everything except N).
    pub const FITTED_LEN: usize = 10;

    pub const NAMES: [&'static str; Self::FITTED_LEN] = [
        "omega", "beta", "gamma", "delta", "lambda1", "lambda2", "lambda3", "kappa1", "kappa2",
        "kappa3",
    ];

    /// Parameters fitted to the Italian national data for 1 Nov 2020 - 31 Jan 2021.
    pub fn italy_fitted(population: f64) -> Self {
        Self {
            omega: 0.0547,
            beta: 0.5425,
            gamma: 0.0873,
            delta: 0.3425,
            lambda1: 0.0999,
            lambda2: 0.0501,
            lambda3: 38.8542,
            kappa1: 0.0021,
            kappa2: 0.0125,
            kappa3: 66.6652,
            population,
        }
    }

    /// Starting point used for the Italian calibration.
    pub fn italy_initial_guess(population: f64) -> Self {
        Self {
            omega: 0.06,
            beta: 1.0,
            gamma: 5.0,
            delta: 0.5,
            lambda1: 0.01,
            lambda2: 0.1,
            lambda3: 10.0,
            kappa1: 0.001,
            kappa2: 0.001,
            kappa3: 10.0,
            population,
        }
    }

    pub fn fitted_values(&self) -> [f64; Self::FITTED_LEN] {
        [
            self.omega,
            self.beta,
            self.gamma,
            self.delta,
            self.lambda1,
            self.lambda2,
            self.lambda3,
            self.kappa1,
            self.kappa2,
            self.kappa3,
        ]
    }

    pub fn with_fitted_values(&self, v: &[f64]) -> Self {
        assert!(v.len() >= Self::FITTED_LEN);
        Self {
            omega: v[0],
            beta: v[1],
            gamma: v[2],
            delta: v[3],
            lambda1: v[4],
            lambda2: v[5],
            lambda3: v[6],
            kappa1: v[7],
            kappa2: v[8],
            kappa3: v[9],
            population: self.population,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.fitted_values();
        if let Some((i, x)) = v.iter().enumerate().find(|(_, x)| !x.is_finite() || **x < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "{} must be finite and nonnegative, got {x}",
                Self::NAMES[i]
            )));
        }
        if !(self.population.is_finite() && self.population > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "population must be positive, got {}",
                self.population
            )));
        }
        if self.lambda1 > 1.0 || self.kappa1 > 1.0 {
            return Err(Error::InvalidArgument(
                "lambda1 and kappa1 must not exceed 1".into(),
            ));
        }
        Ok(())
    }

    /// Time-varying recovery rate: a logistic curve rising to `lambda1`.
    pub fn recovery_rate(&self, t: f64) -> f64 {
        self.lambda1 / (1.0 + (-self.lambda2 * (t - self.lambda3)).exp())
    }

    /// Time-varying mortality rate: a sech-shaped bump of height `kappa1 / 2`
    /// centred on `kappa3`.
    pub fn mortality_rate(&self, t: f64) -> f64 {
        let a = self.kappa2 * (t - self.kappa3);
        if a.abs() > MORTALITY_EXP_CLAMP {
            return 0.0;
        }
        self.kappa1 / (a.exp() + (-a).exp())
    }
}

/// The eight state coordinates, in persons.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CompartmentState {
    pub s: f64,
    pub e: f64,
    pub i: f64,
    pub q: f64,
    pub r: f64,
    pub d: f64,
    pub p: f64,
    /// Cumulative vaccinated persons; stays 0 without control.
    pub w: f64,
}

impl CompartmentState {
    pub const DIM: usize = 8;
    pub const LABELS: [&'static str; Self::DIM] = ["S", "E", "I", "Q", "R", "D", "P", "W"];

    pub fn from_array(x: [f64; 8]) -> Self {
        Self {
            s: x[0],
            e: x[1],
            i: x[2],
            q: x[3],
            r: x[4],
            d: x[5],
            p: x[6],
            w: x[7],
        }
    }

    pub fn to_array(self) -> [f64; 8] {
        [self.s, self.e, self.i, self.q, self.r, self.d, self.p, self.w]
    }

    pub fn total(&self) -> f64 {
        self.to_array().iter().sum()
    }

    /// Initial state with the susceptible class filling the rest of the population.
    pub fn with_susceptible_remainder(population: f64, e: f64, i: f64, q: f64, r: f64, d: f64) -> Self {
        let s = population - (e + i + q + r + d);
        Self {
            s,
            e,
            i,
            q,
            r,
            d,
            p: 0.0,
            w: 0.0,
        }
    }
}

/// Right-hand side of the uncontrolled system. The W slot is always 0.
pub fn uncontrolled_rhs(t: f64, x: &[f64; 8], p: &EpidemicParams) -> [f64; 8] {
    let [s, e, i, q, ..] = *x;
    let infection = p.beta * s * i / p.population;
    let protection = p.omega * s;
    let recovery = p.recovery_rate(t) * q;
    let death = p.mortality_rate(t) * q;
    [
        -infection - protection,
        infection - p.gamma * e,
        p.gamma * e - p.delta * i,
        p.delta * i - recovery - death,
        recovery,
        death,
        protection,
        0.0,
    ]
}

/// Right-hand side with vaccination fraction `u`, which must lie in [0, 1].
pub fn controlled_rhs(t: f64, x: &[f64; 8], p: &EpidemicParams, u: f64) -> Result<[f64; 8]> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::InvalidArgument(format!(
            "control value {u} outside [0, 1] reached the dynamics"
        )));
    }
    Ok(controlled_rhs_unchecked(t, x, p, u))
}

pub(crate) fn controlled_rhs_unchecked(t: f64, x: &[f64; 8], p: &EpidemicParams, u: f64) -> [f64; 8] {
    let mut dx = uncontrolled_rhs(t, x, p);
    let vaccinated = u * x[0];
    dx[0] -= vaccinated;
    dx[7] = vaccinated;
    dx
}

//! Separation-of-variables series for the unit response.

use std::f64::consts::PI;

use super::bessel::{j0, j0_zero, j1};
use super::{CapCondition, Criterion, TransportScenario};
use crate::{Error, Result};

const MIN_TERMS: usize = 20;
const MAX_TERMS: usize = 20_000;
const TAIL_TOLERANCE: f64 = 1e-10;
const TERM_CUTOFF: f64 = 1e-13;

/// Sums `coef(n) exp(-mu(n)² fourier)` over modes `n = 1, 2, ...`, where
/// `bound(n) >= |coef(n)|` and `mu` increases by at least `gap` per mode.
fn decaying_sum(
    fourier: f64,
    gap: f64,
    mut mode: impl FnMut(usize) -> (f64, f64, f64),
) -> Result<f64> {
    let mut sum = 0.0;
    for n in 1..=MAX_TERMS {
        let (mu, coef, bound) = mode(n);
        let decay = (-mu * mu * fourier).exp();
        sum += coef * decay;
        let term_bound = bound * decay;
        if n >= MIN_TERMS && term_bound < TERM_CUTOFF {
            // remaining terms shrink at least geometrically
            let ratio = (-(2.0 * mu + gap) * gap * fourier).exp();
            let tail = term_bound * ratio / (1.0 - ratio);
            if tail <= TAIL_TOLERANCE {
                return Ok(sum);
            }
        }
    }
    Err(Error::Numerical(format!(
        "eigenseries did not reach tail {TAIL_TOLERANCE:e} within {MAX_TERMS} terms (Fourier number {fourier:e})"
    )))
}

fn radial_point(fourier: f64, rho: f64) -> Result<f64> {
    decaying_sum(fourier, 3.0, |n| {
        let mu = j0_zero(n);
        let jm = j1(mu);
        let c = 2.0 / (mu * jm);
        (mu, c * j0(mu * rho), c.abs())
    })
}

fn radial_average(fourier: f64) -> Result<f64> {
    decaying_sum(fourier, 3.0, |n| {
        let mu = j0_zero(n);
        let c = 4.0 / (mu * mu);
        (mu, c, c)
    })
}

fn slab_point(fourier: f64, zeta: f64) -> Result<f64> {
    decaying_sum(fourier, 2.0 * PI, |n| {
        let mu = (2 * n - 1) as f64 * PI;
        let c = 4.0 / mu;
        (mu, c * (mu * zeta).sin(), c)
    })
}

fn slab_average(fourier: f64) -> Result<f64> {
    decaying_sum(fourier, 2.0 * PI, |n| {
        let mu = (2 * n - 1) as f64 * PI;
        let c = 8.0 / (mu * mu);
        (mu, c, c)
    })
}

fn is_interior(s: &TransportScenario, r: f64, z: f64) -> bool {
    let caps_open = s.cap == CapCondition::Insulated || (z > 0.0 && z < s.geometry.height);
    r < s.geometry.radius && caps_open
}

/// `φ(t, r, z)`: a J0 eigenseries in `r`, times the odd sine series in `z`
/// when the caps are held at the boundary temperature.
pub fn unit_response_series(s: &TransportScenario, t: f64, r: f64, z: f64) -> Result<f64> {
    let g = &s.geometry;
    if !(0.0..=g.radius).contains(&r) || !(0.0..=g.height).contains(&z) {
        return Err(Error::Scenario(format!("point ({r}, {z}) lies outside the vial")));
    }
    if !is_interior(s, r, z) {
        return Ok(0.0);
    }
    if t <= 0.0 {
        return Ok(1.0);
    }
    let alpha = s.diffusivity();
    let radial = radial_point(alpha * t / (g.radius * g.radius), r / g.radius)?;
    let axial = match s.cap {
        CapCondition::Insulated => 1.0,
        CapCondition::Dirichlet => slab_point(alpha * t / (g.height * g.height), z / g.height)?,
    };
    Ok(radial * axial)
}

/// Volume average of `φ(t, ·)`.
pub fn unit_response_series_average(s: &TransportScenario, t: f64) -> Result<f64> {
    if t <= 0.0 {
        return Ok(1.0);
    }
    let g = &s.geometry;
    let alpha = s.diffusivity();
    let radial = radial_average(alpha * t / (g.radius * g.radius))?;
    let axial = match s.cap {
        CapCondition::Insulated => 1.0,
        CapCondition::Dirichlet => slab_average(alpha * t / (g.height * g.height))?,
    };
    Ok(radial * axial)
}

pub(crate) fn criterion_response(s: &TransportScenario, t: f64) -> Result<f64> {
    match s.criterion {
        Criterion::Center => unit_response_series(s, t, 0.0, 0.5 * s.geometry.height),
        Criterion::VolumeAverage => unit_response_series_average(s, t),
        Criterion::Probe { r, z } => unit_response_series(s, t, r, z),
    }
}

//! Transient heat diffusion in a cylindrical vial, solved in axisymmetric
//! (r, z) form, and the inverse problem for the initial temperature.
//!
//! With a uniform initial temperature `T0` and a fixed wall temperature `Tb`
//! the field is `T = Tb + (T0 - Tb) φ`, where `φ` is the unit response
//! (initial value 1, boundary value 0). The inverse solve divides the target
//! deviation by the unit response at arrival.

pub mod bessel;
mod fd;
mod series;

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use fd::{solve_fd, stable_time_step, unit_response_fd, unit_response_fd_at};
pub use series::{unit_response_series, unit_response_series_average};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VialGeometry {
    /// Metres.
    pub radius: f64,
    /// Metres.
    pub height: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialProps {
    /// W/(m·°C).
    pub conductivity: f64,
    /// kg/m³.
    pub density: f64,
    /// J/(kg·°C).
    pub heat_capacity: f64,
}

/// `α = k / (ρ c)` in m²/s.
pub fn thermal_diffusivity(m: &MaterialProps) -> f64 {
    m.conductivity / (m.density * m.heat_capacity)
}

/// Treatment of the flat ends `z = 0` and `z = h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CapCondition {
    /// Ends held at the boundary temperature.
    Dirichlet,
    /// No flux through the ends; only the lateral wall exchanges heat.
    Insulated,
}

impl CapCondition {
    pub const ALL: [CapCondition; 2] = [CapCondition::Dirichlet, CapCondition::Insulated];
}

impl fmt::Display for CapCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CapCondition::Dirichlet => "dirichlet",
            CapCondition::Insulated => "insulated",
        })
    }
}

/// How the arrival-time field is reduced to the single temperature that
/// must meet the target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    /// Axis point at mid-height.
    Center,
    /// Volume average over the vial.
    VolumeAverage,
    /// Point at radius `r` and height `z`, metres.
    Probe { r: f64, z: f64 },
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Criterion::Center => f.write_str("center"),
            Criterion::VolumeAverage => f.write_str("volume-average"),
            Criterion::Probe { r, z } => write!(f, "probe(r={r},z={z})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FdGrid {
    pub radial_nodes: usize,
    pub axial_nodes: usize,
    /// Explicit step count; `None` picks the smallest stable count.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_steps: Option<usize>,
}

impl Default for FdGrid {
    fn default() -> Self {
        Self {
            radial_nodes: 101,
            axial_nodes: 101,
            time_steps: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransportScenario {
    pub geometry: VialGeometry,
    pub material: MaterialProps,
    /// Uses this diffusivity (m²/s) directly instead of `k / (ρ c)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_override: Option<f64>,
    /// Seconds.
    pub arrival_time: f64,
    /// °C.
    pub boundary_temperature: f64,
    /// °C.
    pub target_temperature: f64,
    pub cap: CapCondition,
    pub criterion: Criterion,
    pub grid: FdGrid,
}

impl TransportScenario {
    /// 3 cm × 4 cm glass vial, two hours in a 0 °C box, −70 °C on arrival.
    pub fn vaccine_vial() -> Self {
        Self {
            geometry: VialGeometry {
                radius: 0.03,
                height: 0.04,
            },
            material: MaterialProps {
                conductivity: 0.0137,
                density: 2600.0,
                heat_capacity: 750.0,
            },
            alpha_override: None,
            arrival_time: 7200.0,
            boundary_temperature: 0.0,
            target_temperature: -70.0,
            cap: CapCondition::Insulated,
            criterion: Criterion::VolumeAverage,
            grid: FdGrid::default(),
        }
    }

    pub fn diffusivity(&self) -> f64 {
        self.alpha_override
            .unwrap_or_else(|| thermal_diffusivity(&self.material))
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.geometry;
        if !(g.radius > 0.0 && g.height > 0.0 && g.radius.is_finite() && g.height.is_finite()) {
            return Err(Error::Scenario(format!(
                "vial radius and height must be positive, got r = {}, h = {}",
                g.radius, g.height
            )));
        }
        let m = &self.material;
        if !(m.conductivity > 0.0 && m.density > 0.0 && m.heat_capacity > 0.0) {
            return Err(Error::Scenario("material constants must be positive".into()));
        }
        let alpha = self.diffusivity();
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Scenario(format!("diffusivity must be positive, got {alpha}")));
        }
        if !(self.arrival_time > 0.0 && self.arrival_time.is_finite()) {
            return Err(Error::Scenario(format!(
                "arrival time must be positive, got {}",
                self.arrival_time
            )));
        }
        if self.grid.radial_nodes < 3 || self.grid.axial_nodes < 3 {
            return Err(Error::Scenario("FD grid needs at least 3 nodes per axis".into()));
        }
        if let Criterion::Probe { r, z } = self.criterion {
            if !(0.0..=g.radius).contains(&r) || !(0.0..=g.height).contains(&z) {
                return Err(Error::Scenario(format!(
                    "probe ({r}, {z}) lies outside the vial"
                )));
            }
        }
        if !(self.boundary_temperature.is_finite() && self.target_temperature.is_finite()) {
            return Err(Error::Scenario("temperatures must be finite".into()));
        }
        Ok(())
    }
}

/// Field on the axisymmetric grid, row-major in `z` (index `j * nr + i`).
#[derive(Debug, Clone, PartialEq)]
pub struct TemperatureField {
    pub r: Vec<f64>,
    pub z: Vec<f64>,
    pub values: Vec<f64>,
    /// Seconds since departure.
    pub time: f64,
}

impl TemperatureField {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.r.len() + i]
    }

    fn locate(nodes: &[f64], x: f64) -> (usize, f64) {
        let n = nodes.len();
        let step = nodes[1] - nodes[0];
        let pos = ((x - nodes[0]) / step).clamp(0.0, (n - 1) as f64);
        let k = (pos.floor() as usize).min(n - 2);
        (k, pos - k as f64)
    }

    /// Bilinear interpolation at `(r, z)`.
    pub fn sample(&self, r: f64, z: f64) -> f64 {
        let (i, fr) = Self::locate(&self.r, r);
        let (j, fz) = Self::locate(&self.z, z);
        let a = self.at(i, j) * (1.0 - fr) + self.at(i + 1, j) * fr;
        let b = self.at(i, j + 1) * (1.0 - fr) + self.at(i + 1, j + 1) * fr;
        a * (1.0 - fz) + b * fz
    }

    /// `∫∫ T r dr dz / ∫∫ r dr dz` by the trapezoidal rule in both directions.
    pub fn volume_average(&self) -> f64 {
        let trap = |n: usize, k: usize| if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
        let (nr, nz) = (self.r.len(), self.z.len());
        let mut num = 0.0;
        let mut den = 0.0;
        for j in 0..nz {
            let wz = trap(nz, j);
            for i in 0..nr {
                let w = wz * trap(nr, i) * self.r[i];
                num += w * self.at(i, j);
                den += w;
            }
        }
        num / den
    }

    pub fn evaluate(&self, criterion: &Criterion) -> f64 {
        let mid = 0.5 * (self.z[0] + self.z[self.z.len() - 1]);
        match *criterion {
            Criterion::Center => self.sample(0.0, mid),
            Criterion::VolumeAverage => self.volume_average(),
            Criterion::Probe { r, z } => self.sample(r, z),
        }
    }

    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `Tb + (T0 - Tb) φ` for a unit-response field `φ`.
    pub fn to_temperature(&self, initial: f64, boundary: f64) -> Self {
        Self {
            values: self.values.iter().map(|phi| boundary + (initial - boundary) * phi).collect(),
            ..self.clone()
        }
    }
}

/// Unit responses below this are treated as "target unreachable".
pub const MIN_UNIT_RESPONSE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct InitialTemperature {
    /// Required departure temperature, °C.
    pub initial_temperature: f64,
    /// Criterion applied to the unit response at arrival.
    pub unit_response: f64,
    /// Criterion value of a forward solve started at `initial_temperature`, °C.
    pub forward_check: f64,
}

fn initial_from_response(s: &TransportScenario, phi: f64) -> Result<f64> {
    if !(phi > MIN_UNIT_RESPONSE) {
        return Err(Error::Scenario(format!(
            "unit response {phi:e} at arrival under {} criterion: the target cannot be held until t = {} s",
            s.criterion, s.arrival_time
        )));
    }
    Ok(s.boundary_temperature + (s.target_temperature - s.boundary_temperature) / phi)
}

/// Departure temperature meeting the target at arrival, by linearity of the
/// fixed-wall problem, verified with a forward solve.
pub fn required_initial_temperature(s: &TransportScenario) -> Result<InitialTemperature> {
    s.validate()?;
    // a vanishing analytic response settles reachability without marching
    if let Ok(phi) = series::criterion_response(s, s.arrival_time) {
        initial_from_response(s, phi)?;
    }
    let phi = unit_response_fd(s)?.evaluate(&s.criterion);
    let t0 = initial_from_response(s, phi)?;
    let forward = solve_fd(s, t0)?.evaluate(&s.criterion);
    if (forward - s.target_temperature).abs() > 0.1 {
        return Err(Error::Numerical(format!(
            "forward check missed the target: {forward:.4} °C vs {:.4} °C",
            s.target_temperature
        )));
    }
    Ok(InitialTemperature {
        initial_temperature: t0,
        unit_response: phi,
        forward_check: forward,
    })
}

/// Same inverse from the eigenseries instead of the FD grid.
pub fn required_initial_temperature_series(s: &TransportScenario) -> Result<InitialTemperature> {
    s.validate()?;
    let phi = series::criterion_response(s, s.arrival_time)?;
    let t0 = initial_from_response(s, phi)?;
    Ok(InitialTemperature {
        initial_temperature: t0,
        unit_response: phi,
        forward_check: s.boundary_temperature + (t0 - s.boundary_temperature) * phi,
    })
}

/// Bisection on full forward solves; cross-checks the linear inverse.
pub fn required_initial_temperature_bisection(
    s: &TransportScenario,
    bracket: (f64, f64),
    tolerance: f64,
) -> Result<f64> {
    s.validate()?;
    let miss = |t0: f64| -> Result<f64> { Ok(solve_fd(s, t0)?.evaluate(&s.criterion) - s.target_temperature) };
    let (mut lo, mut hi) = bracket;
    let (mut f_lo, f_hi) = (miss(lo)?, miss(hi)?);
    if f_lo * f_hi > 0.0 {
        return Err(Error::Scenario(format!(
            "bracket [{lo}, {hi}] does not contain the required initial temperature"
        )));
    }
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        let f_mid = miss(mid)?;
        if f_mid * f_lo <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Which diffusivity reading a table row used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaReading {
    /// `α = k / (ρ c)` with the stated 0.0137 as conductivity.
    Derived,
    /// The stated 0.0137 used as α itself, m²/s.
    Direct,
}

impl fmt::Display for AlphaReading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlphaReading::Derived => "k/(rho*c)",
            AlphaReading::Direct => "direct",
        })
    }
}

#[derive(Debug)]
pub struct TableRow {
    pub alpha: AlphaReading,
    pub alpha_value: f64,
    pub cap: CapCondition,
    pub criterion: Criterion,
    pub fd: Result<InitialTemperature>,
    pub series: Result<InitialTemperature>,
}

/// Initial temperature for every diffusivity reading × cap condition ×
/// criterion. Scenario errors (unreachable targets) are kept per row.
pub fn initial_temperature_table(base: &TransportScenario, criteria: &[Criterion]) -> Vec<TableRow> {
    let mut cases = Vec::new();
    for alpha in [AlphaReading::Derived, AlphaReading::Direct] {
        let alpha_override = match alpha {
            AlphaReading::Derived => base.alpha_override,
            AlphaReading::Direct => Some(base.material.conductivity),
        };
        for cap in CapCondition::ALL {
            for criterion in criteria {
                let s = TransportScenario {
                    alpha_override,
                    cap,
                    criterion: *criterion,
                    ..*base
                };
                cases.push((alpha, s));
            }
        }
    }
    cases
        .into_par_iter()
        .map(|(alpha, s)| TableRow {
            alpha,
            alpha_value: s.diffusivity(),
            cap: s.cap,
            criterion: s.criterion,
            fd: required_initial_temperature(&s),
            series: required_initial_temperature_series(&s),
        })
        .collect()
}

/// Rows whose FD initial temperatures lie nearest below and above
/// `reference` (°C), if both sides are populated.
pub fn bracketing_rows(rows: &[TableRow], reference: f64) -> Option<(&TableRow, &TableRow)> {
    let value = |r: &TableRow| r.fd.as_ref().ok().map(|v| v.initial_temperature);
    let below = rows
        .iter()
        .filter(|r| value(r).is_some_and(|v| v <= reference))
        .max_by(|a, b| value(a).unwrap().total_cmp(&value(b).unwrap()));
    let above = rows
        .iter()
        .filter(|r| value(r).is_some_and(|v| v >= reference))
        .min_by(|a, b| value(a).unwrap().total_cmp(&value(b).unwrap()));
    below.zip(above)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coarse() -> TransportScenario {
        TransportScenario {
            grid: FdGrid {
                radial_nodes: 21,
                axial_nodes: 21,
                time_steps: None,
            },
            ..TransportScenario::vaccine_vial()
        }
    }

    #[test]
    fn diffusivity_of_material() {
        let unit = MaterialProps {
            conductivity: 1.0,
            density: 1.0,
            heat_capacity: 1.0,
        };
        assert_eq!(thermal_diffusivity(&unit), 1.0);
        let a = thermal_diffusivity(&MaterialProps { conductivity: 2.0, ..unit });
        let b = thermal_diffusivity(&MaterialProps { density: 2.0, ..unit });
        assert_eq!(a, 2.0);
        assert_eq!(b, 0.5);
        let vial = TransportScenario::vaccine_vial();
        assert!((vial.diffusivity() - 7.0256e-9).abs() < 1e-13);
    }

    #[test]
    fn inverse_by_linear_division() {
        let s = TransportScenario::vaccine_vial();
        assert_eq!(initial_from_response(&s, 1.0).unwrap(), -70.0);
        assert_eq!(initial_from_response(&s, 0.5).unwrap(), -140.0);
        assert!(initial_from_response(&s, 1e-7).is_err());
        let warm = TransportScenario { boundary_temperature: 5.0, ..s };
        assert_eq!(initial_from_response(&warm, 0.5).unwrap(), 5.0 - 150.0);
    }

    #[test]
    fn inverse_is_monotone_in_target() {
        let mut prev = f64::NEG_INFINITY;
        for target in [-120.0, -90.0, -70.0, -40.0, -10.0] {
            let s = TransportScenario { target_temperature: target, ..coarse() };
            let t0 = required_initial_temperature(&s).unwrap().initial_temperature;
            assert!(t0 > prev);
            prev = t0;
        }
    }

    #[test]
    fn forward_check_and_bisection_agree() {
        let s = TransportScenario { criterion: Criterion::Center, ..coarse() };
        let inv = required_initial_temperature(&s).unwrap();
        assert!((inv.forward_check - s.target_temperature).abs() < 1e-9);
        let bis = required_initial_temperature_bisection(&s, (-300.0, -70.0), 1e-6).unwrap();
        assert!((bis - inv.initial_temperature).abs() < 1e-5, "{bis} vs {}", inv.initial_temperature);
    }

    #[test]
    fn unreachable_target_is_a_scenario_error() {
        let s = TransportScenario {
            alpha_override: Some(0.0137),
            ..coarse()
        };
        match required_initial_temperature(&s) {
            Err(Error::Scenario(msg)) => assert!(msg.contains("cannot be held"), "{msg}"),
            other => panic!("expected scenario error, got {other:?}"),
        }
    }

    #[test]
    fn validation() {
        let bad = TransportScenario {
            geometry: VialGeometry { radius: 0.0, height: 0.04 },
            ..coarse()
        };
        assert!(bad.validate().is_err());
        let bad = TransportScenario {
            grid: FdGrid { radial_nodes: 2, axial_nodes: 21, time_steps: None },
            ..coarse()
        };
        assert!(bad.validate().is_err());
        let bad = TransportScenario {
            criterion: Criterion::Probe { r: 0.05, z: 0.01 },
            ..coarse()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn bracketing_picks_neighbours() {
        let rows = initial_temperature_table(
            &coarse(),
            &[Criterion::Center, Criterion::VolumeAverage, Criterion::Probe { r: 0.015, z: 0.02 }],
        );
        assert_eq!(rows.len(), 12);
        let (lo, hi) = bracketing_rows(&rows, -94.5).expect("entries on both sides");
        let lo_v = lo.fd.as_ref().unwrap().initial_temperature;
        let hi_v = hi.fd.as_ref().unwrap().initial_temperature;
        assert!(lo_v <= -94.5 && -94.5 <= hi_v);
        // direct reading of 0.0137 as α drains the vial long before arrival
        assert!(rows.iter().filter(|r| r.alpha == AlphaReading::Direct).all(|r| r.fd.is_err()));
    }
}

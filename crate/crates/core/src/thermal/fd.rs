//! Explicit FTCS scheme for the axisymmetric heat equation.

use super::{CapCondition, TemperatureField, TransportScenario};
use crate::{Error, Result};

const MAX_TIME_STEPS: usize = 20_000_000;

/// Largest explicit step keeping every nodal weight nonnegative, including
/// the axis node whose radial stencil is `4 (φ1 - φ0) / Δr²`, with a 0.9 margin.
pub fn stable_time_step(s: &TransportScenario) -> f64 {
    let (dr, dz) = spacing(s);
    0.9 / (s.diffusivity() * (4.0 / (dr * dr) + 2.0 / (dz * dz)))
}

fn spacing(s: &TransportScenario) -> (f64, f64) {
    (
        s.geometry.radius / (s.grid.radial_nodes - 1) as f64,
        s.geometry.height / (s.grid.axial_nodes - 1) as f64,
    )
}

fn time_steps(s: &TransportScenario) -> Result<(usize, f64)> {
    let dt_max = stable_time_step(s);
    let steps = match s.grid.time_steps {
        Some(n) if n > 0 => n,
        Some(_) => return Err(Error::Scenario("time_steps must be positive".into())),
        None => (s.arrival_time / dt_max).ceil().max(1.0) as usize,
    };
    if steps > MAX_TIME_STEPS {
        return Err(Error::Scenario(format!(
            "explicit scheme would need {steps} time steps (limit {MAX_TIME_STEPS}); coarsen the grid"
        )));
    }
    let dt = s.arrival_time / steps as f64;
    if dt > dt_max * (1.0 + 1e-12) {
        return Err(Error::Scenario(format!(
            "time step {dt:.6e} s exceeds the stability limit {dt_max:.6e} s; use at least {} steps",
            (s.arrival_time / dt_max).ceil() as usize
        )));
    }
    Ok((steps, dt))
}

struct Marcher {
    nr: usize,
    nz: usize,
    ar: f64,
    az: f64,
    cap: CapCondition,
    cur: Vec<f64>,
    next: Vec<f64>,
}

impl Marcher {
    fn new(s: &TransportScenario, dt: f64, initial: f64) -> Self {
        let (nr, nz) = (s.grid.radial_nodes, s.grid.axial_nodes);
        let (dr, dz) = spacing(s);
        let alpha = s.diffusivity();
        let mut m = Self {
            nr,
            nz,
            ar: alpha * dt / (dr * dr),
            az: alpha * dt / (dz * dz),
            cap: s.cap,
            cur: vec![initial; nr * nz],
            next: vec![0.0; nr * nz],
        };
        for j in 0..nz {
            for i in 0..nr {
                if m.pinned(i, j) {
                    m.cur[j * nr + i] = 0.0;
                }
            }
        }
        m
    }

    fn pinned(&self, i: usize, j: usize) -> bool {
        i == self.nr - 1 || (self.cap == CapCondition::Dirichlet && (j == 0 || j == self.nz - 1))
    }

    fn step(&mut self) {
        let (nr, nz) = (self.nr, self.nz);
        let u = &self.cur;
        for j in 0..nz {
            for i in 0..nr {
                let k = j * nr + i;
                if self.pinned(i, j) {
                    self.next[k] = 0.0;
                    continue;
                }
                let c = u[k];
                let radial = if i == 0 {
                    4.0 * (u[k + 1] - c)
                } else {
                    let bias = 0.5 / i as f64;
                    (1.0 + bias) * u[k + 1] - 2.0 * c + (1.0 - bias) * u[k - 1]
                };
                let axial = if j == 0 {
                    2.0 * (u[k + nr] - c)
                } else if j == nz - 1 {
                    2.0 * (u[k - nr] - c)
                } else {
                    u[k + nr] - 2.0 * c + u[k - nr]
                };
                self.next[k] = c + self.ar * radial + self.az * axial;
            }
        }
        std::mem::swap(&mut self.cur, &mut self.next);
    }

    fn field(&self, s: &TransportScenario, time: f64, offset: f64) -> TemperatureField {
        let (dr, dz) = spacing(s);
        TemperatureField {
            r: (0..self.nr).map(|i| i as f64 * dr).collect(),
            z: (0..self.nz).map(|j| j as f64 * dz).collect(),
            values: self.cur.iter().map(|v| v + offset).collect(),
            time,
        }
    }
}

/// Temperature field at arrival for a uniform departure temperature (°C).
pub fn solve_fd(s: &TransportScenario, initial_temperature: f64) -> Result<TemperatureField> {
    s.validate()?;
    let (steps, dt) = time_steps(s)?;
    let tb = s.boundary_temperature;
    let mut m = Marcher::new(s, dt, initial_temperature - tb);
    for _ in 0..steps {
        m.step();
    }
    Ok(m.field(s, s.arrival_time, tb))
}

/// Dimensionless unit response `φ` at arrival (initial 1, boundary 0).
pub fn unit_response_fd(s: &TransportScenario) -> Result<TemperatureField> {
    unit_response_fd_at(s, &[s.arrival_time]).map(|mut v| v.remove(0))
}

/// Unit-response snapshots at the time nodes nearest to each requested time
/// in `[0, arrival_time]`, returned in ascending time order.
pub fn unit_response_fd_at(s: &TransportScenario, times: &[f64]) -> Result<Vec<TemperatureField>> {
    s.validate()?;
    let (steps, dt) = time_steps(s)?;
    let mut marks: Vec<usize> = times
        .iter()
        .map(|t| ((t / dt).round().max(0.0) as usize).min(steps))
        .collect();
    marks.sort_unstable();
    let mut m = Marcher::new(s, dt, 1.0);
    let mut out = Vec::with_capacity(marks.len());
    let mut done = 0;
    for n in 0..=steps {
        while marks.get(out.len()) == Some(&n) {
            out.push(m.field(s, n as f64 * dt, 0.0));
        }
        if out.len() == marks.len() {
            break;
        }
        if n < steps {
            m.step();
            done = n + 1;
        }
    }
    debug_assert!(done <= steps);
    Ok(out)
}

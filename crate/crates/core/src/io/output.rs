//! Result files: daily time series, field snapshots and the run report.

use std::fmt::{self, Write as _};
use std::fs;
use std::path::Path;

use chrono::{Duration, NaiveDate};

use crate::epi::CompartmentState;
use crate::ocp::ControlSignal;
use crate::ode::Trajectory;
use crate::thermal::TemperatureField;
use crate::{Error, Result};

const COMPARTMENT_COLUMNS: [&str; 8] = [
    "S [persons]",
    "E [persons]",
    "I [persons]",
    "Q [persons]",
    "R [persons]",
    "D [persons]",
    "P [persons]",
    "W [persons]",
];

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Calendar date of grid time `t` (days), day 0 being `start`.
pub fn date_at(start: NaiveDate, t: f64) -> NaiveDate {
    start + Duration::days(t.round() as i64)
}

/// Daily rows of the trajectory (and control, when given) as CSV text.
pub fn timeseries_csv(traj: &Trajectory<8>, control: Option<&ControlSignal>, start: NaiveDate) -> Result<String> {
    if let Some(u) = control {
        if u.grid != traj.grid {
            return Err(Error::GridMismatch("control and state grids differ".into()));
        }
    }
    let mut out = String::from("date,day,");
    out.push_str(&COMPARTMENT_COLUMNS.join(","));
    if control.is_some() {
        out.push_str(",u [1/day]");
    }
    out.push('\n');
    for day in 0..=traj.grid.whole_days() {
        let node = traj.grid.day_node(day);
        write!(out, "{},{day}", start + Duration::days(day as i64)).unwrap();
        for v in &traj.values[node] {
            write!(out, ",{v:.3}").unwrap();
        }
        if let Some(u) = control {
            write!(out, ",{:.6}", u.values[node]).unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

/// Writes [`timeseries_csv`] to `path`.
pub fn write_timeseries(
    traj: &Trajectory<8>,
    control: Option<&ControlSignal>,
    start: NaiveDate,
    path: &Path,
) -> Result<()> {
    write_file(path, &timeseries_csv(traj, control, start)?)
}

/// `(r, z, T)` rows of a temperature field.
pub fn write_field(field: &TemperatureField, path: &Path) -> Result<()> {
    let mut out = format!("# t = {} s\nr [m],z [m],T [degC]\n", field.time);
    for (j, z) in field.z.iter().enumerate() {
        for (i, r) in field.r.iter().enumerate() {
            writeln!(out, "{r:.6},{z:.6},{:.6}", field.at(i, j)).unwrap();
        }
    }
    write_file(path, &out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub value: f64,
    /// Days since the window start.
    pub time: f64,
    pub date: NaiveDate,
}

impl fmt::Display for Peak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.0} persons on {} (t = {:.1} d)", self.value, self.date, self.time)
    }
}

/// Headline metrics of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Headline {
    pub infected_peak: Peak,
    pub quarantined_peak: Peak,
    pub terminal: CompartmentState,
    /// `W(t_f)`, persons vaccinated over the window.
    pub doses: f64,
    /// First time S drops below 1% of S0, linearly interpolated.
    pub susceptible_below_one_percent: Option<(f64, NaiveDate)>,
}

fn peak(traj: &Trajectory<8>, c: usize, start: NaiveDate) -> Peak {
    let (k, value) = traj
        .values
        .iter()
        .map(|x| x[c])
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (k, v)| if v > best.1 { (k, v) } else { best });
    let time = traj.grid.time(k);
    Peak {
        value,
        time,
        date: date_at(start, time),
    }
}

/// First grid time at which component `c` falls below `level`.
pub fn first_below(traj: &Trajectory<8>, c: usize, level: f64) -> Option<f64> {
    let v = &traj.values;
    if v[0][c] < level {
        return Some(traj.grid.t0());
    }
    (1..v.len()).find(|&k| v[k][c] < level).map(|k| {
        let (a, b) = (v[k - 1][c], v[k][c]);
        let frac = (a - level) / (a - b);
        traj.grid.time(k - 1) + frac * traj.grid.step()
    })
}

pub fn headline(traj: &Trajectory<8>, start: NaiveDate) -> Headline {
    let s0 = traj.first()[0];
    Headline {
        infected_peak: peak(traj, 2, start),
        quarantined_peak: peak(traj, 3, start),
        terminal: CompartmentState::from_array(*traj.last()),
        doses: traj.last()[7],
        susceptible_below_one_percent: first_below(traj, 0, 0.01 * s0).map(|t| (t, date_at(start, t))),
    }
}

impl Headline {
    pub fn lines(&self) -> Vec<String> {
        let t = &self.terminal;
        let mut out = vec![
            format!("peak I: {}", self.infected_peak),
            format!("peak Q: {}", self.quarantined_peak),
            format!(
                "terminal (persons): S {:.0}, E {:.0}, I {:.0}, Q {:.0}, R {:.0}, D {:.0}, P {:.0}",
                t.s, t.e, t.i, t.q, t.r, t.d, t.p
            ),
            format!("W(t_f): {:.0} doses", self.doses),
        ];
        out.push(match self.susceptible_below_one_percent {
            Some((time, date)) => format!("S below 1% of S0: {date} (t = {time:.2} d)"),
            None => "S below 1% of S0: not reached".into(),
        });
        out
    }
}

/// Human-readable run summary, written as `report.txt`.
#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub title: String,
    pub sections: Vec<(String, Vec<String>)>,
    pub config_echo: String,
}

impl RunReport {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            ..Self::default()
        }
    }

    pub fn section(&mut self, heading: impl Into<String>, lines: Vec<String>) {
        self.sections.push((heading.into(), lines));
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_file(path, &self.to_string())
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for (heading, lines) in &self.sections {
            writeln!(f, "\n[{heading}]")?;
            for line in lines {
                writeln!(f, "{line}")?;
            }
        }
        if !self.config_echo.is_empty() {
            writeln!(f, "\n[resolved config]\n{}", self.config_echo.trim_end())?;
        }
        Ok(())
    }
}

//! National case feed ingestion.

use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::calibration::ObservedSeries;
use crate::{Error, Result};

/// Header names for the columns consumed from the feed. The defaults are
/// the Italian national feed's names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ColumnMap {
    pub date: String,
    /// Active positives, mapped to Q.
    pub quarantined: String,
    /// Cumulative recovered, mapped to R.
    pub recovered: String,
    /// Cumulative deceased, mapped to D.
    pub dead: String,
    /// Daily new positives; optional in the file.
    pub new_cases: String,
}

impl Default for ColumnMap {
    fn default() -> Self {
        Self {
            date: "data".into(),
            quarantined: "totale_positivi".into(),
            recovered: "dimessi_guariti".into(),
            dead: "deceduti".into(),
            new_cases: "nuovi_positivi".into(),
        }
    }
}

struct Row {
    line: usize,
    date: NaiveDate,
    q: f64,
    r: f64,
    d: f64,
    c: Option<f64>,
}

fn parse_date(raw: &str) -> Option<NaiveDate> {
    let raw = raw.trim();
    // timestamps such as 2020-11-01T17:00:00 keep only the calendar day
    let day = raw.get(..10).unwrap_or(raw);
    NaiveDate::parse_from_str(day, "%Y-%m-%d").ok()
}

/// Reads Q, R, D (and new cases when present) from a comma-separated file
/// with a header row. Rows are sorted by date and must cover consecutive
/// days without repeats.
pub fn load_observed_series(path: &Path, columns: &ColumnMap) -> Result<ObservedSeries> {
    let parse = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            other => parse(0, format!("{other:?}")),
        })?;
    let headers = reader.headers().map_err(|e| parse(1, e.to_string()))?.clone();
    let index = |name: &str| headers.iter().position(|h| h == name);
    let required = |name: &str| index(name).ok_or_else(|| parse(1, format!("missing column `{name}`")));
    let (ci_date, ci_q, ci_r, ci_d) = (
        required(&columns.date)?,
        required(&columns.quarantined)?,
        required(&columns.recovered)?,
        required(&columns.dead)?,
    );
    let ci_c = index(&columns.new_cases);

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let field = |ci: usize, name: &str| -> Result<f64> {
            let raw = record.get(ci).unwrap_or("");
            raw.parse::<f64>()
                .map_err(|_| parse(line, format!("column `{name}`: cannot read `{raw}` as a number")))
        };
        let raw_date = record.get(ci_date).unwrap_or("");
        let date = parse_date(raw_date)
            .ok_or_else(|| parse(line, format!("column `{}`: cannot read `{raw_date}` as a date", columns.date)))?;
        rows.push(Row {
            line,
            date,
            q: field(ci_q, &columns.quarantined)?,
            r: field(ci_r, &columns.recovered)?,
            d: field(ci_d, &columns.dead)?,
            c: ci_c.map(|ci| field(ci, &columns.new_cases)).transpose()?,
        });
    }
    if rows.is_empty() {
        return Err(parse(1, "no data rows".into()));
    }
    rows.sort_by_key(|r| r.date);

    for w in rows.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let gap = (b.date - a.date).num_days();
        if gap == 0 {
            return Err(parse(b.line, format!("duplicate date {} (also on line {})", b.date, a.line)));
        }
        if gap > 1 {
            return Err(parse(
                b.line,
                format!("gap in dates: {} follows {} ({} missing days)", b.date, a.date, gap - 1),
            ));
        }
        for (name, x, y) in [(&columns.recovered, a.r, b.r), (&columns.dead, a.d, b.d)] {
            if y < x {
                return Err(parse(
                    b.line,
                    format!("cumulative column `{name}` must be nondecreasing: {y} on {} after {x}", b.date),
                ));
            }
        }
    }
    for r in &rows {
        if [r.q, r.r, r.d].iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(parse(r.line, "counts must be finite and nonnegative".into()));
        }
    }

    let obs = ObservedSeries {
        start: rows[0].date,
        quarantined: rows.iter().map(|r| r.q).collect(),
        recovered: rows.iter().map(|r| r.r).collect(),
        dead: rows.iter().map(|r| r.d).collect(),
        new_cases: rows.iter().map(|r| r.c).collect(),
    };
    obs.validate()?;
    Ok(obs)
}

/// Observations restricted to `[start, end]`, inclusive.
pub fn restrict_to_window(obs: &ObservedSeries, start: NaiveDate, end: NaiveDate) -> Result<ObservedSeries> {
    let first = (start - obs.start).num_days();
    let last_day = obs.start + chrono::Duration::days(obs.len() as i64 - 1);
    if first < 0 || start > last_day {
        return Err(Error::InvalidArgument(format!(
            "data covers {} to {last_day} but the window starts on {start}",
            obs.start
        )));
    }
    let first = first as usize;
    let last = ((end.min(last_day) - obs.start).num_days() as usize).max(first);
    let slice = |v: &[f64]| v[first..=last].to_vec();
    Ok(ObservedSeries {
        start,
        quarantined: slice(&obs.quarantined),
        recovered: slice(&obs.recovered),
        dead: slice(&obs.dead),
        new_cases: obs.new_cases.as_deref().map(slice),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn date_truncation() {
        assert_eq!(parse_date("2020-11-01T17:00:00"), NaiveDate::from_ymd_opt(2020, 11, 1));
        assert_eq!(parse_date(" 2020-11-02 "), NaiveDate::from_ymd_opt(2020, 11, 2));
        assert_eq!(parse_date("11/02/2020"), None);
    }

    #[test]
    fn window_slicing() {
        let obs = ObservedSeries {
            start: NaiveDate::from_ymd_opt(2020, 11, 1).unwrap(),
            quarantined: vec![1.0, 2.0, 3.0, 4.0],
            recovered: vec![0.0; 4],
            dead: vec![0.0; 4],
            new_cases: None,
        };
        let d = |m, day| NaiveDate::from_ymd_opt(2020, m, day).unwrap();
        let w = restrict_to_window(&obs, d(11, 2), d(11, 3)).unwrap();
        assert_eq!(w.quarantined, vec![2.0, 3.0]);
        let w = restrict_to_window(&obs, d(11, 2), d(12, 30)).unwrap();
        assert_eq!(w.len(), 3);
        assert!(restrict_to_window(&obs, d(10, 30), d(11, 3)).is_err());
    }
}

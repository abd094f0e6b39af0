//! Parameter grids over channel families and their CSV rows.

use std::str::FromStr;

use qubit_channels::channel::{self, Channel};
use qubit_channels::degradability::{classify, Verdict};
use rayon::prelude::*;

use crate::error::CliError;

/// `min,max,steps` with `steps ≥ 2` and `min < max`. Bounds may be written
/// with `pi`, e.g. `0,pi/2,50` or `-pi,3*pi/4,10`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self, String> {
        if steps < 2 {
            return Err(format!("an axis needs at least 2 steps, got {steps}"));
        }
        if !(min.is_finite() && max.is_finite()) || min >= max {
            return Err(format!("axis bounds must satisfy min < max, got {min} and {max}"));
        }
        Ok(Self { min, max, steps })
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            return self.max;
        }
        self.min + (self.max - self.min) * i as f64 / (self.steps - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.steps).map(|i| self.value(i)).collect()
    }
}

/// Parses a real number, optionally as a multiple or fraction of `pi`.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let s = s.trim();
    if let Ok(x) = s.parse::<f64>() {
        return Ok(x);
    }
    let bad = || format!("cannot read \"{s}\" as a number");
    let lower = s.to_ascii_lowercase();
    let (num, den) = match lower.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim().parse::<f64>().map_err(|_| bad())?),
        None => (lower.as_str(), 1.0),
    };
    let coeff = num.strip_suffix("pi").ok_or_else(bad)?.trim_end_matches('*').trim();
    let coeff = match coeff {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(coeff * std::f64::consts::PI / den)
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').collect();
        let [min, max, steps] = parts[..] else {
            return Err(format!("expected min,max,steps, got \"{s}\""));
        };
        let steps = steps
            .trim()
            .parse::<usize>()
            .map_err(|_| format!("steps must be a whole number, got \"{steps}\""))?;
        Axis::new(parse_real(min)?, parse_real(max)?, steps)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Rank2 { alpha: Axis, beta: Axis },
    Depolarizing { p: Axis },
    /// `λ = s · direction`.
    Unital { direction: [f64; 3], s: Axis },
}

impl Family {
    pub fn parameter_names(&self) -> Vec<&'static str> {
        match self {
            Family::Rank2 { .. } => vec!["alpha", "beta"],
            Family::Depolarizing { .. } => vec!["p"],
            Family::Unital { .. } => vec!["s", "lambda1", "lambda2", "lambda3"],
        }
    }

    /// Grid points in row-major order over the axes, as parameter rows.
    pub fn points(&self) -> Vec<Vec<f64>> {
        match self {
            Family::Rank2 { alpha, beta } => alpha
                .values()
                .into_iter()
                .flat_map(|a| beta.values().into_iter().map(move |b| vec![a, b]))
                .collect(),
            Family::Depolarizing { p } => p.values().into_iter().map(|p| vec![p]).collect(),
            Family::Unital { direction, s } => s
                .values()
                .into_iter()
                .map(|s| {
                    let [a, b, c] = direction.map(|d| s * d);
                    vec![s, a, b, c]
                })
                .collect(),
        }
    }

    fn channel(&self, point: &[f64]) -> Result<Channel, CliError> {
        Ok(match self {
            Family::Rank2 { .. } => Channel::Kraus(channel::rank2(point[0], point[1])),
            Family::Depolarizing { .. } => Channel::Kraus(channel::depolarizing(point[0])?),
            Family::Unital { .. } => Channel::Bloch(channel::unital([point[1], point[2], point[3]])?),
        })
    }
}

pub const OUTPUT_COLUMNS: [&str; 6] =
    ["anti_margin", "deg_margin", "eb_margin", "anti_state", "deg_state", "eb_state"];

/// Chosen output columns, validated against [`OUTPUT_COLUMNS`].
pub fn select_columns(list: Option<&str>) -> Result<Vec<&'static str>, CliError> {
    let Some(list) = list else {
        return Ok(OUTPUT_COLUMNS.to_vec());
    };
    list.split(',')
        .map(|name| {
            let name = name.trim();
            OUTPUT_COLUMNS.iter().copied().find(|c| *c == name).ok_or_else(|| {
                CliError::Input(format!(
                    "unknown column \"{name}\" (choose from {})",
                    OUTPUT_COLUMNS.join(",")
                ))
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub params: Vec<f64>,
    pub anti: Verdict,
    pub deg: Verdict,
    pub eb: Verdict,
}

impl SweepRow {
    pub fn field(&self, column: &str) -> String {
        match column {
            "anti_margin" => self.anti.margin.to_string(),
            "deg_margin" => self.deg.margin.to_string(),
            "eb_margin" => self.eb.margin.to_string(),
            "anti_state" => self.anti.state.as_str().to_string(),
            "deg_state" => self.deg.state.as_str().to_string(),
            "eb_state" => self.eb.state.as_str().to_string(),
            other => unreachable!("column {other} is validated on input"),
        }
    }
}

/// Classifies every grid point. Points are evaluated in parallel, rows come
/// back in grid order.
pub fn run(family: &Family, tol: f64) -> Result<Vec<SweepRow>, CliError> {
    let points = family.points();
    // reject the whole grid before doing any work
    for p in &points {
        family.channel(p)?;
    }
    points
        .into_par_iter()
        .map(|params| {
            let report = classify(&family.channel(&params)?, tol)?;
            Ok(SweepRow {
                params,
                anti: report.antidegradable,
                deg: report.degradable,
                eb: report.entanglement_breaking,
            })
        })
        .collect()
}

pub fn write_csv<W: std::io::Write>(
    out: W,
    family: &Family,
    columns: &[&str],
    rows: &[SweepRow],
) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let mut header: Vec<&str> = family.parameter_names();
    header.extend_from_slice(columns);
    w.write_record(&header)?;
    for row in rows {
        let mut record: Vec<String> = row.params.iter().map(f64::to_string).collect();
        record.extend(columns.iter().map(|c| row.field(c)));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_json(family: &Family, columns: &[&str], rows: &[SweepRow]) -> serde_json::Value {
    let names = family.parameter_names();
    let rows = rows
        .iter()
        .map(|row| {
            let mut obj = serde_json::Map::new();
            for (name, v) in names.iter().zip(&row.params) {
                obj.insert(name.to_string(), (*v).into());
            }
            for c in columns {
                let value = match *c {
                    "anti_margin" => row.anti.margin.into(),
                    "deg_margin" => row.deg.margin.into(),
                    "eb_margin" => row.eb.margin.into(),
                    _ => row.field(c).into(),
                };
                obj.insert(c.to_string(), value);
            }
            serde_json::Value::Object(obj)
        })
        .collect();
    serde_json::Value::Array(rows)
}

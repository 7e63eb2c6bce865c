use std::io::Write;
use std::path::Path;

use serde_json::{Map, Value};

use super::config::Format;
use super::run::{ArgmaxRow, SweepRecord};
use crate::error::{Error, Result};

/// Placeholder for observables that are undefined or were not requested.
pub const UNDEF: &str = "undef";

/// Fixed leading columns of every table.
pub const COLUMNS: [&str; 13] = [
    "theta_rad",
    "lambda",
    "epsilon",
    "T_R",
    "T_Q",
    "alpha",
    "omega_c",
    "n_max_used",
    "converged",
    "J_over_alpha_omega0",
    "g2",
    "g2_approx",
    "wall_time_ms",
];

/// Appended when low-level populations are requested.
pub const LEVEL_COLUMNS: [&str; 10] = ["E0", "E1", "E2", "E3", "P0", "P1", "P2", "P3", "A1", "B2"];

/// Twelve significant digits, fixed notation for moderate exponents.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return UNDEF.into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Undef,
}

impl Cell {
    fn opt(x: Option<f64>) -> Self {
        match x {
            Some(v) if v.is_finite() => Cell::Num(v),
            _ => Cell::Undef,
        }
    }

    fn text(&self) -> String {
        match self {
            Cell::Num(x) => format_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Undef => UNDEF.into(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // parse the printed text back so both encodings carry the same value
            Cell::Num(x) => {
                let rounded: f64 = format_float(*x).parse().expect("printed float parses");
                serde_json::Number::from_f64(rounded).map_or(Value::String(UNDEF.into()), Value::Number)
            }
            Cell::Int(i) => Value::from(*i),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Undef => Value::String(UNDEF.into()),
        }
    }
}

fn cells(r: &SweepRecord, with_levels: bool) -> Vec<(&'static str, Cell)> {
    let mut row = vec![
        (COLUMNS[0], Cell::Num(r.theta)),
        (COLUMNS[1], Cell::Num(r.lambda)),
        (COLUMNS[2], Cell::Num(r.epsilon)),
        (COLUMNS[3], Cell::Num(r.t_r)),
        (COLUMNS[4], Cell::Num(r.t_q)),
        (COLUMNS[5], Cell::Num(r.alpha)),
        (COLUMNS[6], Cell::Num(r.omega_c)),
        (COLUMNS[7], Cell::Int(r.n_max_used as u64)),
        (COLUMNS[8], Cell::Bool(r.converged)),
        (COLUMNS[9], Cell::opt(r.current)),
        (COLUMNS[10], Cell::opt(r.g2)),
        (COLUMNS[11], Cell::opt(r.g2_approx)),
        (COLUMNS[12], Cell::Int(r.wall_time_ms)),
    ];
    if with_levels {
        let values: Vec<Option<f64>> = match &r.low_levels {
            Some(l) => l
                .energies
                .iter()
                .chain(l.populations.iter())
                .chain([l.a1, l.b2].iter())
                .map(|&v| Some(v))
                .collect(),
            None => vec![None; LEVEL_COLUMNS.len()],
        };
        row.extend(LEVEL_COLUMNS.iter().zip(values).map(|(name, v)| (*name, Cell::opt(v))));
    }
    row
}

fn has_levels(records: &[SweepRecord]) -> bool {
    records.iter().any(|r| r.low_levels.is_some())
}

fn csv_error(e: csv::Error) -> Error {
    Error::Numerical(format!("csv encoding failed: {e}"))
}

/// Encode records as CSV text.
pub fn to_csv(records: &[SweepRecord]) -> Result<String> {
    let with_levels = has_levels(records);
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = COLUMNS.to_vec();
    if with_levels {
        header.extend(LEVEL_COLUMNS);
    }
    w.write_record(&header).map_err(csv_error)?;
    for r in records {
        w.write_record(cells(r, with_levels).iter().map(|(_, c)| c.text()))
            .map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Numerical(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Encode records as a JSON array of flat objects with the CSV field names.
pub fn to_json(records: &[SweepRecord]) -> String {
    let with_levels = has_levels(records);
    let rows: Vec<Value> = records
        .iter()
        .map(|r| {
            let map: Map<String, Value> = cells(r, with_levels)
                .into_iter()
                .map(|(k, c)| (k.to_string(), c.json()))
                .collect();
            Value::Object(map)
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&Value::Array(rows)).expect("json encodes");
    text.push('\n');
    text
}

pub fn encode(records: &[SweepRecord], format: Format) -> Result<String> {
    match format {
        Format::Csv => to_csv(records),
        Format::Json => Ok(to_json(records)),
    }
}

/// Table of the θ maximizing the current for each remaining input combination.
pub fn argmax_csv(rows: &[ArgmaxRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["lambda", "T_R", "T_Q", "theta_argmax_rad", "J_max_over_alpha_omega0"])
        .map_err(csv_error)?;
    for r in rows {
        w.write_record([r.lambda, r.t_r, r.t_q, r.theta, r.current].map(format_float))
            .map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Numerical(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut file = std::fs::File::create(path).map_err(io)?;
    file.write_all(text.as_bytes()).map_err(io)?;
    file.sync_all().map_err(io)
}

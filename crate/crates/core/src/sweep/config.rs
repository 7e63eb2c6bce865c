//! TOML sweep configuration.
//!
//! ```toml
//! [model]
//! epsilon = 1.5
//! n_max = 30          # or "auto"
//! converge_tol = 1e-3 # used when n_max = "auto"
//!
//! [bath]
//! alpha = 0.001
//! omega_c = 10.0
//!
//! [grid]
//! theta = { min = 0, max = "0.5pi", count = 60 }
//! lambda = 0.01
//! dT = { min = 0, max = 1.9, count = 60 }
//! T_mean = 1.0
//!
//! [output]
//! observables = ["current", "g2", "g2_approx"]
//! format = "csv"
//! ```
//!
//! Every number may be written as a string with a `pi` suffix (`"0.25pi"`,
//! `"pi"`). Temperatures follow T_R = T_mean + dT/2 and T_Q = T_mean − dT/2.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::{DEFAULT_N_MAX, MIN_N_MAX};

/// A number that may carry a `pi` suffix in the config file.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(into = "f64")]
pub struct Number(pub f64);

impl From<Number> for f64 {
    fn from(n: Number) -> f64 {
        n.0
    }
}

impl FromStr for Number {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::Config(format!("cannot parse `{s}` as a number"));
        if let Some(head) = t.strip_suffix("pi") {
            let head = head.trim().trim_end_matches('*').trim();
            let factor = if head.is_empty() {
                1.0
            } else {
                head.parse::<f64>().map_err(|_| bad())?
            };
            return Ok(Number(factor * std::f64::consts::PI));
        }
        t.parse::<f64>().map(Number).map_err(|_| bad())
    }
}

impl<'de> Deserialize<'de> for Number {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Float(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(i) => Ok(Number(i as f64)),
            Raw::Float(x) => Ok(Number(x)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// One grid axis: a fixed value or an inclusive linspace.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    Fixed(Number),
    Linspace {
        min: Number,
        max: Number,
        count: usize,
    },
}

impl Axis {
    pub fn fixed(value: f64) -> Self {
        Axis::Fixed(Number(value))
    }

    pub fn linspace(min: f64, max: f64, count: usize) -> Self {
        Axis::Linspace {
            min: Number(min),
            max: Number(max),
            count,
        }
    }

    pub fn is_grid(&self) -> bool {
        matches!(self, Axis::Linspace { .. })
    }

    pub fn values(&self) -> Vec<f64> {
        match *self {
            Axis::Fixed(v) => vec![v.0],
            Axis::Linspace { min, max, count } => {
                let step = (max.0 - min.0) / (count - 1) as f64;
                (0..count)
                    .map(|i| if i + 1 == count { max.0 } else { min.0 + step * i as f64 })
                    .collect()
            }
        }
    }

    fn extremes(&self) -> (f64, f64) {
        let v = self.values();
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }
}

/// Fock cutoff: fixed or chosen per point by the convergence scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cutoff {
    Fixed(usize),
    Auto,
}

impl Serialize for Cutoff {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cutoff::Fixed(n) => s.serialize_u64(*n as u64),
            Cutoff::Auto => s.serialize_str("auto"),
        }
    }
}

impl<'de> Deserialize<'de> for Cutoff {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) if n >= 0 => Ok(Cutoff::Fixed(n as usize)),
            Raw::Text(s) if s == "auto" => Ok(Cutoff::Auto),
            _ => Err(serde::de::Error::custom("n_max must be a non-negative integer or \"auto\"")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelSection {
    pub epsilon: Number,
    pub n_max: Cutoff,
    pub converge_tol: f64,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self {
            epsilon: Number(1.5),
            n_max: Cutoff::Fixed(DEFAULT_N_MAX),
            converge_tol: 1e-3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BathSection {
    pub alpha: Number,
    pub omega_c: Number,
}

impl Default for BathSection {
    fn default() -> Self {
        Self {
            alpha: Number(1e-3),
            omega_c: Number(10.0),
        }
    }
}

/// Axes in canonical order; grid points vary fastest along the last grid axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub theta: Axis,
    pub lambda: Axis,
    #[serde(rename = "dT")]
    pub d_t: Axis,
    #[serde(rename = "T_mean")]
    pub t_mean: Axis,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            theta: Axis::fixed(0.0),
            lambda: Axis::fixed(0.01),
            d_t: Axis::fixed(1.0),
            t_mean: Axis::fixed(1.0),
        }
    }
}

impl GridSection {
    pub fn axes(&self) -> [(&'static str, &Axis); 4] {
        [
            ("theta", &self.theta),
            ("lambda", &self.lambda),
            ("dT", &self.d_t),
            ("T_mean", &self.t_mean),
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    Current,
    G2,
    G2Approx,
    Populations,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!("unknown format `{other}` (csv or json)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub observables: Vec<Observable>,
    pub path: Option<PathBuf>,
    pub format: Format,
    /// Also report, for every other parameter combination, the θ with the largest current.
    pub argmax_theta: bool,
    /// Store measured wall time per point; off keeps output reproducible.
    pub record_timing: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            observables: vec![Observable::Current, Observable::G2, Observable::G2Approx],
            path: None,
            format: Format::Csv,
            argmax_theta: false,
            record_timing: false,
        }
    }
}

impl OutputSection {
    pub fn wants(&self, o: Observable) -> bool {
        self.observables.contains(&o)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub model: ModelSection,
    pub bath: BathSection,
    pub grid: GridSection,
    pub output: OutputSection,
}

impl SweepConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let grids: Vec<&str> = self
            .grid
            .axes()
            .iter()
            .filter(|(_, a)| a.is_grid())
            .map(|(name, _)| *name)
            .collect();
        if grids.len() > 2 {
            return Err(Error::Config(format!(
                "at most two grid axes are allowed, found {}: {}",
                grids.len(),
                grids.join(", ")
            )));
        }
        for (name, axis) in self.grid.axes() {
            if let Axis::Linspace { min, max, count } = axis {
                if *count < 2 {
                    return Err(Error::Config(format!("grid axis `{name}` needs count >= 2, got {count}")));
                }
                if !(min.0.is_finite() && max.0.is_finite()) {
                    return Err(Error::Config(format!("grid axis `{name}` has a non-finite bound")));
                }
            }
        }
        let (dt_lo, dt_hi) = self.grid.d_t.extremes();
        let (tm_lo, tm_hi) = self.grid.t_mean.extremes();
        for dt in [dt_lo, dt_hi] {
            for tm in [tm_lo, tm_hi] {
                if tm - dt / 2.0 < 0.0 || tm + dt / 2.0 < 0.0 {
                    return Err(Error::Config(format!(
                        "negative bath temperature at grid corner dT = {dt}, T_mean = {tm} \
                         (T_R = {}, T_Q = {})",
                        tm + dt / 2.0,
                        tm - dt / 2.0
                    )));
                }
            }
        }
        let (th_lo, th_hi) = self.grid.theta.extremes();
        if th_lo < 0.0 || th_hi > std::f64::consts::FRAC_PI_2 {
            return Err(Error::Config(format!("theta must lie in [0, pi/2], got [{th_lo}, {th_hi}]")));
        }
        if self.grid.lambda.extremes().0 < 0.0 {
            return Err(Error::Config("lambda must be >= 0".into()));
        }
        if let Cutoff::Fixed(n) = self.model.n_max {
            if n < MIN_N_MAX {
                return Err(Error::Config(format!("n_max = {n} is below the minimum {MIN_N_MAX}")));
            }
        }
        if !(self.model.converge_tol > 0.0) {
            return Err(Error::Config("converge_tol must be > 0".into()));
        }
        if !(self.bath.alpha.0 > 0.0 && self.bath.omega_c.0 > 0.0) {
            return Err(Error::Config("alpha and omega_c must be > 0".into()));
        }
        if !(self.model.epsilon.0 > 0.0) {
            return Err(Error::Config("epsilon must be > 0".into()));
        }
        Ok(())
    }

    /// Number of grid points.
    pub fn point_count(&self) -> usize {
        self.grid.axes().iter().map(|(_, a)| a.values().len()).product()
    }
}

pub fn load_config(path: &Path) -> Result<SweepConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    SweepConfig::from_toml_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn minimal_config_is_single_point() {
        let c = SweepConfig::from_toml_str("").unwrap();
        assert_eq!(c.point_count(), 1);
        assert_eq!(c.model.epsilon.0, 1.5);
        assert_eq!(c.output.format, Format::Csv);
    }

    #[test]
    fn pi_suffix() {
        assert_eq!("0.25pi".parse::<Number>().unwrap().0, 0.25 * PI);
        assert_eq!("pi".parse::<Number>().unwrap().0, PI);
        assert_eq!(" 2 pi ".parse::<Number>().unwrap().0, 2.0 * PI);
        assert_eq!("1.5".parse::<Number>().unwrap().0, 1.5);
        assert!("tau".parse::<Number>().is_err());
        let c = SweepConfig::from_toml_str("[grid]\ntheta = \"0.5pi\"\nlambda = { min = 0.1, max = 1, count = 4 }\n").unwrap();
        assert_eq!(c.grid.theta.values(), vec![PI / 2.0]);
        assert_eq!(c.grid.lambda.values().len(), 4);
        assert_eq!(c.grid.lambda.values()[3], 1.0);
    }

    #[test]
    fn unknown_keys_named() {
        let err = SweepConfig::from_toml_str("[model]\nepsilon = 1.5\nbogus = 3\n").unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
        let err = SweepConfig::from_toml_str("[nonsense]\n").unwrap_err();
        assert!(err.to_string().contains("nonsense"), "{err}");
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn three_grid_axes_rejected() {
        let text = "[grid]\ntheta = { min = 0, max = 1, count = 3 }\nlambda = { min = 0.1, max = 1, count = 3 }\ndT = { min = 0, max = 1, count = 3 }\n";
        let err = SweepConfig::from_toml_str(text).unwrap_err();
        assert!(err.to_string().contains("at most two"), "{err}");
    }

    #[test]
    fn count_below_two_rejected() {
        let err = SweepConfig::from_toml_str("[grid]\ntheta = { min = 0, max = 1, count = 1 }\n").unwrap_err();
        assert!(err.to_string().contains("count >= 2"));
    }

    #[test]
    fn negative_temperature_corner_reported() {
        let text = "[grid]\ndT = { min = 0, max = 2.5, count = 5 }\nT_mean = 1.0\n";
        let err = SweepConfig::from_toml_str(text).unwrap_err();
        assert!(err.to_string().contains("dT = 2.5"), "{err}");
    }

    #[test]
    fn auto_cutoff() {
        let c = SweepConfig::from_toml_str("[model]\nn_max = \"auto\"\nconverge_tol = 1e-2\n").unwrap();
        assert_eq!(c.model.n_max, Cutoff::Auto);
        assert!(SweepConfig::from_toml_str("[model]\nn_max = \"many\"\n").is_err());
        assert!(SweepConfig::from_toml_str("[model]\nn_max = 2\n").is_err());
    }

    #[test]
    fn round_trip() {
        let mut c = SweepConfig::default();
        c.grid.theta = Axis::linspace(0.0, PI / 2.0, 5);
        c.model.n_max = Cutoff::Auto;
        let back = SweepConfig::from_toml_str(&c.to_toml_string()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn model_ranges_checked() {
        assert!(SweepConfig::from_toml_str("[grid]\nlambda = -0.1\n").is_err());
        assert!(SweepConfig::from_toml_str("[grid]\ntheta = { min = 0, max = \"0.6pi\", count = 3 }\n").is_err());
        assert!(SweepConfig::from_toml_str("[grid]\ntheta = { min = 0, max = \"0.5pi\", count = 3 }\n").is_ok());
    }
}

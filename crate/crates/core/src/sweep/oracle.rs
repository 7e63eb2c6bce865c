//! Plain-text evaluation of the analytic oracles.

use std::fmt::Write;
use std::str::FromStr;

use super::output::format_float;
use crate::error::{Error, Result};
use crate::master::BathSpec;
use crate::oracles::{
    jx_weak, jz_weak, sigma_x_overlap_exact, sigma_x_overlap_second_order, zeroth_populations,
    CouplingLimit, WeakCouplingCurrent,
};
use crate::spectrum::ModelParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleKind {
    Jx,
    Jz,
    OverlapExact,
    Overlap2nd,
    Populations,
}

impl FromStr for OracleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jx" => Ok(OracleKind::Jx),
            "jz" => Ok(OracleKind::Jz),
            "overlap_exact" => Ok(OracleKind::OverlapExact),
            "overlap_2nd" => Ok(OracleKind::Overlap2nd),
            "populations" => Ok(OracleKind::Populations),
            other => Err(Error::Config(format!(
                "unknown oracle `{other}`; expected jx, jz, overlap_exact, overlap_2nd or populations"
            ))),
        }
    }
}

impl FromStr for CouplingLimit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theta0" => Ok(CouplingLimit::Theta0),
            "theta90" => Ok(CouplingLimit::Theta90),
            other => Err(Error::Config(format!("unknown limit `{other}` (theta0 or theta90)"))),
        }
    }
}

/// Named inputs; unset values fall back to the preset defaults where one exists.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OracleArgs {
    pub lambda: Option<f64>,
    pub epsilon: Option<f64>,
    pub d_t: Option<f64>,
    pub t_mean: Option<f64>,
    pub alpha: Option<f64>,
    pub omega_c: Option<f64>,
    pub n: Option<usize>,
    pub n_prime: Option<usize>,
    pub g: Option<f64>,
    pub limit: Option<CouplingLimit>,
    pub n_max: Option<usize>,
}

fn required<T: Copy>(value: Option<T>, name: &'static str) -> Result<T> {
    value.ok_or_else(|| Error::invalid(name, "missing required argument"))
}

impl OracleArgs {
    fn baths(&self) -> Result<(BathSpec, BathSpec)> {
        let (dt, tm) = (self.d_t.unwrap_or(1.0), self.t_mean.unwrap_or(1.0));
        let (alpha, wc) = (self.alpha.unwrap_or(1e-3), self.omega_c.unwrap_or(10.0));
        Ok((
            BathSpec::resonator(alpha, wc, tm + dt / 2.0)?,
            BathSpec::qubit(alpha, wc, tm - dt / 2.0)?,
        ))
    }

    fn params(&self, theta: f64) -> Result<ModelParams> {
        ModelParams::new(
            self.epsilon.unwrap_or(1.5),
            required(self.lambda, "lambda")?,
            theta,
            self.n_max.unwrap_or(10),
        )
    }
}

fn current_table(j: &WeakCouplingCurrent) -> String {
    let mut s = String::from("name,value\n");
    for c in &j.components {
        let _ = writeln!(s, "{},{}", c.name, format_float(c.value));
    }
    let _ = writeln!(s, "prefactor,{}", format_float(j.prefactor));
    let _ = writeln!(s, "total,{}", format_float(j.total));
    let _ = writeln!(s, "J_over_alpha_omega0,{}", format_float(j.scaled()));
    for flag in &j.flags {
        let _ = writeln!(s, "# warning: {flag}");
    }
    s
}

/// Evaluate one oracle and render it as a small CSV table.
pub fn oracle_table(kind: OracleKind, args: &OracleArgs) -> Result<String> {
    match kind {
        OracleKind::Jx | OracleKind::Jz => {
            let (r, q) = args.baths()?;
            let j = if kind == OracleKind::Jx {
                jx_weak(&args.params(0.0)?, &r, &q)?
            } else {
                jz_weak(&args.params(std::f64::consts::FRAC_PI_2)?, &r, &q)?
            };
            Ok(current_table(&j))
        }
        OracleKind::OverlapExact | OracleKind::Overlap2nd => {
            let n = required(args.n, "n")?;
            let m = required(args.n_prime, "n_prime")?;
            let g = required(args.g, "g")?;
            let value = if kind == OracleKind::OverlapExact {
                sigma_x_overlap_exact(n, m, g)?
            } else {
                sigma_x_overlap_second_order(n, m, g)?
            };
            Ok(format!("n,n_prime,g,value\n{n},{m},{},{}\n", format_float(g), format_float(value)))
        }
        OracleKind::Populations => {
            let limit = required(args.limit, "limit")?;
            let theta = match limit {
                CouplingLimit::Theta0 => 0.0,
                CouplingLimit::Theta90 => std::f64::consts::FRAC_PI_2,
            };
            let (r, q) = args.baths()?;
            let z = zeroth_populations(&args.params(theta)?, &r, &q, limit)?;
            let mut s = String::from("n,qubit,photons,energy,population\n");
            for l in &z.levels {
                let qubit = match l.qubit {
                    crate::fock::Qubit::Up => "up",
                    crate::fock::Qubit::Down => "down",
                };
                let _ = writeln!(
                    s,
                    "{},{qubit},{},{},{}",
                    l.n,
                    l.photons,
                    format_float(l.energy),
                    format_float(l.population)
                );
            }
            if z.saturated {
                s.push_str("# warning: T_Q = 0, upper qubit branch is empty\n");
            }
            Ok(s)
        }
    }
}

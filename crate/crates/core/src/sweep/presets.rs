//! Built-in parameter grids.
//!
//! All presets share ε = 1.5, α = 0.001, ω_c = 10 and 60-point axes. Each
//! uses a fixed cutoff large enough for its hottest corner.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use super::config::{Axis, Cutoff, Number, Observable, SweepConfig};
use crate::error::{Error, Result};

/// Points per preset axis.
pub const RESOLUTION: usize = 60;

const LAMBDA_MAX: f64 = 2.0;
const DT_MAX: f64 = 1.9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// Current over (θ, ΔT) at λ = 0.01.
    Fig1b,
    /// Current over (λ, ΔT) at θ = 0.
    Fig2a,
    /// Current over (λ, ΔT) at θ = π/4.
    Fig2b,
    /// Current over (λ, ΔT) at θ = π/2.
    Fig2c,
    /// Current over (θ, λ) at T_R = 2, T_Q = 0, plus the optimal θ per λ.
    Fig3,
    /// g²(0) over (θ, λ) at T_R = T_Q = 0.1.
    Fig4a,
    /// Low-level spectrum, populations and both g²(0) estimates over θ at λ = 1.
    Fig4bcde,
}

impl Preset {
    pub const ALL: [Preset; 7] = [
        Preset::Fig1b,
        Preset::Fig2a,
        Preset::Fig2b,
        Preset::Fig2c,
        Preset::Fig3,
        Preset::Fig4a,
        Preset::Fig4bcde,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Preset::Fig1b => "fig1b",
            Preset::Fig2a => "fig2a",
            Preset::Fig2b => "fig2b",
            Preset::Fig2c => "fig2c",
            Preset::Fig3 => "fig3",
            Preset::Fig4a => "fig4a",
            Preset::Fig4bcde => "fig4bcde",
        }
    }

    pub fn config(self) -> SweepConfig {
        let mut c = SweepConfig::default();
        c.model.epsilon = Number(1.5);
        c.bath.alpha = Number(1e-3);
        c.bath.omega_c = Number(10.0);
        c.grid.t_mean = Axis::fixed(1.0);
        let lambda_axis = Axis::linspace(LAMBDA_MAX / RESOLUTION as f64, LAMBDA_MAX, RESOLUTION);
        let theta_axis = Axis::linspace(0.0, FRAC_PI_2, RESOLUTION);
        let dt_axis = Axis::linspace(0.0, DT_MAX, RESOLUTION);
        match self {
            Preset::Fig1b => {
                c.model.n_max = Cutoff::Fixed(50);
                c.grid.theta = theta_axis;
                c.grid.lambda = Axis::fixed(0.01);
                c.grid.d_t = dt_axis;
                c.output.observables = vec![Observable::Current];
            }
            Preset::Fig2a | Preset::Fig2b | Preset::Fig2c => {
                let theta = match self {
                    Preset::Fig2a => 0.0,
                    Preset::Fig2b => FRAC_PI_4,
                    _ => FRAC_PI_2,
                };
                c.model.n_max = Cutoff::Fixed(50);
                c.grid.theta = Axis::fixed(theta);
                c.grid.lambda = lambda_axis;
                c.grid.d_t = dt_axis;
                c.output.observables = vec![Observable::Current];
            }
            Preset::Fig3 => {
                c.model.n_max = Cutoff::Fixed(50);
                c.grid.theta = theta_axis;
                c.grid.lambda = lambda_axis;
                c.grid.d_t = Axis::fixed(2.0);
                c.output.observables = vec![Observable::Current];
                c.output.argmax_theta = true;
            }
            Preset::Fig4a => {
                c.model.n_max = Cutoff::Fixed(40);
                c.grid.theta = theta_axis;
                c.grid.lambda = lambda_axis;
                c.grid.d_t = Axis::fixed(0.0);
                c.grid.t_mean = Axis::fixed(0.1);
                c.output.observables = vec![Observable::G2, Observable::G2Approx];
            }
            Preset::Fig4bcde => {
                c.model.n_max = Cutoff::Fixed(40);
                c.grid.theta = theta_axis;
                c.grid.lambda = Axis::fixed(1.0);
                c.grid.d_t = Axis::fixed(0.0);
                c.grid.t_mean = Axis::fixed(0.1);
                c.output.observables = vec![Observable::G2, Observable::G2Approx, Observable::Populations];
            }
        }
        c
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.id() == s)
            .ok_or_else(|| {
                let ids: Vec<&str> = Preset::ALL.iter().map(|p| p.id()).collect();
                Error::Config(format!("unknown preset `{s}`; expected one of {}", ids.join(", ")))
            })
    }
}

/// Config of a named preset.
pub fn preset(id: &str) -> Result<SweepConfig> {
    Ok(id.parse::<Preset>()?.config())
}

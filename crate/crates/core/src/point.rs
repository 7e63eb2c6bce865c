//! Full pipeline for one parameter point: spectrum, rates, steady state and
//! observables.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::master::{
    build_rate_matrix, solve_steady_state, transition_rates, BathLabel, BathSpec, SteadyState,
    TransitionRateTable,
};
use crate::observables::{g2_approx, g2_zero, heat_current, CurrentBreakdown, G2Approx, G2Result};
use crate::spectrum::{solve_model, EigenSystem, ModelParams};

/// Population allowed on the top levels before a point counts as unconverged.
pub const TOP_POPULATION_LIMIT: f64 = 1e-8;

/// Model and both baths at one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSpec {
    pub params: ModelParams,
    pub bath_r: BathSpec,
    pub bath_q: BathSpec,
}

impl PointSpec {
    /// Common Ohmic parameters for both baths.
    pub fn new(params: ModelParams, alpha: f64, omega_c: f64, t_r: f64, t_q: f64) -> Result<Self> {
        Ok(Self {
            params,
            bath_r: BathSpec::resonator(alpha, omega_c, t_r)?,
            bath_q: BathSpec::qubit(alpha, omega_c, t_q)?,
        })
    }
}

/// Everything computed at a point.
#[derive(Clone, Debug)]
pub struct PointOutcome {
    pub eig: EigenSystem,
    pub table: TransitionRateTable,
    pub steady: SteadyState,
    pub current_q: CurrentBreakdown,
    pub current_r: CurrentBreakdown,
    pub g2: G2Result,
    pub g2_approx: G2Approx,
    /// Steady-state weight on the top 20% of levels.
    pub top_population: f64,
    /// Truncation guards on populations and on the g²(0) numerator both pass.
    pub converged: bool,
}

pub fn evaluate(spec: &PointSpec) -> Result<PointOutcome> {
    let eig = solve_model(&spec.params)?;
    let table = transition_rates(&eig, &[spec.bath_r, spec.bath_q])?;
    let steady = solve_steady_state(&build_rate_matrix(&table))?;
    let current_q = heat_current(&eig, &table, &steady, BathLabel::Q)?;
    let current_r = heat_current(&eig, &table, &steady, BathLabel::R)?;
    let g2 = g2_zero(&eig, &steady)?;
    let g2_approx = g2_approx(&eig, &steady)?;
    let top_population = steady.tail_weight(eig.top_level_start());
    let converged = top_population < TOP_POPULATION_LIMIT && g2.truncation_ok;
    Ok(PointOutcome {
        eig,
        table,
        steady,
        current_q,
        current_r,
        g2,
        g2_approx,
        top_population,
        converged,
    })
}

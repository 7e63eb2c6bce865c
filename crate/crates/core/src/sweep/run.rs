use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{Cutoff, Observable, SweepConfig};
use crate::error::{Error, Result};
use crate::observables::ladder_coefficients;
use crate::point::{evaluate, PointOutcome, PointSpec};
use crate::spectrum::{converge_truncation, ModelParams};

/// Lowest-level diagnostics emitted when populations are requested.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LowLevels {
    pub energies: [f64; 4],
    pub populations: [f64; 4],
    pub a1: f64,
    pub b2: f64,
}

/// One grid point of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub index: usize,
    pub theta: f64,
    pub lambda: f64,
    pub epsilon: f64,
    pub t_r: f64,
    pub t_q: f64,
    pub alpha: f64,
    pub omega_c: f64,
    pub n_max_used: usize,
    pub converged: bool,
    pub current: Option<f64>,
    pub g2: Option<f64>,
    pub g2_approx: Option<f64>,
    pub wall_time_ms: u64,
    pub low_levels: Option<LowLevels>,
    /// Why the point produced no numbers, if it failed.
    pub failure: Option<String>,
}

/// Inputs of one grid point before evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridPoint {
    pub index: usize,
    pub theta: f64,
    pub lambda: f64,
    pub d_t: f64,
    pub t_mean: f64,
}

impl GridPoint {
    pub fn t_r(&self) -> f64 {
        self.t_mean + self.d_t / 2.0
    }

    pub fn t_q(&self) -> f64 {
        (self.t_mean - self.d_t / 2.0).max(0.0)
    }
}

/// Grid points in index order: θ outermost, then λ, ΔT, T_mean.
pub fn grid_points(config: &SweepConfig) -> Vec<GridPoint> {
    let g = &config.grid;
    let (thetas, lambdas, dts, tms) = (g.theta.values(), g.lambda.values(), g.d_t.values(), g.t_mean.values());
    let mut points = Vec::with_capacity(config.point_count());
    for &theta in &thetas {
        for &lambda in &lambdas {
            for &d_t in &dts {
                for &t_mean in &tms {
                    points.push(GridPoint {
                        index: points.len(),
                        theta,
                        lambda,
                        d_t,
                        t_mean,
                    });
                }
            }
        }
    }
    points
}

fn spec_for(config: &SweepConfig, p: &GridPoint, n_max: usize) -> Result<PointSpec> {
    let params = ModelParams::new(config.model.epsilon.0, p.lambda, p.theta, n_max)?;
    PointSpec::new(params, config.bath.alpha.0, config.bath.omega_c.0, p.t_r(), p.t_q())
}

fn solve_point(config: &SweepConfig, p: &GridPoint) -> Result<(PointOutcome, bool)> {
    match config.model.n_max {
        Cutoff::Fixed(n) => Ok((evaluate(&spec_for(config, p, n)?)?, true)),
        Cutoff::Auto => {
            let probe = spec_for(config, p, crate::spectrum::DEFAULT_N_MAX)?;
            match converge_truncation(&probe.params, &probe.bath_r, &probe.bath_q, config.model.converge_tol) {
                Ok(n) => Ok((evaluate(&spec_for(config, p, n)?)?, true)),
                Err(Error::TruncationNotConverged { last, .. }) => {
                    Ok((evaluate(&spec_for(config, p, last)?)?, false))
                }
                Err(e) => Err(e),
            }
        }
    }
}

/// Evaluate one grid point; failures become flagged records.
pub fn evaluate_point(config: &SweepConfig, p: &GridPoint) -> SweepRecord {
    let started = Instant::now();
    let mut record = SweepRecord {
        index: p.index,
        theta: p.theta,
        lambda: p.lambda,
        epsilon: config.model.epsilon.0,
        t_r: p.t_r(),
        t_q: p.t_q(),
        alpha: config.bath.alpha.0,
        omega_c: config.bath.omega_c.0,
        n_max_used: match config.model.n_max {
            Cutoff::Fixed(n) => n,
            Cutoff::Auto => 0,
        },
        converged: false,
        current: None,
        g2: None,
        g2_approx: None,
        wall_time_ms: 0,
        low_levels: None,
        failure: None,
    };
    match solve_point(config, p) {
        Ok((out, scan_ok)) => {
            let wants = |o| config.output.wants(o);
            record.n_max_used = out.eig.params().map_or(0, |q| q.n_max);
            record.converged = scan_ok && out.converged;
            record.current = wants(Observable::Current).then(|| out.current_q.scaled());
            record.g2 = if wants(Observable::G2) { out.g2.value } else { None };
            record.g2_approx = if wants(Observable::G2Approx) {
                out.g2_approx.value
            } else {
                None
            };
            if wants(Observable::Populations) {
                record.low_levels = low_levels(&out).ok();
            }
        }
        Err(e) => record.failure = Some(e.to_string()),
    }
    if config.output.record_timing {
        record.wall_time_ms = started.elapsed().as_millis() as u64;
    }
    record
}

fn low_levels(out: &PointOutcome) -> Result<LowLevels> {
    let (a1, _) = ladder_coefficients(&out.eig, 1)?;
    let (_, b2) = ladder_coefficients(&out.eig, 2)?;
    Ok(LowLevels {
        energies: std::array::from_fn(|k| out.eig.energy(k)),
        populations: std::array::from_fn(|k| out.steady.population(k)),
        a1,
        b2,
    })
}

/// Evaluate every grid point on a pool of `jobs` workers (0 = all cores).
/// Records come back in grid order.
pub fn run_sweep(config: &SweepConfig, jobs: usize) -> Result<Vec<SweepRecord>> {
    config.validate()?;
    let points = grid_points(config);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Numerical(format!("cannot start worker pool: {e}")))?;
    let mut records: Vec<SweepRecord> =
        pool.install(|| points.par_iter().map(|p| evaluate_point(config, p)).collect());
    records.sort_by_key(|r| r.index);
    Ok(records)
}

/// For each combination of the non-θ inputs, the record with the largest current.
#[derive(Clone, Debug, PartialEq)]
pub struct ArgmaxRow {
    pub lambda: f64,
    pub t_r: f64,
    pub t_q: f64,
    pub theta: f64,
    pub current: f64,
}

pub fn argmax_theta(records: &[SweepRecord]) -> Vec<ArgmaxRow> {
    let mut rows: Vec<ArgmaxRow> = Vec::new();
    let mut order: Vec<(f64, f64, f64)> = Vec::new();
    for r in records {
        let key = (r.lambda, r.t_r, r.t_q);
        let Some(j) = r.current else { continue };
        match order.iter().position(|k| *k == key) {
            Some(i) => {
                if j > rows[i].current {
                    rows[i].theta = r.theta;
                    rows[i].current = j;
                }
            }
            None => {
                order.push(key);
                rows.push(ArgmaxRow {
                    lambda: r.lambda,
                    t_r: r.t_r,
                    t_q: r.t_q,
                    theta: r.theta,
                    current: j,
                });
            }
        }
    }
    rows
}

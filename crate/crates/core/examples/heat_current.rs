//! Steady state of the dressed master equation and the heat current it carries.
//!
//! ```text
//! cargo run --example heat_current
//! ```

use nalgebra::DVector;
use qrtherm::master::{build_rate_matrix, evolve_populations, solve_steady_state, transition_rates};
use qrtherm::observables::heat_current;
use qrtherm::spectrum::solve_model;
use qrtherm::{evaluate, BathLabel, BathSpec, ModelParams, PointSpec};

fn main() -> qrtherm::Result<()> {
    let params = ModelParams::new(1.5, 0.5, 0.3, 30)?;
    let bath_r = BathSpec::resonator(1e-3, 10.0, 1.5)?;
    let bath_q = BathSpec::qubit(1e-3, 10.0, 0.5)?;

    // step by step
    let eig = solve_model(&params)?;
    let table = transition_rates(&eig, &[bath_r, bath_q])?;
    let w = build_rate_matrix(&table);
    let steady = solve_steady_state(&w)?;
    let j_q = heat_current(&eig, &table, &steady, BathLabel::Q)?;
    let j_r = heat_current(&eig, &table, &steady, BathLabel::R)?;
    println!("J_Q / (alpha omega0) = {:.6e}", j_q.scaled());
    println!("J_R / (alpha omega0) = {:.6e}", j_r.scaled());
    println!("J_Q + J_R            = {:.1e}", j_q.total + j_r.total);

    let mut flows = j_q.contributions.clone();
    flows.sort_by(|a, b| b.value.abs().total_cmp(&a.value.abs()));
    println!("largest channels into the qubit bath:");
    for f in flows.iter().take(5) {
        println!("  {:>3} -> {:<3} gap {:.4}  {:+.4e}", f.upper, f.lower, f.gap, f.value);
    }

    // relaxation from the ground state towards the steady state
    let mut p0 = DVector::zeros(eig.dim());
    p0[0] = 1.0;
    for t in [0.0, 1e2, 1e3, 1e4, 1e5] {
        let p = evolve_populations(&w, &p0, t)?;
        let distance: f64 = (0..eig.dim()).map(|k| (p[k] - steady.population(k)).abs()).sum();
        println!("t = {t:>8.0e}  |p(t) - p_ss|_1 = {distance:.3e}");
    }

    // the same in one call
    let out = evaluate(&PointSpec { params, bath_r, bath_q })?;
    println!("evaluate: J_Q = {:.6e}, converged = {}", out.current_q.scaled(), out.converged);
    Ok(())
}

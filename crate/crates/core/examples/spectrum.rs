//! Exact spectrum of the qubit-resonator Hamiltonian against its two solvable limits.
//!
//! ```text
//! cargo run --example spectrum -- 0.3
//! ```

use std::f64::consts::FRAC_PI_2;

use qrtherm::spectrum::{jc_solution, longitudinal_solution, solve_model};
use qrtherm::ModelParams;

fn main() -> qrtherm::Result<()> {
    let lambda: f64 = std::env::args().nth(1).map_or(0.05, |s| s.parse().expect("lambda"));

    let transverse = ModelParams::new(1.5, lambda, 0.0, 40)?;
    let longitudinal = ModelParams::new(1.5, lambda, FRAC_PI_2, 40)?;
    let exact_t = solve_model(&transverse)?;
    let exact_l = solve_model(&longitudinal)?;
    let jc = jc_solution(&transverse)?.sorted_energies();
    let shifted = longitudinal_solution(&longitudinal)?.sorted_energies();

    println!("lambda = {lambda}");
    println!("{:>3} {:>14} {:>14} {:>14} {:>14}", "k", "theta=0", "rotating wave", "theta=pi/2", "displaced");
    for k in 0..10 {
        println!(
            "{k:>3} {:>14.8} {:>14.8} {:>14.8} {:>14.8}",
            exact_t.energy(k),
            jc[k],
            exact_l.energy(k),
            shifted[k]
        );
    }

    // in between, the two couplings mix and the ladder is no longer analytic
    let mixed = solve_model(&ModelParams::new(1.5, lambda, FRAC_PI_2 / 2.0, 40)?)?;
    let gaps: Vec<String> = (1..6).map(|k| format!("{:.5}", mixed.energy(k) - mixed.energy(0))).collect();
    println!("theta=pi/4 excitation energies: {}", gaps.join(" "));
    Ok(())
}

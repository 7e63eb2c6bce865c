//! Weak-coupling closed forms next to the full numerics.
//!
//! ```text
//! cargo run --example analytic_oracles
//! ```

use std::f64::consts::FRAC_PI_2;

use qrtherm::oracles::{jx_weak, jz_weak, sigma_x_overlap_exact, sigma_x_overlap_second_order};
use qrtherm::{evaluate, ModelParams, PointSpec};

fn main() -> qrtherm::Result<()> {
    for (label, theta) in [("transverse", 0.0), ("longitudinal", FRAC_PI_2)] {
        println!("{label} coupling, lambda = 0.01");
        for dt in [0.4, 0.8, 1.2, 1.6, 1.9] {
            let spec = PointSpec::new(ModelParams::new(1.5, 0.01, theta, 40)?, 1e-3, 10.0, 1.0 + dt / 2.0, 1.0 - dt / 2.0)?;
            let numeric = evaluate(&spec)?.current_q.scaled();
            let oracle = if theta == 0.0 {
                jx_weak(&spec.params, &spec.bath_r, &spec.bath_q)?
            } else {
                jz_weak(&spec.params, &spec.bath_r, &spec.bath_q)?
            };
            println!("  dT = {dt:.1}  numeric {numeric:.5e}  closed form {:.5e}", oracle.scaled());
            for flag in &oracle.flags {
                println!("    note: {flag}");
            }
        }
    }

    println!("sigma_x overlaps between displaced ladders");
    for g in [0.05, 0.2, 0.5] {
        for (n, m) in [(0, 0), (0, 1), (1, 2), (3, 3)] {
            println!(
                "  g = {g:<4} ({n},{m})  exact {:+.6}  second order {:+.6}",
                sigma_x_overlap_exact(n, m, g)?,
                sigma_x_overlap_second_order(n, m, g)?
            );
        }
    }
    Ok(())
}

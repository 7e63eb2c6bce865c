//! Zero-delay second-order correlation of the cavity across coupling angles.
//!
//! ```text
//! cargo run --example photon_statistics
//! ```

use std::f64::consts::FRAC_PI_2;

use qrtherm::{evaluate, ModelParams, PointSpec};

fn main() -> qrtherm::Result<()> {
    let (lambda, temperature) = (1.0, 0.1);
    println!("lambda = {lambda}, T_R = T_Q = {temperature}");
    println!("{:>8} {:>12} {:>12} {:>10} {:>10}", "theta", "g2", "approx", "P1/P0", "truncation");
    for k in 0..=10 {
        let theta = FRAC_PI_2 * k as f64 / 10.0;
        let params = ModelParams::new(1.5, lambda, theta, 40)?;
        let out = evaluate(&PointSpec::new(params, 1e-3, 10.0, temperature, temperature)?)?;
        let show = |v: Option<f64>| v.map_or("undef".to_string(), |x| format!("{x:.4e}"));
        println!(
            "{theta:>8.4} {:>12} {:>12} {:>10.4} {:>10}",
            show(out.g2.value),
            show(out.g2_approx.value),
            out.g2_approx.p1 / out.g2_approx.p0,
            if out.g2.truncation_ok { "ok" } else { "suspect" }
        );
    }
    Ok(())
}

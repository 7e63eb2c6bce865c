//! Sweep driven by a TOML config, written as CSV next to the system temp dir.
//!
//! ```text
//! cargo run --example config_sweep
//! ```

use qrtherm::sweep::output::write_text;
use qrtherm::sweep::{encode, run_sweep, Format, SweepConfig};

const CONFIG: &str = r#"
[model]
epsilon = 1.5
n_max = "auto"
converge_tol = 1e-3

[grid]
theta = { min = 0, max = "0.5pi", count = 7 }
lambda = { min = 0.25, max = 1.5, count = 6 }
dT = 1.0
T_mean = 1.0

[output]
observables = ["current", "g2"]
"#;

fn main() -> qrtherm::Result<()> {
    let config = SweepConfig::from_toml_str(CONFIG)?;
    println!("{} points", config.point_count());
    let records = run_sweep(&config, 0)?;

    let best = records
        .iter()
        .filter_map(|r| r.current.map(|j| (r, j)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty sweep");
    println!(
        "largest current {:.4e} at theta = {:.3}, lambda = {:.3} (n_max = {})",
        best.1, best.0.theta, best.0.lambda, best.0.n_max_used
    );
    let unconverged = records.iter().filter(|r| !r.converged).count();
    println!("{unconverged} unconverged points");

    let path = std::env::temp_dir().join("qrtherm_config_sweep.csv");
    write_text(&path, &encode(&records, Format::Csv)?)?;
    println!("wrote {}", path.display());
    Ok(())
}

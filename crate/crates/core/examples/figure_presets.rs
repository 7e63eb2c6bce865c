//! Run one of the built-in figure grids and summarize it.
//!
//! ```text
//! cargo run --release --example figure_presets -- fig3
//! ```

use qrtherm::sweep::output::argmax_csv;
use qrtherm::sweep::{argmax_theta, encode, run_sweep, Format, Preset};

fn main() -> qrtherm::Result<()> {
    let id = std::env::args().nth(1).unwrap_or_else(|| "fig4bcde".into());
    let preset: Preset = id.parse()?;
    let config = preset.config();
    println!("{preset}: {} points", config.point_count());

    let records = run_sweep(&config, 0)?;
    let unconverged = records.iter().filter(|r| !r.converged).count();
    println!("{unconverged} unconverged");

    if config.output.argmax_theta {
        print!("{}", argmax_csv(&argmax_theta(&records))?);
    } else {
        let csv = encode(&records, Format::Csv)?;
        for line in csv.lines().take(8) {
            println!("{line}");
        }
    }
    Ok(())
}

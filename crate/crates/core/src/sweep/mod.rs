//! Parameter sweeps over the point pipeline, their configuration and output.

pub mod config;
pub mod oracle;
pub mod output;
pub mod presets;
pub mod run;

pub use config::{load_config, Axis, Cutoff, Format, Number, Observable, SweepConfig};
pub use output::{encode, format_float};
pub use presets::{preset, Preset};
pub use run::{argmax_theta, run_sweep, SweepRecord};

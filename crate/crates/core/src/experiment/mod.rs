//! Experiment files, SNR sweeps and figure datasets.

mod config;
mod output;
mod sweep;

pub use config::{
    parse_experiment, parse_experiment_file, CurveKind, ExperimentSpec, Preset, SnrGrid,
    DEFAULT_CURVES, DEFAULT_FIG3_RATES, KNOWN_KEYS, MIN_MC_TRIALS,
};
pub use output::{
    format_value, read_csv, render_meta, render_svg, write_csv, write_outputs, CsvTable,
};
pub use sweep::{curve_requests, run_sweep, CurveRequest, SweepOutput};

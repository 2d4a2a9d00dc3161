//! Runs the figure presets and writes their CSV, metadata and SVG files.
//!
//! Run with `cargo run --release --example figure_presets [out_dir] [trials]`.

use std::path::PathBuf;

use noma_outage::experiment::{run_sweep, write_outputs, ExperimentSpec, Preset};

fn main() -> noma_outage::Result<()> {
    let mut args = std::env::args().skip(1);
    let out_dir = args
        .next()
        .map_or_else(|| std::env::temp_dir().join("noma-figures"), PathBuf::from);
    let trials = args.next().and_then(|s| s.parse().ok()).unwrap_or(200_000);

    for preset in Preset::ALL {
        let spec = ExperimentSpec {
            preset: Some(preset),
            trials,
            out_dir: out_dir.clone(),
            svg: true,
            ..ExperimentSpec::default()
        };
        let out = run_sweep(&spec)?;
        let paths = write_outputs(&spec, &out)?;
        println!(
            "{preset}: {} curves -> {}",
            out.curves.len(),
            paths[0].display()
        );
        for note in &out.notes {
            println!("  note: {note}");
        }
    }
    Ok(())
}

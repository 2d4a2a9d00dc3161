//! Parsing an experiment description and running it without touching disk.
//!
//! Run with `cargo run --release --example experiment_file`.

use noma_outage::experiment::{parse_experiment, run_sweep};

const TEXT: &str = "\
# three users, spread over three resource elements
K = 3
sic_mode = ipSIC
omega_I_db = -25
snr_start_db = 10
snr_stop_db = 50
snr_step_db = 10
curves = m_exact, n_exact, n_asym, n_mc, throughput_exact
trials = 200000
";

fn main() -> noma_outage::Result<()> {
    // command-line style overrides are applied after the file
    let spec = parse_experiment(TEXT, &[("seed".into(), "11".into())])?;
    let out = run_sweep(&spec)?;
    print!("{:>6}", "SNR dB");
    for c in &out.curves {
        print!(" {:>30}", c.label.to_string());
    }
    println!();
    for (i, db) in out.snr_db.iter().enumerate() {
        print!("{db:>6}");
        for c in &out.curves {
            print!(" {:>30.5e}", c.values[i]);
        }
        println!();
    }

    match parse_experiment("a_m = 0.5\na_n = 0.5\n", &[]) {
        Ok(_) => println!("unexpectedly accepted an equal split"),
        Err(e) => println!("\nrejected: {e}"),
    }
    Ok(())
}

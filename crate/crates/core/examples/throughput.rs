//! Delay-limited throughput for CD and PD pairs, and the effect of the rate
//! pairing when the two target rates differ.
//!
//! Run with `cargo run --example throughput`.

use noma_outage::analytic::OutageModel;
use noma_outage::model::{db_to_linear, RatePairing, SystemConfig};

fn main() -> noma_outage::Result<()> {
    let configs = [
        ("CD pSIC", SystemConfig::default()),
        (
            "CD ipSIC -30 dB",
            SystemConfig::default().imperfect_sic(1e-3),
        ),
        (
            "CD ipSIC -20 dB",
            SystemConfig::default().imperfect_sic(1e-2),
        ),
        ("PD pSIC", SystemConfig::default().power_domain()),
        (
            "PD ipSIC -20 dB",
            SystemConfig::default().power_domain().imperfect_sic(1e-2),
        ),
    ];
    print!("{:>6}", "SNR dB");
    for (name, _) in &configs {
        print!(" {name:>16}");
    }
    println!();
    let models: Vec<OutageModel> = configs
        .iter()
        .map(|(_, c)| OutageModel::new(c))
        .collect::<Result<_, _>>()?;
    for db in (0..=60).step_by(10) {
        let rho = db_to_linear(db as f64);
        print!("{db:>6}");
        for m in &models {
            print!(" {:>16.6}", m.throughput(rho));
        }
        println!();
    }

    let rates = SystemConfig::default().with_rates(0.05, 0.5);
    let as_written = OutageModel::new(&rates)?;
    let swapped = OutageModel::new(&SystemConfig {
        throughput_pairing: RatePairing::Swapped,
        ..rates
    })?;
    let rho = db_to_linear(30.0);
    println!(
        "\nR_m = 0.05, R_n = 0.5 at 30 dB: as written {:.5}, swapped {:.5} BPCU",
        as_written.throughput(rho),
        swapped.throughput(rho)
    );
    Ok(())
}

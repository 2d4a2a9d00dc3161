//! Closed-form outage probabilities of the weak and strong user over SNR,
//! under perfect and imperfect SIC.
//!
//! Run with `cargo run --example outage_curves`.

use noma_outage::analytic::OutageModel;
use noma_outage::model::{db_to_linear, SystemConfig};

fn main() -> noma_outage::Result<()> {
    let base = SystemConfig::default();
    let psic = OutageModel::new(&base)?;
    let weak_ri = OutageModel::new(&base.clone().imperfect_sic(1e-3))?;
    let strong_ri = OutageModel::new(&base.clone().imperfect_sic(1e-2))?;

    println!("M = 3, m = 1, n = 2, K = 2, R = 0.01 BPCU");
    println!(
        "{:>6} {:>12} {:>12} {:>14} {:>14}",
        "SNR dB", "P_m", "P_n pSIC", "P_n -30 dB", "P_n -20 dB"
    );
    for db in (0..=60).step_by(5) {
        let rho = db_to_linear(db as f64);
        println!(
            "{db:>6} {:>12.4e} {:>12.4e} {:>14.4e} {:>14.4e}",
            psic.outage_weak(rho),
            psic.outage_strong(rho),
            weak_ri.outage_strong(rho),
            strong_ri.outage_strong(rho),
        );
    }

    let pd = OutageModel::new(&base.clone().power_domain())?;
    let cd3 = OutageModel::new(&base.clone().code_domain(3))?;
    let rho = db_to_linear(30.0);
    println!(
        "\nat 30 dB: P_m PD = {:.4e}, CD K=2 = {:.4e}, CD K=3 = {:.4e}",
        pd.outage_weak(rho),
        psic.outage_weak(rho),
        cd3.outage_weak(rho)
    );
    Ok(())
}

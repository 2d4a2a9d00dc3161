//! Simulated outage against the closed forms, with 95% intervals.
//!
//! Run with `cargo run --release --example monte_carlo [trials]`.

use noma_outage::analytic::OutageModel;
use noma_outage::model::{db_to_linear, SystemConfig};
use noma_outage::montecarlo::{estimate_sweep, OmaUser};

fn main() -> noma_outage::Result<()> {
    let trials: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(2_000_000);
    let snr_db = [10.0, 20.0, 30.0, 40.0];
    let rhos: Vec<f64> = snr_db.iter().map(|&db| db_to_linear(db)).collect();

    for (name, cfg) in [
        ("pSIC, K = 2", SystemConfig::default()),
        (
            "ipSIC -20 dB, K = 2",
            SystemConfig::default().imperfect_sic(1e-2),
        ),
        ("pSIC, PD", SystemConfig::default().power_domain()),
    ] {
        // U = 400 makes the disk quadrature error negligible next to the interval
        let model = OutageModel::new(&cfg.clone().with_chebyshev_nodes(400))?;
        let sim = estimate_sweep(&cfg, &rhos, trials, 7, OmaUser::Rank(cfg.strong_index))?;
        println!("{name} ({trials} trials)");
        println!(
            "{:>6} {:>11} {:>22} {:>11} {:>22}",
            "SNR dB", "P_m", "simulated", "P_n", "simulated"
        );
        for ((db, rho), est) in snr_db.iter().zip(&rhos).zip(&sim) {
            println!(
                "{db:>6} {:>11.4e} {:>11.4e} ± {:<8.1e} {:>11.4e} {:>11.4e} ± {:<8.1e}",
                model.outage_weak(*rho),
                est.weak.p_hat,
                est.weak.ci95_halfwidth,
                model.outage_strong(*rho),
                est.strong.p_hat,
                est.strong.ci95_halfwidth,
            );
        }
        println!();
    }
    Ok(())
}

//! Decision thresholds and the SINR rules behind them.
//!
//! Run with `cargo run --example thresholds`.

use noma_outage::model::{
    db_to_linear, sinr_strong, sinr_strong_to_weak, sinr_weak, SicMode, SystemConfig,
};

fn main() {
    let cfg = SystemConfig::default();
    println!("eta at 1 GHz = {:.6e}", cfg.eta);
    println!(
        "{:>6} {:>12} {:>12} {:>12} {:>8}",
        "SNR dB", "tau", "beta", "slope", "beta>=tau"
    );
    for db in [0.0, 10.0, 20.0, 30.0, 40.0] {
        let th = cfg.thresholds(db_to_linear(db));
        println!(
            "{db:>6} {:>12.4e} {:>12.4e} {:>12.4e} {:>8}",
            th.tau.unwrap_or(f64::NAN),
            th.beta,
            th.residual_slope,
            th.beta_dominates_tau()
        );
    }

    // a gain sitting exactly at tau puts the weak user on its SINR threshold
    let rho = db_to_linear(20.0);
    let th = cfg.thresholds(rho);
    let tau = th.tau.expect("reference split is feasible");
    let at_tau = sinr_weak(tau, rho, cfg.power_weak, cfg.power_strong);
    println!(
        "\nweak-user SINR at Z = tau: {at_tau:.6e} (threshold {:.6e})",
        th.eps_weak
    );
    let z = 10.0 * tau.max(th.beta);
    println!(
        "strong user at Z = {z:.3e}: SINR for m's message {:.4}, own SINR {:.4} (pSIC) / {:.4} (ipSIC, Y = 1e-3)",
        sinr_strong_to_weak(z, rho, cfg.power_weak, cfg.power_strong),
        sinr_strong(z, 0.0, rho, cfg.power_strong, SicMode::Perfect),
        sinr_strong(z, 1e-3, rho, cfg.power_strong, SicMode::Imperfect),
    );

    // rates too high for the split leave the weak user without a threshold
    let infeasible = cfg.clone().with_rates(3.0, 0.01);
    println!(
        "\nR_m = 3 with a_m = 0.8: tau = {:?}",
        infeasible.thresholds(rho).tau
    );
}

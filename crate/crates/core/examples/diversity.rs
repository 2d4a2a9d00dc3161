//! High-SNR asymptotes, error floors and fitted diversity orders.
//!
//! Run with `cargo run --example diversity`.

use noma_outage::analytic::{
    diversity_order_estimate, Curve, CurveLabel, Method, OutageModel, Quantity,
};
use noma_outage::model::{db_to_linear, SystemConfig};

fn fitted(model: &OutageModel, quantity: Quantity, from_db: f64, to_db: f64) -> Option<f64> {
    let snr_db: Vec<f64> = (0..=20)
        .map(|i| from_db + (to_db - from_db) * i as f64 / 20.0)
        .collect();
    let values = snr_db
        .iter()
        .map(|&db| {
            let rho = db_to_linear(db);
            match quantity {
                Quantity::OutageWeak => model.outage_weak(rho),
                _ => model.outage_strong(rho),
            }
        })
        .collect();
    let curve = Curve {
        label: CurveLabel::new(quantity, model.config(), Method::Exact),
        snr_db,
        values,
    };
    diversity_order_estimate(&curve)
}

fn main() -> noma_outage::Result<()> {
    println!(
        "{:<28} {:>8} {:>8} {:>8}",
        "configuration", "user", "claimed", "fitted"
    );
    for (name, cfg) in [
        ("PD (K = 1)", SystemConfig::default().power_domain()),
        ("CD K = 2", SystemConfig::default()),
        ("CD K = 3", SystemConfig::default().code_domain(3)),
    ] {
        let model = OutageModel::new(&cfg)?;
        let rho = db_to_linear(40.0);
        let m = model.asymptotic_outage_weak(rho)?;
        let n = model.asymptotic_outage_strong(rho);
        println!(
            "{name:<28} {:>8} {:>8} {:>8.3}",
            "m",
            m.diversity,
            fitted(&model, Quantity::OutageWeak, 35.0, 45.0).unwrap_or(f64::NAN)
        );
        println!(
            "{name:<28} {:>8} {:>8} {:>8.3}",
            "n",
            n.diversity,
            fitted(&model, Quantity::OutageStrong, 35.0, 45.0).unwrap_or(f64::NAN)
        );
    }

    println!("\nexact / asymptote for the weak user, K = 2:");
    let model = OutageModel::new(&SystemConfig::default())?;
    for db in [20.0, 30.0, 40.0, 50.0] {
        let rho = db_to_linear(db);
        println!(
            "  {db:>4} dB  {:.4}",
            model.outage_weak(rho) / model.asymptotic_outage_weak(rho)?.value
        );
    }

    println!("\nimperfect SIC error floors (K = 2):");
    for omega in [1e-3, 1e-2] {
        let model = OutageModel::new(&SystemConfig::default().imperfect_sic(omega))?;
        let floor = model.asymptotic_outage_strong(db_to_linear(60.0));
        println!(
            "  Omega_I = {omega:e}: floor {:.4e}, P_n(60 dB) {:.4e}, fitted slope 50-60 dB {:.3}",
            floor.value,
            model.outage_strong(db_to_linear(60.0)),
            fitted(&model, Quantity::OutageStrong, 50.0, 60.0).unwrap_or(f64::NAN)
        );
    }
    Ok(())
}

//! Closed forms against the draw-by-draw simulator.
//!
//! Tests suffixed `_reference_nodes` use the reference 15-node disk rule
//! and the tolerances it is expected to meet; their `_refined_nodes`
//! companions repeat the comparison with 400 nodes, where the disk
//! quadrature error is negligible next to the simulation noise.

use noma_outage::analytic::{throughput_from, OutageModel};
use noma_outage::model::{db_to_linear, SystemConfig};
use noma_outage::montecarlo::{
    empirical_sorted_cdf, estimate_oma, estimate_outage, OmaUser, OutageEstimate,
};

const TRIALS: u64 = 10_000_000;
const REFINED_NODES: usize = 400;

fn assert_within_se(exact: f64, est: &OutageEstimate, k: f64, what: &str) {
    let se = est.std_error();
    let diff = (exact - est.p_hat).abs();
    assert!(
        diff <= k * se,
        "{what}: closed form {exact:.6e}, simulated {:.6e}, |diff| {diff:.3e} = {:.2} standard errors (limit {k})",
        est.p_hat,
        diff / se
    );
}

fn weak_user_at_20_db(nodes: usize) {
    let cfg = SystemConfig::default();
    let rho = db_to_linear(20.0);
    let exact = OutageModel::new(&cfg.clone().with_chebyshev_nodes(nodes))
        .unwrap()
        .outage_weak(rho);
    let (m, _) = estimate_outage(&cfg, rho, TRIALS, 1).unwrap();
    assert_within_se(exact, &m, 3.0, "weak user, 20 dB");
}

#[test]
fn weak_user_matches_simulation_reference_nodes() {
    weak_user_at_20_db(15);
}

#[test]
fn weak_user_matches_simulation_refined_nodes() {
    weak_user_at_20_db(REFINED_NODES);
}

#[test]
fn weak_user_within_three_ci95_reference_nodes() {
    let cfg = SystemConfig::default();
    let rho = db_to_linear(20.0);
    let exact = OutageModel::new(&cfg).unwrap().outage_weak(rho);
    let (m, _) = estimate_outage(&cfg, rho, TRIALS, 2).unwrap();
    assert!(
        (exact - m.p_hat).abs() <= 3.0 * m.ci95_halfwidth,
        "closed form {exact:.6e}, simulated {:.6e} +- {:.2e}",
        m.p_hat,
        m.ci95_halfwidth
    );
}

fn strong_user_ipsic_at_30_db(nodes: usize) {
    let cfg = SystemConfig::default().imperfect_sic(1e-3);
    let rho = db_to_linear(30.0);
    let exact = OutageModel::new(&cfg.clone().with_chebyshev_nodes(nodes))
        .unwrap()
        .outage_strong(rho);
    let (_, n) = estimate_outage(&cfg, rho, TRIALS, 3).unwrap();
    assert_within_se(exact, &n, 3.0, "strong user, ipSIC -30 dB, 30 dB");
}

#[test]
fn strong_user_imperfect_sic_matches_simulation_reference_nodes() {
    strong_user_ipsic_at_30_db(15);
}

#[test]
fn strong_user_imperfect_sic_matches_simulation_refined_nodes() {
    strong_user_ipsic_at_30_db(REFINED_NODES);
}

#[test]
fn strong_user_grid_refined_nodes() {
    // every configuration and SNR of the agreement sweep, at 4 standard errors
    let rhos: Vec<f64> = [10.0, 20.0, 30.0, 40.0]
        .iter()
        .map(|&d| db_to_linear(d))
        .collect();
    for k in 1..=3 {
        let base = if k == 1 {
            SystemConfig::default().power_domain()
        } else {
            SystemConfig::default().code_domain(k)
        };
        for cfg in [
            base.clone(),
            base.clone().imperfect_sic(1e-3),
            base.clone().imperfect_sic(1e-2),
        ] {
            let model = OutageModel::new(&cfg.clone().with_chebyshev_nodes(REFINED_NODES)).unwrap();
            let sim = noma_outage::montecarlo::estimate_sweep(
                &cfg,
                &rhos,
                2_000_000,
                4,
                OmaUser::Unordered,
            )
            .unwrap();
            for (&rho, est) in rhos.iter().zip(&sim) {
                for (exact, mc) in [
                    (model.outage_weak(rho), est.weak),
                    (model.outage_strong(rho), est.strong),
                ] {
                    if mc.p_hat > 0.0 && mc.p_hat < 1.0 {
                        assert_within_se(
                            exact,
                            &mc,
                            4.0,
                            &format!("K={k} {:?} rho={rho}", cfg.sic),
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn second_of_three_gains_matches_empirical_cdf() {
    let cfg = SystemConfig::default().with_chebyshev_nodes(REFINED_NODES);
    let model = OutageModel::new(&cfg).unwrap();
    let zs = [1e-5, 5e-5, 1e-4, 3e-4, 1e-3];
    let est = empirical_sorted_cdf(&cfg, &zs, 2, 1_000_000, 5).unwrap();
    for (z, e) in zs.iter().zip(&est) {
        assert_within_se(
            model.sorted_cdf(*z, 2).unwrap(),
            e,
            3.0,
            &format!("F_(2)({z:e})"),
        );
    }
}

#[test]
fn error_floor_matches_simulation_at_60_db() {
    let cfg = SystemConfig::default().imperfect_sic(1e-2);
    let rho = db_to_linear(60.0);
    let floor = OutageModel::new(&cfg)
        .unwrap()
        .asymptotic_outage_strong(rho);
    assert!(floor.floor);
    let (_, n) = estimate_outage(&cfg, rho, 1_000_000, 6).unwrap();
    let rel = (floor.value - n.p_hat).abs() / n.p_hat;
    assert!(
        rel < 0.05,
        "floor {:.5e}, simulated {:.5e}",
        floor.value,
        n.p_hat
    );
}

#[test]
fn throughput_matches_simulation_at_30_db() {
    let cfg = SystemConfig::default();
    let rho = db_to_linear(30.0);
    let exact = OutageModel::new(&cfg).unwrap().throughput(rho);
    let (m, n) = estimate_outage(&cfg, rho, TRIALS, 7).unwrap();
    let sim = throughput_from(m.p_hat, n.p_hat, &cfg);
    // rate-weighted sum of the two intervals plus the disk quadrature bias of the closed form
    let tol = 3.0 * (cfg.rate_strong * m.ci95_halfwidth + cfg.rate_weak * n.ci95_halfwidth) + 1e-6;
    assert!(
        (exact - sim).abs() <= tol,
        "closed form {exact:.8}, simulated {sim:.8}, tol {tol:.2e}"
    );
}

#[test]
fn oma_between_strong_and_weak_user() {
    let cfg = SystemConfig::default();
    let rho = db_to_linear(30.0);
    let model = OutageModel::new(&cfg).unwrap();
    let oma = estimate_oma(&cfg, rho, TRIALS, 8, OmaUser::Rank(cfg.strong_index)).unwrap();
    let (p_n, p_m) = (model.outage_strong(rho), model.outage_weak(rho));
    assert!(
        p_n < oma.p_hat && oma.p_hat < p_m,
        "OMA for the n-th user {:.4e} is not between P_n {p_n:.4e} and P_m {p_m:.4e}",
        oma.p_hat
    );
}

#[test]
fn oma_for_unranked_user_between_strong_and_weak_user() {
    let cfg = SystemConfig::default();
    let rho = db_to_linear(30.0);
    let model = OutageModel::new(&cfg).unwrap();
    let oma = estimate_oma(&cfg, rho, TRIALS, 8, OmaUser::Unordered).unwrap();
    let (p_n, p_m) = (model.outage_strong(rho), model.outage_weak(rho));
    assert!(
        p_n < oma.p_hat && oma.p_hat < p_m,
        "{p_n:.4e} {:.4e} {p_m:.4e}",
        oma.p_hat
    );
}

#[test]
fn oma_zero_rate_and_monotone_in_rate() {
    let rho = db_to_linear(20.0);
    let zero = SystemConfig::default().with_rates(0.0, 0.0);
    assert_eq!(
        estimate_oma(&zero, rho, 100_000, 9, OmaUser::Rank(2))
            .unwrap()
            .p_hat,
        0.0
    );
    let lo = estimate_oma(
        &SystemConfig::default().with_rates(0.1, 0.1),
        rho,
        1_000_000,
        9,
        OmaUser::Rank(2),
    )
    .unwrap();
    let hi = estimate_oma(
        &SystemConfig::default().with_rates(0.2, 0.2),
        rho,
        1_000_000,
        9,
        OmaUser::Rank(2),
    )
    .unwrap();
    assert!(hi.p_hat > lo.p_hat, "{} {}", lo.p_hat, hi.p_hat);
}

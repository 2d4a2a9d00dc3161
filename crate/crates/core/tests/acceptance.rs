//! Acceptance checks. Prints one PASS/FAIL line per criterion on stdout,
//! details of failing points on stderr, and exits non-zero if any check fails.
//!
//! Run with `cargo test --release --test acceptance`.

use std::process::{Command, ExitCode};

use noma_outage::analytic::{
    diversity_order_estimate, Curve, CurveLabel, Method, OutageModel, Quantity,
};
use noma_outage::experiment::{run_sweep, write_outputs, ExperimentSpec, Preset, SnrGrid};
use noma_outage::model::{db_to_linear, SystemConfig};
use noma_outage::montecarlo::{estimate_oma, estimate_sweep, OmaUser};
use noma_outage::numerics::{adaptive_integrate, gamma_cdf_unit, Bound};

const TRIALS: u64 = 10_000_000;
const SEED: u64 = 20_240_601;
const GRID_DB: [f64; 4] = [10.0, 20.0, 30.0, 40.0];

struct Outcome {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, summary: impl Into<String>, details: Vec<String>) -> Self {
        Outcome {
            pass,
            summary: summary.into(),
            details,
        }
    }
}

/// The nine configurations: PD and CD with K = 2, 3, each under perfect SIC
/// and imperfect SIC at -30 and -20 dB.
fn grid_configs() -> Vec<(String, SystemConfig)> {
    let mut out = Vec::new();
    for k in 1..=3 {
        let base = if k == 1 {
            SystemConfig::default().power_domain()
        } else {
            SystemConfig::default().code_domain(k)
        };
        for (name, cfg) in [
            ("pSIC", base.clone().perfect_sic()),
            ("ipSIC 1e-3", base.clone().imperfect_sic(1e-3)),
            ("ipSIC 1e-2", base.clone().imperfect_sic(1e-2)),
        ] {
            out.push((format!("K={k} {name}"), cfg));
        }
    }
    out
}

fn analytic_vs_simulation() -> Outcome {
    let rhos: Vec<f64> = GRID_DB.iter().map(|&db| db_to_linear(db)).collect();
    let mut checked = 0;
    let mut worst = 0.0f64;
    let mut details = Vec::new();
    for (name, cfg) in grid_configs() {
        let model = OutageModel::new(&cfg).expect("valid configuration");
        let sim =
            estimate_sweep(&cfg, &rhos, TRIALS, SEED, OmaUser::Unordered).expect("simulation runs");
        for ((db, &rho), est) in GRID_DB.iter().zip(&rhos).zip(&sim) {
            for (user, exact, mc) in [
                ("m", model.outage_weak(rho), est.weak),
                ("n", model.outage_strong(rho), est.strong),
            ] {
                if exact < 1e-4 {
                    continue;
                }
                checked += 1;
                let tol = 3.0 * mc.ci95_halfwidth + 1e-3;
                let diff = (exact - mc.p_hat).abs();
                worst = worst.max(diff / tol);
                if diff > tol {
                    details.push(format!(
                        "{name}, user {user}, {db} dB: closed form {exact:.6e}, simulated {:.6e}, |diff| {diff:.3e} > {tol:.3e}",
                        mc.p_hat
                    ));
                }
            }
        }
    }
    Outcome::new(
        details.is_empty(),
        format!(
            "closed form vs {TRIALS} simulated trials: {}/{checked} points within 3*ci95 + 1e-3 (worst |diff|/tol = {worst:.3})",
            checked - details.len()
        ),
        details,
    )
}

fn exact_curve(cfg: &SystemConfig, quantity: Quantity, from_db: f64, to_db: f64) -> Curve {
    let model = OutageModel::new(cfg).expect("valid configuration");
    let snr_db: Vec<f64> = (0..=20)
        .map(|i| from_db + (to_db - from_db) * i as f64 / 20.0)
        .collect();
    let values = snr_db
        .iter()
        .map(|&db| match quantity {
            Quantity::OutageWeak => model.outage_weak(db_to_linear(db)),
            _ => model.outage_strong(db_to_linear(db)),
        })
        .collect();
    Curve {
        label: CurveLabel::new(quantity, cfg, Method::Exact),
        snr_db,
        values,
    }
}

fn diversity_orders() -> Outcome {
    let mut details = Vec::new();
    let mut summary = Vec::new();
    for k in 1..=3usize {
        let base = if k == 1 {
            SystemConfig::default().power_domain()
        } else {
            SystemConfig::default().code_domain(k)
        };
        let (m, n) = (base.weak_index, base.strong_index);
        for (quantity, cfg, claimed, from, to, abs_tol) in [
            (
                Quantity::OutageWeak,
                base.clone(),
                (m * k) as f64,
                35.0,
                45.0,
                None,
            ),
            (
                Quantity::OutageStrong,
                base.clone(),
                (n * k) as f64,
                35.0,
                45.0,
                None,
            ),
            (
                Quantity::OutageStrong,
                base.clone().imperfect_sic(1e-3),
                0.0,
                50.0,
                60.0,
                Some(0.1),
            ),
            (
                Quantity::OutageStrong,
                base.clone().imperfect_sic(1e-2),
                0.0,
                50.0,
                60.0,
                Some(0.1),
            ),
        ] {
            let curve = exact_curve(&cfg, quantity, from, to);
            let fitted = diversity_order_estimate(&curve).unwrap_or(f64::NAN);
            let tol = abs_tol.unwrap_or(0.1 * claimed);
            let ok = (fitted - claimed).abs() <= tol;
            summary.push(format!("{fitted:.2}/{claimed}"));
            if !ok {
                details.push(format!(
                    "{} over {from}-{to} dB: fitted {fitted:.4}, expected {claimed} +- {tol}",
                    curve.label
                ));
            }
        }
    }
    Outcome::new(
        details.is_empty(),
        format!("fitted/claimed diversity orders: {}", summary.join(" ")),
        details,
    )
}

fn error_floor() -> Outcome {
    let rho = db_to_linear(60.0);
    let mut details = Vec::new();
    let mut floors = Vec::new();
    for omega in [1e-3, 1e-2] {
        let model = OutageModel::new(&SystemConfig::default().imperfect_sic(omega)).unwrap();
        let floor = model.asymptotic_outage_strong(rho);
        let exact = model.outage_strong(rho);
        let rel = (exact - floor.value).abs() / floor.value;
        floors.push(floor.value);
        if !floor.floor || rel > 0.05 {
            details.push(format!(
                "Omega_I = {omega:e}: P_n(60 dB) {exact:.6e}, floor {:.6e}, relative gap {rel:.3e}",
                floor.value
            ));
        }
    }
    if floors[1] <= floors[0] {
        details.push(format!(
            "floor at 1e-2 ({:.4e}) does not exceed floor at 1e-3 ({:.4e})",
            floors[1], floors[0]
        ));
    }
    Outcome::new(
        details.is_empty(),
        format!(
            "P_n at 60 dB within 5% of floor; floor(1e-3) = {:.4e} < floor(1e-2) = {:.4e}",
            floors[0], floors[1]
        ),
        details,
    )
}

/// Disk average of the Gamma CDF by adaptive integration over the radius.
fn disk_integral(cfg: &SystemConfig, z: f64) -> f64 {
    let r2 = cfg.radius * cfg.radius;
    adaptive_integrate(
        |r| {
            let y = z * (1.0 + r.powf(cfg.path_loss_exponent)) / cfg.eta;
            2.0 * r / r2 * gamma_cdf_unit(y, cfg.subcarriers).unwrap()
        },
        0.0,
        Bound::Finite(cfg.radius),
        1e-12,
    )
    .unwrap()
}

/// Strong-user outage with the residual power integrated adaptively against
/// its Gamma density instead of by Gauss-Laguerre.
fn adaptive_residual_outage(model: &OutageModel, rho: f64) -> f64 {
    let cfg = model.config();
    let th = model.thresholds(rho);
    let tau = th.tau.unwrap();
    let k = cfg.subcarriers as i32;
    let omega = cfg.residual_power;
    let norm = (1..k).map(f64::from).product::<f64>() * omega.powi(k);
    adaptive_integrate(
        |y| {
            let z = (th.residual_slope * y + th.beta).max(tau);
            y.powi(k - 1) * (-y / omega).exp() / norm
                * model.sorted_cdf(z, cfg.strong_index).unwrap()
        },
        0.0,
        Bound::Infinity,
        1e-12,
    )
    .unwrap()
}

fn quadrature_accuracy() -> Outcome {
    let mut details = Vec::new();
    let zs: Vec<f64> = (0..50)
        .map(|i| 10f64.powf(-8.0 + 7.0 * i as f64 / 49.0))
        .collect();
    let mut worst_cheb = 0.0f64;
    for k in 1..=3 {
        let cfg = SystemConfig::default().code_domain(k);
        let model = OutageModel::new(&cfg).unwrap();
        let mut failing = 0;
        let mut worst_k = 0.0f64;
        for &z in &zs {
            let reference = disk_integral(&cfg, z);
            let rel = (model.unsorted_cdf(z) - reference).abs() / reference;
            worst_k = worst_k.max(rel);
            if rel > 1e-3 {
                failing += 1;
            }
        }
        worst_cheb = worst_cheb.max(worst_k);
        if failing > 0 {
            details.push(format!(
                "Chebyshev U = 15, K = {k}: {failing}/50 z points beyond 1e-3 relative, worst {worst_k:.3e}"
            ));
        }
    }

    let mut worst_lag = 0.0f64;
    for (name, cfg) in grid_configs()
        .into_iter()
        .filter(|(n, _)| n.contains("ipSIC"))
    {
        let model = OutageModel::new(&cfg).unwrap();
        for db in GRID_DB {
            let rho = db_to_linear(db);
            let lag = model.outage_strong(rho);
            let reference = adaptive_residual_outage(&model, rho);
            let diff = (lag - reference).abs();
            worst_lag = worst_lag.max(diff);
            if diff > 1e-5 {
                details.push(format!(
                    "Laguerre L = {}, {name}, {db} dB: {lag:.8e} vs adaptive {reference:.8e}",
                    cfg.laguerre_nodes
                ));
            }
        }
    }
    Outcome::new(
        details.is_empty(),
        format!(
            "Chebyshev (U = 15) vs adaptive on 50 z points: worst relative error {worst_cheb:.3e} (limit 1e-3); \
             Laguerre vs adaptive: worst absolute error {worst_lag:.3e} (limit 1e-5)"
        ),
        details,
    )
}

fn special_cases() -> Outcome {
    let mut details = Vec::new();
    let mut worst_pd = 0.0f64;
    let mut worst_zero = 0.0f64;
    for (cd, pd) in [
        (
            SystemConfig::default().code_domain(1),
            SystemConfig::default().power_domain(),
        ),
        (
            SystemConfig::default().code_domain(1).imperfect_sic(1e-3),
            SystemConfig::default().power_domain().imperfect_sic(1e-3),
        ),
        (
            SystemConfig::default().code_domain(1).imperfect_sic(1e-2),
            SystemConfig::default().power_domain().imperfect_sic(1e-2),
        ),
    ] {
        let (cd, pd) = (
            OutageModel::new(&cd).unwrap(),
            OutageModel::new(&pd).unwrap(),
        );
        for db in GRID_DB {
            let rho = db_to_linear(db);
            worst_pd = worst_pd
                .max((cd.outage_weak(rho) - pd.outage_weak(rho)).abs())
                .max((cd.outage_strong(rho) - pd.outage_strong(rho)).abs());
        }
    }
    if worst_pd > 1e-12 {
        details.push(format!("CD K = 1 vs PD differ by {worst_pd:.3e}"));
    }
    for k in 1..=3 {
        let base = SystemConfig::default().code_domain(k);
        let psic = OutageModel::new(&base).unwrap();
        let ipsic = OutageModel::new(&base.clone().imperfect_sic(1e-2)).unwrap();
        for db in GRID_DB {
            let rho = db_to_linear(db);
            let mut th = ipsic.thresholds(rho);
            th.residual_slope = 0.0;
            worst_zero =
                worst_zero.max((ipsic.residual_integral(&th) - psic.outage_strong(rho)).abs());
        }
    }
    if worst_zero > 1e-9 {
        details.push(format!(
            "zero residual slope differs from perfect SIC by {worst_zero:.3e}"
        ));
    }
    Outcome::new(
        details.is_empty(),
        format!(
            "CD K = 1 vs PD max |diff| {worst_pd:.1e} (limit 1e-12); zero residual switch vs pSIC max |diff| {worst_zero:.1e} (limit 1e-9)"
        ),
        details,
    )
}

fn orderings() -> Outcome {
    let mut details = Vec::new();
    let rho30 = db_to_linear(30.0);
    let rho40 = db_to_linear(40.0);
    let base = SystemConfig::default();
    let model = OutageModel::new(&base).unwrap();

    let p_n = model.outage_strong(rho30);
    let p_m = model.outage_weak(rho30);
    let oma = estimate_oma(&base, rho30, TRIALS, SEED, OmaUser::Rank(base.strong_index)).unwrap();
    if !(p_n < oma.p_hat && oma.p_hat < p_m) {
        details.push(format!(
            "OMA (user n) at 30 dB: expected P_n pSIC {p_n:.4e} < OMA {:.4e} < P_m {p_m:.4e}",
            oma.p_hat
        ));
    }

    for db in [30.0, 40.0] {
        let rho = db_to_linear(db);
        for (name, k1, k3) in [
            (
                "pSIC",
                SystemConfig::default().power_domain(),
                SystemConfig::default().code_domain(3),
            ),
            (
                "ipSIC 1e-3",
                SystemConfig::default().power_domain().imperfect_sic(1e-3),
                SystemConfig::default().code_domain(3).imperfect_sic(1e-3),
            ),
            (
                "ipSIC 1e-2",
                SystemConfig::default().power_domain().imperfect_sic(1e-2),
                SystemConfig::default().code_domain(3).imperfect_sic(1e-2),
            ),
        ] {
            let (a, b) = (
                OutageModel::new(&k1).unwrap(),
                OutageModel::new(&k3).unwrap(),
            );
            for (user, p1, p3) in [
                ("m", a.outage_weak(rho), b.outage_weak(rho)),
                ("n", a.outage_strong(rho), b.outage_strong(rho)),
            ] {
                if p3 >= p1 {
                    details.push(format!(
                        "{name} user {user} at {db} dB: K = 3 {p3:.4e} not below K = 1 {p1:.4e}"
                    ));
                }
            }
        }
    }

    for (name, cd, pd) in [
        (
            "pSIC",
            SystemConfig::default(),
            SystemConfig::default().power_domain(),
        ),
        (
            "ipSIC 1e-3",
            SystemConfig::default().imperfect_sic(1e-3),
            SystemConfig::default().power_domain().imperfect_sic(1e-3),
        ),
        (
            "ipSIC 1e-2",
            SystemConfig::default().imperfect_sic(1e-2),
            SystemConfig::default().power_domain().imperfect_sic(1e-2),
        ),
    ] {
        let (t_cd, t_pd) = (
            OutageModel::new(&cd).unwrap().throughput(rho30),
            OutageModel::new(&pd).unwrap().throughput(rho30),
        );
        if t_cd < t_pd {
            details.push(format!(
                "{name} throughput at 30 dB: CD {t_cd:.6} below PD {t_pd:.6}"
            ));
        }
    }

    for (name, scheme) in [
        ("CD", SystemConfig::default()),
        ("PD", SystemConfig::default().power_domain()),
    ] {
        let lo = OutageModel::new(&scheme.clone().imperfect_sic(1e-3))
            .unwrap()
            .throughput(rho40);
        let hi = OutageModel::new(&scheme.clone().imperfect_sic(1e-2))
            .unwrap()
            .throughput(rho40);
        if hi >= lo {
            details.push(format!("{name} throughput at 40 dB does not drop from Omega 1e-3 ({lo:.6}) to 1e-2 ({hi:.6})"));
        }
    }

    let unordered = estimate_oma(&base, rho30, TRIALS, SEED, OmaUser::Unordered).unwrap();
    eprintln!(
        "  info: OMA for a user drawn independently of the ranking at 30 dB = {:.4e} (P_n {p_n:.4e}, P_m {p_m:.4e})",
        unordered.p_hat
    );
    Outcome::new(
        details.is_empty(),
        format!(
            "orderings at 30/40 dB ({} violated); OMA user n {:.4e} vs P_n {p_n:.4e}, P_m {p_m:.4e}",
            details.len(),
            oma.p_hat
        ),
        details,
    )
}

fn determinism() -> Outcome {
    let mut details = Vec::new();
    let dir = tempfile::tempdir().unwrap();
    let spec_for = |sub: &str| ExperimentSpec {
        preset: Some(Preset::Fig1),
        trials: 300_000,
        seed: 99,
        grid: SnrGrid {
            start_db: 0.0,
            stop_db: 60.0,
            step_db: 5.0,
        },
        out_dir: dir.path().join(sub),
        ..ExperimentSpec::default()
    };
    let mut outputs = Vec::new();
    for threads in [1, 4] {
        let spec = spec_for(&format!("lib{threads}"));
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            let out = run_sweep(&spec).unwrap();
            write_outputs(&spec, &out).unwrap();
        });
        outputs.push(std::fs::read(spec.csv_path()).unwrap());
    }
    if outputs[0] != outputs[1] {
        details.push("library sweep CSV differs between 1 and 4 worker threads".into());
    }

    let config = dir.path().join("empty.ini");
    std::fs::write(&config, "").unwrap();
    let mut cli = Vec::new();
    for workers in ["1", "4"] {
        let out = dir.path().join(format!("cli{workers}"));
        let status = Command::new(env!("CARGO_BIN_EXE_noma-outage"))
            .args([
                "run", "--preset", "fig2", "--trials", "100000", "--seed", "5", "--config",
            ])
            .arg(&config)
            .arg("--out")
            .arg(&out)
            .env("NOMA_OUTAGE_WORKERS", workers)
            .output()
            .unwrap();
        if !status.status.success() {
            details.push(format!(
                "CLI run with {workers} workers failed: {}",
                String::from_utf8_lossy(&status.stderr)
            ));
            return Outcome::new(false, "CLI run failed", details);
        }
        cli.push(std::fs::read(out.join("fig2.csv")).unwrap());
    }
    if cli[0] != cli[1] {
        details.push("CLI CSV differs between NOMA_OUTAGE_WORKERS=1 and 4".into());
    }
    Outcome::new(
        details.is_empty(),
        format!(
            "byte-identical CSV for 1 vs 4 workers (library fig1 {} bytes, CLI fig2 {} bytes)",
            outputs[0].len(),
            cli[0].len()
        ),
        details,
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("1 analytic-simulation agreement", analytic_vs_simulation),
        ("2 diversity orders", diversity_orders),
        ("3 error floor", error_floor),
        ("4 quadrature accuracy", quadrature_accuracy),
        ("5 special-case reductions", special_cases),
        ("6 qualitative ordering", orderings),
        ("7 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = check();
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {name}: {}", outcome.summary);
        for d in &outcome.details {
            eprintln!("  {name}: {d}");
        }
        failed += usize::from(!outcome.pass);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} of 7 criteria failed");
        ExitCode::FAILURE
    }
}

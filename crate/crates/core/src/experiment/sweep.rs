use rayon::prelude::*;

use crate::analytic::{throughput_from, Curve, CurveLabel, Method, OutageModel, Quantity};
use crate::error::Result;
use crate::model::{db_to_linear, SystemConfig};
use crate::montecarlo::{estimate_sweep, oma_threshold, OmaUser};

use super::config::{CurveKind, ExperimentSpec, Preset};

/// One curve to compute: a configuration and what to evaluate on it.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRequest {
    pub config: SystemConfig,
    pub kind: CurveKind,
}

impl CurveRequest {
    pub fn label(&self) -> CurveLabel {
        CurveLabel::new(self.kind.quantity, &self.config, self.kind.method)
    }
}

/// Curves computed over one SNR grid, in request order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub name: &'static str,
    pub snr_db: Vec<f64>,
    pub curves: Vec<Curve>,
    /// Caveats worth recording next to the data.
    pub notes: Vec<String>,
}

const EXACT_ASYM_MC: [Method; 3] = [Method::Exact, Method::Asymptotic, Method::MonteCarlo];

fn push(
    out: &mut Vec<CurveRequest>,
    config: &SystemConfig,
    quantity: Quantity,
    methods: &[Method],
) {
    for &method in methods {
        out.push(CurveRequest {
            config: config.clone(),
            kind: CurveKind::new(quantity, method),
        });
    }
}

/// Both users under perfect SIC with OMA, then user `n` at each residual level.
fn outage_family(out: &mut Vec<CurveRequest>, base: &SystemConfig, residual_db: &[f64]) {
    let psic = base.clone().perfect_sic();
    push(out, &psic, Quantity::OutageWeak, &EXACT_ASYM_MC);
    push(out, &psic, Quantity::OutageStrong, &EXACT_ASYM_MC);
    push(out, &psic, Quantity::Oma, &[Method::MonteCarlo]);
    for &db in residual_db {
        let ipsic = base.clone().imperfect_sic(db_to_linear(db));
        push(out, &ipsic, Quantity::OutageStrong, &EXACT_ASYM_MC);
    }
}

/// The curves a preset (or the explicit curve list) asks for.
pub fn curve_requests(spec: &ExperimentSpec) -> Vec<CurveRequest> {
    let base = &spec.base;
    let mut out = Vec::new();
    match spec.preset {
        None => {
            for &kind in &spec.curves {
                out.push(CurveRequest {
                    config: base.clone(),
                    kind,
                });
            }
        }
        Some(Preset::Fig1) => {
            outage_family(&mut out, &base.clone().code_domain(2), &[-30.0, -20.0])
        }
        Some(Preset::Fig2) => {
            // at -20 dB the K = 3 residual outweighs its fading gain; -30 dB keeps CD ahead
            outage_family(&mut out, &base.clone().power_domain(), &[-30.0]);
            outage_family(&mut out, &base.clone().code_domain(3), &[-30.0]);
        }
        Some(Preset::Fig3) => {
            for &r in &spec.fig3_rates {
                let c = base.clone().code_domain(2).perfect_sic().with_rates(r, r);
                push(
                    &mut out,
                    &c,
                    Quantity::OutageWeak,
                    &[Method::Exact, Method::MonteCarlo],
                );
                push(
                    &mut out,
                    &c,
                    Quantity::OutageStrong,
                    &[Method::Exact, Method::MonteCarlo],
                );
            }
        }
        Some(Preset::Fig4) => {
            for scheme in [base.clone().code_domain(2), base.clone().power_domain()] {
                let sics = [
                    scheme.clone().perfect_sic(),
                    scheme.clone().imperfect_sic(db_to_linear(-30.0)),
                    scheme.clone().imperfect_sic(db_to_linear(-20.0)),
                ];
                for c in &sics {
                    push(
                        &mut out,
                        c,
                        Quantity::Throughput,
                        &[Method::Exact, Method::MonteCarlo],
                    );
                }
            }
        }
    }
    out
}

/// Analytic quantities at one SNR point.
struct AnalyticPoint {
    weak: f64,
    strong: f64,
    weak_asym: f64,
    strong_asym: f64,
    oma: f64,
}

fn oma_exact(model: &OutageModel, rho: f64, user: OmaUser) -> Result<f64> {
    let c = model.config();
    match user {
        OmaUser::Unordered => Ok(model.unsorted_cdf(oma_threshold(c.rate_strong, rho))),
        OmaUser::Rank(r) => {
            let rate = if r == c.weak_index {
                c.rate_weak
            } else {
                c.rate_strong
            };
            model.sorted_cdf(oma_threshold(rate, rho), r)
        }
    }
}

fn analytic_point(model: &OutageModel, rho: f64, oma_user: OmaUser) -> Result<AnalyticPoint> {
    // asymptotes grow past 1 at low SNR; clamp them to stay probabilities
    let feasible = model.thresholds(rho).feasible_weak();
    let (weak_asym, strong_asym) = if feasible {
        (
            model.asymptotic_outage_weak(rho)?.value.min(1.0),
            model.asymptotic_outage_strong(rho).value.min(1.0),
        )
    } else {
        (1.0, 1.0)
    };
    Ok(AnalyticPoint {
        weak: model.outage_weak(rho),
        strong: model.outage_strong(rho),
        weak_asym,
        strong_asym,
        oma: oma_exact(model, rho, oma_user)?,
    })
}

fn config_notes(config: &SystemConfig, notes: &mut Vec<String>) {
    let th = config.thresholds(1.0);
    let name = CurveLabel::new(Quantity::OutageStrong, config, Method::Exact).to_string();
    if th.tau.is_none() {
        notes.push(format!(
            "{name}: power split cannot support the weak-user rate, every outage is 1"
        ));
    } else if !th.beta_dominates_tau() {
        notes.push(format!(
            "{name}: decoding the weak user's message is the binding constraint for user n (beta < tau)"
        ));
    }
}

/// Evaluates every requested curve over the grid.
///
/// Requests sharing a configuration share one model and one simulation run;
/// simulated curves at all grid points come from the same draws.
pub fn run_sweep(spec: &ExperimentSpec) -> Result<SweepOutput> {
    spec.validate()?;
    let snr_db = spec.grid.points_db();
    let rhos: Vec<f64> = snr_db.iter().map(|&db| db_to_linear(db)).collect();
    let requests = curve_requests(spec);

    let mut configs: Vec<&SystemConfig> = Vec::new();
    for r in &requests {
        if !configs.contains(&&r.config) {
            configs.push(&r.config);
        }
    }

    let mut notes = Vec::new();
    let mut curves = vec![None; requests.len()];
    for config in configs {
        config_notes(config, &mut notes);
        let model = OutageModel::new(config)?;
        let analytic: Vec<AnalyticPoint> = rhos
            .par_iter()
            .map(|&rho| analytic_point(&model, rho, spec.oma_user))
            .collect::<Result<_>>()?;
        let simulated = requests
            .iter()
            .any(|r| &r.config == config && r.kind.method == Method::MonteCarlo);
        let mc = if simulated {
            estimate_sweep(config, &rhos, spec.trials, spec.seed, spec.oma_user)?
        } else {
            Vec::new()
        };

        for (slot, req) in curves.iter_mut().zip(&requests) {
            if &req.config != config {
                continue;
            }
            let values: Vec<f64> = (0..rhos.len())
                .map(|i| {
                    let a = &analytic[i];
                    match (req.kind.quantity, req.kind.method) {
                        (Quantity::OutageWeak, Method::Exact) => a.weak,
                        (Quantity::OutageWeak, Method::Asymptotic) => a.weak_asym,
                        (Quantity::OutageWeak, Method::MonteCarlo) => mc[i].weak.p_hat,
                        (Quantity::OutageStrong, Method::Exact) => a.strong,
                        (Quantity::OutageStrong, Method::Asymptotic) => a.strong_asym,
                        (Quantity::OutageStrong, Method::MonteCarlo) => mc[i].strong.p_hat,
                        (Quantity::Oma, Method::Exact) => a.oma,
                        (Quantity::Oma, _) => mc[i].oma.p_hat,
                        (Quantity::Throughput, Method::MonteCarlo) => {
                            throughput_from(mc[i].weak.p_hat, mc[i].strong.p_hat, config)
                        }
                        (Quantity::Throughput, _) => throughput_from(a.weak, a.strong, config),
                    }
                })
                .collect();
            *slot = Some(Curve {
                label: req.label(),
                snr_db: snr_db.clone(),
                values,
            });
        }
    }

    if spec.preset == Some(Preset::Fig3) {
        notes.push(format!(
            "target rates {:?} BPCU are an illustrative choice, not published values",
            spec.fig3_rates
        ));
    }
    Ok(SweepOutput {
        name: spec.run_name(),
        snr_db,
        curves: curves
            .into_iter()
            .map(|c| c.expect("every request filled"))
            .collect(),
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::parse_experiment;

    fn spec(text: &str) -> ExperimentSpec {
        parse_experiment(text, &[]).unwrap()
    }

    #[test]
    fn fig1_curve_count_and_labels() {
        let reqs = curve_requests(&spec("preset = fig1\n"));
        // pSIC: m and n in three flavours plus OMA; two residual levels: n in three flavours
        assert_eq!(reqs.len(), 3 + 3 + 1 + 2 * 3);
        assert!(reqs.iter().all(|r| r.config.subcarriers == 2));
        let labels: Vec<String> = reqs.iter().map(|r| r.label().to_string()).collect();
        assert!(labels.contains(&"n_CD_K2_ipSIC-20dB_R0.01_mc".to_string()));
        assert!(labels.contains(&"n_CD_K2_ipSIC-30dB_R0.01_asym".to_string()));
        let mut unique = labels.clone();
        unique.sort();
        unique.dedup();
        assert_eq!(unique.len(), labels.len());
    }

    #[test]
    fn preset_labels_are_unique() {
        for p in Preset::ALL {
            let reqs = curve_requests(&spec(&format!("preset = {p}\n")));
            let mut labels: Vec<String> = reqs.iter().map(|r| r.label().to_string()).collect();
            let n = labels.len();
            labels.sort();
            labels.dedup();
            assert_eq!(labels.len(), n, "{p}");
        }
    }

    #[test]
    fn fig2_and_fig4_configs() {
        let reqs = curve_requests(&spec("preset = fig2\n"));
        let ks: Vec<usize> = reqs.iter().map(|r| r.config.subcarriers).collect();
        assert!(ks.contains(&1) && ks.contains(&3) && !ks.contains(&2));
        let reqs = curve_requests(&spec("preset = fig4\n"));
        assert_eq!(reqs.len(), 12);
        assert!(reqs.iter().all(|r| r.kind.quantity == Quantity::Throughput));
    }

    #[test]
    fn small_sweep_values_in_range() {
        let s = spec(
            "snr_start_db = 0\nsnr_stop_db = 40\nsnr_step_db = 10\ntrials = 20000\n\
             curves = m_exact, m_asym, m_mc, n_exact, n_mc, oma_exact, oma_mc, throughput_exact, throughput_mc\n",
        );
        let out = run_sweep(&s).unwrap();
        assert_eq!(out.snr_db, vec![0.0, 10.0, 20.0, 30.0, 40.0]);
        assert_eq!(out.curves.len(), 9);
        for c in &out.curves {
            let (lo, hi) = c.value_range();
            assert!(
                c.values
                    .iter()
                    .all(|v| v.is_finite() && *v >= lo && *v <= hi),
                "{}",
                c.label
            );
        }
        // the exact and simulated weak-user curves agree loosely even at 2e4 trials
        for (e, m) in out.curves[0].values.iter().zip(&out.curves[2].values) {
            assert!((e - m).abs() < 0.02, "{e} {m}");
        }
    }

    #[test]
    fn infeasible_rates_are_noted() {
        let s = spec("R_m = 2.6\ncurves = m_exact\n");
        let out = run_sweep(&s).unwrap();
        assert!(out.curves[0].values.iter().all(|&v| v == 1.0));
        assert_eq!(out.notes.len(), 1);
    }
}

use crate::analytic::order::{binomial, order_statistic_cdf};
use crate::error::{Error, Result};
use crate::model::{RatePairing, Scheme, SicMode, SystemConfig, ThresholdSet};
use crate::numerics::{exp_cdf, gamma_cdf_unit_unchecked, ChebyshevRule, LaguerreRule};

/// High-SNR approximation of an outage probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoteResult {
    pub value: f64,
    /// Slope of the asymptote on a log-log scale: `mK`, `m`, `nK`, `n` or 0.
    pub diversity: f64,
    /// True when the asymptote does not depend on the SNR (an error floor).
    pub floor: bool,
}

/// Closed-form evaluator for one configuration, holding its quadrature rules.
#[derive(Debug, Clone)]
pub struct OutageModel {
    config: SystemConfig,
    disk: ChebyshevRule,
    residual: LaguerreRule,
    /// `(K - 1)!`
    gamma_norm: f64,
    /// `K!`
    shape_factorial: f64,
}

impl OutageModel {
    pub fn new(config: &SystemConfig) -> Result<Self> {
        config.validate()?;
        let disk = ChebyshevRule::new(
            config.chebyshev_nodes,
            config.radius,
            config.path_loss_exponent,
        )?;
        let residual = LaguerreRule::new(config.laguerre_nodes)?;
        let gamma_norm: f64 = (1..config.subcarriers).map(|i| i as f64).product();
        Ok(OutageModel {
            config: config.clone(),
            disk,
            residual,
            gamma_norm,
            shape_factorial: gamma_norm * config.subcarriers as f64,
        })
    }

    pub fn config(&self) -> &SystemConfig {
        &self.config
    }

    pub fn chebyshev_rule(&self) -> &ChebyshevRule {
        &self.disk
    }

    pub fn laguerre_rule(&self) -> &LaguerreRule {
        &self.residual
    }

    /// CDF of the effective gain of a user at a uniformly random position,
    /// with the disk average replaced by the Chebyshev rule. Clamped to `[0, 1]`.
    pub fn unsorted_cdf(&self, z: f64) -> f64 {
        if z <= 0.0 {
            return 0.0;
        }
        let scale = z / self.config.eta;
        let value = match self.config.scheme {
            Scheme::PowerDomain => self.disk.disk_average(|c| exp_cdf(scale * c)),
            Scheme::CodeDomain => {
                let k = self.config.subcarriers;
                self.disk
                    .disk_average(|c| gamma_cdf_unit_unchecked(scale * c, k))
            }
        };
        value.clamp(0.0, 1.0)
    }

    /// CDF of the `rank`-th smallest effective gain among the `M` users.
    pub fn sorted_cdf(&self, z: f64, rank: usize) -> Result<f64> {
        if rank == 0 || rank > self.config.users {
            return Err(Error::InvalidArgument(format!(
                "order index {rank} outside 1..={}",
                self.config.users
            )));
        }
        Ok(self.ranked_cdf(z, rank))
    }

    fn ranked_cdf(&self, z: f64, rank: usize) -> f64 {
        order_statistic_cdf(self.unsorted_cdf(z), rank, self.config.users)
    }

    pub fn thresholds(&self, rho: f64) -> ThresholdSet {
        self.config.thresholds(rho)
    }

    /// Outage probability of the weak user; exactly 1 when its power share
    /// cannot reach the SINR threshold at any gain.
    pub fn outage_weak(&self, rho: f64) -> f64 {
        match self.thresholds(rho).tau {
            Some(tau) => self.ranked_cdf(tau, self.config.weak_index),
            None => 1.0,
        }
    }

    /// Outage probability of the strong user: it fails either to decode the
    /// weak user's message (`Z <= tau`) or, after cancellation, its own
    /// (`Z <= slope * Y_I + beta`).
    ///
    /// When `beta >= tau` this is exactly the closed form of the strong user;
    /// otherwise the `tau` branch is kept so the value stays equal to the
    /// probability of the outage event.
    pub fn outage_strong(&self, rho: f64) -> f64 {
        let th = self.thresholds(rho);
        if th.tau.is_none() {
            return 1.0;
        }
        if self.has_residual() {
            self.residual_integral(&th)
        } else {
            let tau = th.tau.unwrap_or(0.0);
            self.ranked_cdf(tau.max(th.beta), self.config.strong_index)
        }
    }

    fn has_residual(&self) -> bool {
        self.config.sic == SicMode::Imperfect && self.config.residual_power > 0.0
    }

    /// Expectation of the strong user's order-statistic CDF at
    /// `max(tau, slope * Y + beta)` over `Y ~ Gamma(K, Omega_I)`, evaluated with
    /// Gauss-Laguerre nodes after the substitution `t = Y / Omega_I`.
    ///
    /// With a zero slope this collapses to the perfect-SIC value.
    pub fn residual_integral(&self, th: &ThresholdSet) -> f64 {
        let Some(tau) = th.tau else {
            return 1.0;
        };
        let step = th.residual_slope * self.config.residual_power;
        let k = self.config.subcarriers as i32;
        let rank = self.config.strong_index;
        let value = self.residual.integrate(|t| {
            let z = (step * t + th.beta).max(tau);
            t.powi(k - 1) * self.ranked_cdf(z, rank)
        }) / self.gamma_norm;
        value.clamp(0.0, 1.0)
    }

    /// `sum_u b_u x_u^K / K!` with `x_u = threshold c_u / eta`: the leading
    /// small-threshold term of the unsorted CDF.
    fn leading_disk_term(&self, threshold: f64) -> f64 {
        let scale = threshold / self.config.eta;
        match self.config.scheme {
            Scheme::PowerDomain => self.disk.disk_average(|c| scale * c),
            Scheme::CodeDomain => {
                let k = self.config.subcarriers as i32;
                let kf = self.shape_factorial;
                self.disk.disk_average(|c| (scale * c).powi(k) / kf)
            }
        }
    }

    /// High-SNR asymptote of the weak user's outage, `C(M, m) [leading term at tau]^m`.
    pub fn asymptotic_outage_weak(&self, rho: f64) -> Result<AsymptoteResult> {
        let tau = self.thresholds(rho).tau.ok_or_else(|| {
            Error::InvalidArgument(
                "weak-user asymptote is undefined when a_m <= eps_m a_n".to_string(),
            )
        })?;
        let m = self.config.weak_index;
        Ok(AsymptoteResult {
            value: binomial(self.config.users, m) * self.leading_disk_term(tau).powi(m as i32),
            diversity: (m * self.config.subcarriers) as f64,
            floor: false,
        })
    }

    /// High-SNR asymptote of the strong user's outage.
    ///
    /// Under imperfect SIC the `beta` term vanishes and the value is the
    /// SNR-independent error floor. Under perfect SIC it is
    /// `C(M, n) [leading term at beta]^n`.
    pub fn asymptotic_outage_strong(&self, rho: f64) -> AsymptoteResult {
        let th = self.thresholds(rho);
        let n = self.config.strong_index;
        if self.has_residual() {
            let step = th.residual_slope * self.config.residual_power;
            let k = self.config.subcarriers as i32;
            let value = self
                .residual
                .integrate(|t| t.powi(k - 1) * self.ranked_cdf(step * t, n))
                / self.gamma_norm;
            AsymptoteResult {
                value: value.clamp(0.0, 1.0),
                diversity: 0.0,
                floor: true,
            }
        } else {
            AsymptoteResult {
                value: binomial(self.config.users, n)
                    * self.leading_disk_term(th.beta).powi(n as i32),
                diversity: (n * self.config.subcarriers) as f64,
                floor: false,
            }
        }
    }

    /// Delay-limited throughput in bits per channel use.
    pub fn throughput(&self, rho: f64) -> f64 {
        throughput_from(self.outage_weak(rho), self.outage_strong(rho), &self.config)
    }
}

/// Combines the two outage probabilities with the target rates according to
/// the configured rate pairing.
pub fn throughput_from(p_weak: f64, p_strong: f64, config: &SystemConfig) -> f64 {
    let (a, b) = match config.throughput_pairing {
        RatePairing::AsWritten => (config.rate_strong, config.rate_weak),
        RatePairing::Swapped => (config.rate_weak, config.rate_strong),
    };
    (1.0 - p_weak) * a + (1.0 - p_strong) * b
}

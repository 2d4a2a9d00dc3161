//! System parameters, decision thresholds and the per-user SINR algebra.
//!
//! Users are indexed by the rank of their effective channel gain among the
//! `M` users of the cluster (1 = weakest). The paired users are the weak
//! `m`-th user, which decodes its own signal treating the other as noise, and
//! the strong `n`-th user, which first decodes and cancels the weak user's
//! signal (SIC) and then decodes its own.
//!
//! The effective gain `Z = ||diag(h) g||^2` is used directly; both the
//! desired and the interfering term of a user are driven by the same draw of
//! `Z`, since the two spreading columns share the same weight.

use std::fmt;

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Carrier frequency of the reference setup, Hz.
pub const REFERENCE_CARRIER_HZ: f64 = 1.0e9;

/// Converts a value in dB to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Free-space frequency factor `(c / (4 pi f_c))^2`.
pub fn eta_from_carrier(carrier_hz: f64) -> Result<f64> {
    if !(carrier_hz > 0.0) || !carrier_hz.is_finite() {
        return Err(Error::config(
            "carrier_hz",
            format!("carrier frequency must be positive and finite, got {carrier_hz}"),
        ));
    }
    let k = SPEED_OF_LIGHT / (4.0 * std::f64::consts::PI * carrier_hz);
    Ok(k * k)
}

/// Multiple-access variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Code-domain NOMA: each user spreads over `K` resource elements.
    CodeDomain,
    /// Power-domain NOMA: a single resource element (`K = 1`).
    PowerDomain,
}

impl Scheme {
    pub fn short_name(self) -> &'static str {
        match self {
            Scheme::CodeDomain => "CD",
            Scheme::PowerDomain => "PD",
        }
    }
}

/// Quality of successive interference cancellation at the strong user.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SicMode {
    Perfect,
    /// Residual interference of mean power `residual_power` per resource element remains.
    Imperfect,
}

impl SicMode {
    /// The 0/1 switch multiplying the residual-interference term.
    pub fn residual_switch(self) -> f64 {
        match self {
            SicMode::Perfect => 0.0,
            SicMode::Imperfect => 1.0,
        }
    }
}

/// How target rates are paired with the outage terms in the throughput expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum RatePairing {
    /// `(1 - P_m) R_n + (1 - P_n) R_m`.
    #[default]
    AsWritten,
    /// `(1 - P_m) R_m + (1 - P_n) R_n`.
    Swapped,
}

/// All physical and protocol parameters of one user pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// Number of users `M` in the cluster.
    pub users: usize,
    /// Number of resource elements `K` each user spreads over.
    pub subcarriers: usize,
    /// 1-based gain rank of the weak user (`m`).
    pub weak_index: usize,
    /// 1-based gain rank of the strong user (`n`).
    pub strong_index: usize,
    /// Cluster radius `R_D`, metres.
    pub radius: f64,
    pub path_loss_exponent: f64,
    /// Linear frequency-dependent factor.
    pub eta: f64,
    /// Power fraction of the weak user (`a_m`).
    pub power_weak: f64,
    /// Power fraction of the strong user (`a_n`).
    pub power_strong: f64,
    /// Target rate of the weak user, bits per channel use.
    pub rate_weak: f64,
    /// Target rate of the strong user, bits per channel use.
    pub rate_strong: f64,
    /// Mean residual-interference power per resource element (linear).
    pub residual_power: f64,
    pub sic: SicMode,
    pub scheme: Scheme,
    /// Gauss-Chebyshev node count for the disk integral.
    pub chebyshev_nodes: usize,
    /// Gauss-Laguerre node count for the residual-interference integral.
    pub laguerre_nodes: usize,
    pub throughput_pairing: RatePairing,
}

impl Default for SystemConfig {
    /// The reference setup: `M = 3`, `m = 1`, `n = 2`, `K = 2`, `a_m = 0.8`,
    /// `R = 0.01` BPCU, `R_D = 2` m, `alpha = 2`, 1 GHz carrier, `U = 15`,
    /// perfect SIC with `Omega_I = -30 dB` kept for switching to imperfect SIC.
    fn default() -> Self {
        SystemConfig {
            users: 3,
            subcarriers: 2,
            weak_index: 1,
            strong_index: 2,
            radius: 2.0,
            path_loss_exponent: 2.0,
            eta: eta_from_carrier(REFERENCE_CARRIER_HZ).expect("positive carrier"),
            power_weak: 0.8,
            power_strong: 0.2,
            rate_weak: 0.01,
            rate_strong: 0.01,
            residual_power: 1e-3,
            sic: SicMode::Perfect,
            scheme: Scheme::CodeDomain,
            chebyshev_nodes: 15,
            laguerre_nodes: 64,
            throughput_pairing: RatePairing::AsWritten,
        }
    }
}

impl SystemConfig {
    /// Code-domain configuration with `k` resource elements.
    pub fn code_domain(mut self, k: usize) -> Self {
        self.scheme = Scheme::CodeDomain;
        self.subcarriers = k;
        self
    }

    /// Power-domain configuration (`K = 1`).
    pub fn power_domain(mut self) -> Self {
        self.scheme = Scheme::PowerDomain;
        self.subcarriers = 1;
        self
    }

    pub fn perfect_sic(mut self) -> Self {
        self.sic = SicMode::Perfect;
        self
    }

    /// Imperfect SIC with the given linear residual power per resource element.
    pub fn imperfect_sic(mut self, residual_power: f64) -> Self {
        self.sic = SicMode::Imperfect;
        self.residual_power = residual_power;
        self
    }

    pub fn with_rates(mut self, rate_weak: f64, rate_strong: f64) -> Self {
        self.rate_weak = rate_weak;
        self.rate_strong = rate_strong;
        self
    }

    pub fn with_chebyshev_nodes(mut self, nodes: usize) -> Self {
        self.chebyshev_nodes = nodes;
        self
    }

    /// Checks every structural invariant, naming the offending field.
    pub fn validate(&self) -> Result<()> {
        fn positive(field: &str, v: f64) -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::config(
                    field,
                    format!("must be positive and finite, got {v}"),
                ))
            }
        }
        fn non_negative(field: &str, v: f64) -> Result<()> {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::config(
                    field,
                    format!("must be non-negative and finite, got {v}"),
                ))
            }
        }

        if self.users == 0 {
            return Err(Error::config("M", "at least one user is required"));
        }
        if self.subcarriers == 0 {
            return Err(Error::config(
                "K",
                "at least one resource element is required",
            ));
        }
        if self.weak_index == 0 {
            return Err(Error::config("m_index", "indices are 1-based"));
        }
        if self.weak_index >= self.strong_index {
            return Err(Error::config(
                "n_index",
                format!(
                    "strong user index {} must exceed weak user index {}",
                    self.strong_index, self.weak_index
                ),
            ));
        }
        if self.strong_index > self.users {
            return Err(Error::config(
                "n_index",
                format!(
                    "index {} exceeds user count {}",
                    self.strong_index, self.users
                ),
            ));
        }
        if self.scheme == Scheme::PowerDomain && self.subcarriers != 1 {
            return Err(Error::config(
                "K",
                format!("power-domain NOMA requires K = 1, got {}", self.subcarriers),
            ));
        }
        positive("R_D", self.radius)?;
        positive("alpha", self.path_loss_exponent)?;
        positive("eta", self.eta)?;
        positive("a_m", self.power_weak)?;
        positive("a_n", self.power_strong)?;
        if self.power_weak <= self.power_strong {
            return Err(Error::config(
                "a_m",
                format!(
                    "weak-user power {} must exceed strong-user power {}",
                    self.power_weak, self.power_strong
                ),
            ));
        }
        if (self.power_weak + self.power_strong - 1.0).abs() > 1e-9 {
            return Err(Error::config(
                "a_n",
                format!(
                    "power fractions must sum to 1, got {} + {}",
                    self.power_weak, self.power_strong
                ),
            ));
        }
        non_negative("R_m", self.rate_weak)?;
        non_negative("R_n", self.rate_strong)?;
        non_negative("omega_I", self.residual_power)?;
        if self.chebyshev_nodes == 0 {
            return Err(Error::config(
                "U",
                "at least one Chebyshev node is required",
            ));
        }
        if self.laguerre_nodes == 0 || self.laguerre_nodes > crate::numerics::MAX_LAGUERRE_NODES {
            return Err(Error::config(
                "L",
                format!(
                    "Laguerre node count must lie in 1..={}, got {}",
                    crate::numerics::MAX_LAGUERRE_NODES,
                    self.laguerre_nodes
                ),
            ));
        }
        Ok(())
    }

    /// Decision thresholds at linear transmit SNR `rho`.
    pub fn thresholds(&self, rho: f64) -> ThresholdSet {
        derive_thresholds(self, rho)
    }

    /// Residual-interference switch: 0 under perfect SIC, 1 otherwise.
    pub fn residual_switch(&self) -> f64 {
        self.sic.residual_switch()
    }
}

/// SINR threshold `2^R - 1` for target rate `R`.
pub fn rate_threshold(rate: f64) -> f64 {
    rate.exp2() - 1.0
}

/// Decision thresholds at one transmit SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSet {
    /// Linear transmit SNR.
    pub rho: f64,
    /// SINR threshold of the weak user, `2^R_m - 1`.
    pub eps_weak: f64,
    /// SINR threshold of the strong user, `2^R_n - 1`.
    pub eps_strong: f64,
    /// Gain below which the weak user's message cannot be decoded;
    /// `None` when `a_m <= eps_m a_n`, where decoding fails for every gain.
    pub tau: Option<f64>,
    /// Gain below which the strong user fails after perfect cancellation.
    pub beta: f64,
    /// Residual-interference slope: the strong user fails when `Z <= slope * Y_I + beta`.
    pub residual_slope: f64,
}

impl ThresholdSet {
    pub fn feasible_weak(&self) -> bool {
        self.tau.is_some()
    }

    /// True when `beta >= tau`, i.e. every gain that fails SIC-free decoding of
    /// the strong user's own message also fails the weak user's message.
    pub fn beta_dominates_tau(&self) -> bool {
        self.tau.is_some_and(|tau| self.beta >= tau)
    }
}

pub fn derive_thresholds(config: &SystemConfig, rho: f64) -> ThresholdSet {
    let eps_weak = rate_threshold(config.rate_weak);
    let eps_strong = rate_threshold(config.rate_strong);
    let margin = config.power_weak - eps_weak * config.power_strong;
    let tau = (margin > 0.0).then(|| eps_weak / (rho * margin));
    ThresholdSet {
        rho,
        eps_weak,
        eps_strong,
        tau,
        beta: eps_strong / (rho * config.power_strong),
        residual_slope: config.residual_switch() * eps_strong / config.power_strong,
    }
}

/// SINR at the strong user when decoding the weak user's message.
pub fn sinr_strong_to_weak(gain: f64, rho: f64, power_weak: f64, power_strong: f64) -> f64 {
    rho * gain * power_weak / (rho * gain * power_strong + 1.0)
}

/// SINR at the strong user for its own message after SIC.
pub fn sinr_strong(gain: f64, residual: f64, rho: f64, power_strong: f64, sic: SicMode) -> f64 {
    rho * power_strong * gain / (sic.residual_switch() * rho * residual + 1.0)
}

/// SINR at the weak user for its own message.
pub fn sinr_weak(gain: f64, rho: f64, power_weak: f64, power_strong: f64) -> f64 {
    sinr_strong_to_weak(gain, rho, power_weak, power_strong)
}

impl fmt::Display for SicMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SicMode::Perfect => "pSIC",
            SicMode::Imperfect => "ipSIC",
        })
    }
}

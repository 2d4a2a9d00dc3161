//! Draw-by-draw simulation of the cluster, used as an independent check of
//! the closed forms.
//!
//! Every trial places `M` users uniformly in the disk, draws Rayleigh fading
//! on `K` resource elements per user and a residual-interference power, ranks
//! the users by effective gain and applies the outage rules of the weak and
//! strong user. Trials run in batches of [`BATCH_TRIALS`]; batch `b` uses
//! stream `b` of a ChaCha8 generator seeded with the run seed, so results do
//! not depend on how batches are spread over threads.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{rate_threshold, SystemConfig, ThresholdSet};

/// Trials per independently seeded batch.
pub const BATCH_TRIALS: u64 = 1 << 16;

/// One simulated user.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserSample {
    /// Distance to the base station, metres.
    pub distance: f64,
    /// Effective channel gain `eta G / (1 + d^alpha)`.
    pub gain: f64,
}

/// One realisation of the cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelDraw {
    /// Users sorted by ascending effective gain.
    pub users: Vec<UserSample>,
    /// The first user drawn, before ranking: a user picked independently of
    /// the gains.
    pub unordered: UserSample,
    /// Residual-interference power `||h_I||^2`.
    pub residual: f64,
}

/// Unit-mean exponential by inversion.
fn exponential<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // 1 - u lies in (0, 1]
    -(1.0 - rng.random::<f64>()).ln()
}

/// Gamma(`shape`, 1) as a sum of unit-mean exponentials.
fn gamma_unit<R: Rng + ?Sized>(rng: &mut R, shape: usize) -> f64 {
    (0..shape).map(|_| exponential(rng)).sum()
}

impl ChannelDraw {
    fn empty(users: usize) -> Self {
        let zero = UserSample {
            distance: 0.0,
            gain: 0.0,
        };
        ChannelDraw {
            users: vec![zero; users],
            unordered: zero,
            residual: 0.0,
        }
    }

    /// Redraws every quantity in place.
    pub fn resample<R: Rng + ?Sized>(&mut self, rng: &mut R, config: &SystemConfig) {
        let k = config.subcarriers;
        self.users.resize(
            config.users,
            UserSample {
                distance: 0.0,
                gain: 0.0,
            },
        );
        for user in self.users.iter_mut() {
            let distance = config.radius * rng.random::<f64>().sqrt();
            let fading = gamma_unit(rng, k);
            *user = UserSample {
                distance,
                gain: config.eta * fading / (1.0 + distance.powf(config.path_loss_exponent)),
            };
        }
        self.unordered = self.users[0];
        self.users
            .sort_unstable_by(|a, b| a.gain.total_cmp(&b.gain));
        self.residual = config.residual_power * gamma_unit(rng, k);
    }

    /// Gain of the user with 1-based rank `rank`.
    pub fn ranked_gain(&self, rank: usize) -> f64 {
        self.users[rank - 1].gain
    }

    pub fn gains(&self) -> impl Iterator<Item = f64> + '_ {
        self.users.iter().map(|u| u.gain)
    }
}

/// Draws one realisation of the cluster.
pub fn sample_draw<R: Rng + ?Sized>(rng: &mut R, config: &SystemConfig) -> ChannelDraw {
    let mut draw = ChannelDraw::empty(config.users);
    draw.resample(rng, config);
    draw
}

/// Outage indicators of the paired users in one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutageFlags {
    pub weak: bool,
    pub strong: bool,
}

/// Applies the outage rules to one draw, using the gain thresholds.
///
/// The weak user fails when `Z_m < tau`; the strong user fails when it
/// cannot decode the weak user's message (`Z_n <= tau`) or, after SIC, its
/// own (`Z_n <= slope * Y_I + beta`). Without a feasible `tau` both fail.
pub fn trial_outage(draw: &ChannelDraw, th: &ThresholdSet, config: &SystemConfig) -> OutageFlags {
    match th.tau {
        None => OutageFlags {
            weak: true,
            strong: true,
        },
        Some(tau) => {
            let zm = draw.ranked_gain(config.weak_index);
            let zn = draw.ranked_gain(config.strong_index);
            OutageFlags {
                weak: zm < tau,
                strong: zn <= tau || zn <= th.residual_slope * draw.residual + th.beta,
            }
        }
    }
}

/// Which user the orthogonal-access baseline serves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OmaUser {
    /// A user chosen independently of the channel ranking.
    #[default]
    Unordered,
    /// The user with the given 1-based gain rank.
    Rank(usize),
}

impl OmaUser {
    fn rate(self, config: &SystemConfig) -> f64 {
        match self {
            OmaUser::Rank(r) if r == config.weak_index => config.rate_weak,
            _ => config.rate_strong,
        }
    }

    fn gain(self, draw: &ChannelDraw) -> f64 {
        match self {
            OmaUser::Unordered => draw.unordered.gain,
            OmaUser::Rank(r) => draw.ranked_gain(r),
        }
    }
}

/// Gain threshold of the orthogonal baseline: the user holds half of the
/// channel uses at full power, so it fails when `log2(1 + rho Z) / 2 < R`.
pub fn oma_threshold(rate: f64, rho: f64) -> f64 {
    rate_threshold(2.0 * rate) / rho
}

/// Binomial proportion with a normal-approximation 95% interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimate {
    pub p_hat: f64,
    pub trials: u64,
    pub ci95_halfwidth: f64,
}

impl OutageEstimate {
    pub fn from_counts(failures: u64, trials: u64) -> Self {
        assert!(trials > 0 && failures <= trials);
        let p = failures as f64 / trials as f64;
        OutageEstimate {
            p_hat: p,
            trials,
            ci95_halfwidth: 1.96 * (p * (1.0 - p) / trials as f64).sqrt(),
        }
    }

    /// Binomial standard error `sqrt(p (1 - p) / N)`.
    pub fn std_error(&self) -> f64 {
        self.ci95_halfwidth / 1.96
    }
}

/// Estimates at one SNR point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepEstimate {
    pub rho: f64,
    pub weak: OutageEstimate,
    pub strong: OutageEstimate,
    pub oma: OutageEstimate,
}

/// Runs `trials` draws in seeded batches, accumulating `slots` counters per batch.
fn run_batches<F>(config: &SystemConfig, trials: u64, seed: u64, slots: usize, tally: F) -> Vec<u64>
where
    F: Fn(&ChannelDraw, &mut [u64]) + Sync,
{
    let batches = trials.div_ceil(BATCH_TRIALS);
    (0..batches)
        .into_par_iter()
        .map(|batch| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(batch);
            let n = BATCH_TRIALS.min(trials - batch * BATCH_TRIALS);
            let mut counts = vec![0u64; slots];
            let mut draw = ChannelDraw::empty(config.users);
            for _ in 0..n {
                draw.resample(&mut rng, config);
                tally(&draw, &mut counts);
            }
            counts
        })
        .reduce(
            || vec![0u64; slots],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

fn check_run(config: &SystemConfig, trials: u64, rhos: &[f64]) -> Result<()> {
    config.validate()?;
    if trials == 0 {
        return Err(Error::InvalidArgument(
            "at least one trial is required".into(),
        ));
    }
    if let Some(bad) = rhos.iter().find(|r| !(**r > 0.0) || !r.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "SNR must be positive and finite, got {bad}"
        )));
    }
    Ok(())
}

/// Estimates the outage probabilities of the weak and strong user at one SNR.
pub fn estimate_outage(
    config: &SystemConfig,
    rho: f64,
    trials: u64,
    seed: u64,
) -> Result<(OutageEstimate, OutageEstimate)> {
    let points = estimate_sweep(config, &[rho], trials, seed, OmaUser::default())?;
    Ok((points[0].weak, points[0].strong))
}

/// Estimates the outage probability of the orthogonal baseline at one SNR.
pub fn estimate_oma(
    config: &SystemConfig,
    rho: f64,
    trials: u64,
    seed: u64,
    user: OmaUser,
) -> Result<OutageEstimate> {
    Ok(estimate_sweep(config, &[rho], trials, seed, user)?[0].oma)
}

/// Estimates weak, strong and baseline outage at every SNR in `rhos`.
///
/// All SNR points are evaluated on the same draws, so the estimates along a
/// sweep are positively correlated and the curves are smooth.
pub fn estimate_sweep(
    config: &SystemConfig,
    rhos: &[f64],
    trials: u64,
    seed: u64,
    oma_user: OmaUser,
) -> Result<Vec<SweepEstimate>> {
    check_run(config, trials, rhos)?;
    if let OmaUser::Rank(r) = oma_user {
        if r == 0 || r > config.users {
            return Err(Error::InvalidArgument(format!(
                "baseline user rank {r} outside 1..={}",
                config.users
            )));
        }
    }
    let thresholds: Vec<ThresholdSet> = rhos.iter().map(|&rho| config.thresholds(rho)).collect();
    let oma_rate = oma_user.rate(config);
    let oma_thresholds: Vec<f64> = rhos
        .iter()
        .map(|&rho| oma_threshold(oma_rate, rho))
        .collect();
    let counts = run_batches(config, trials, seed, 3 * rhos.len(), |draw, counts| {
        let oma_gain = oma_user.gain(draw);
        for (i, th) in thresholds.iter().enumerate() {
            let flags = trial_outage(draw, th, config);
            counts[3 * i] += flags.weak as u64;
            counts[3 * i + 1] += flags.strong as u64;
            counts[3 * i + 2] += (oma_gain < oma_thresholds[i]) as u64;
        }
    });
    Ok(rhos
        .iter()
        .enumerate()
        .map(|(i, &rho)| SweepEstimate {
            rho,
            weak: OutageEstimate::from_counts(counts[3 * i], trials),
            strong: OutageEstimate::from_counts(counts[3 * i + 1], trials),
            oma: OutageEstimate::from_counts(counts[3 * i + 2], trials),
        })
        .collect())
}

/// Empirical CDF of the `rank`-th smallest gain at each point of `zs`.
pub fn empirical_sorted_cdf(
    config: &SystemConfig,
    zs: &[f64],
    rank: usize,
    trials: u64,
    seed: u64,
) -> Result<Vec<OutageEstimate>> {
    check_run(config, trials, &[])?;
    if rank == 0 || rank > config.users {
        return Err(Error::InvalidArgument(format!(
            "rank {rank} outside 1..={}",
            config.users
        )));
    }
    let counts = run_batches(config, trials, seed, zs.len(), |draw, counts| {
        let g = draw.ranked_gain(rank);
        for (c, &z) in counts.iter_mut().zip(zs) {
            *c += (g <= z) as u64;
        }
    });
    Ok(counts
        .into_iter()
        .map(|c| OutageEstimate::from_counts(c, trials))
        .collect())
}

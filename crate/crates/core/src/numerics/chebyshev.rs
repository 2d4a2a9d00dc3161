use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Gauss-Chebyshev rule for averaging a function of the path-loss factor
/// `1 + r^alpha` over a user placed uniformly at random in a disk of radius `R_D`.
///
/// With `r = R_D (theta + 1) / 2`, the area average
/// `2 / R_D^2 * integral_0^R_D f(r) r dr` becomes `sum_u b_u f(c_u)` where
///
/// * `theta_u = cos((2u - 1) pi / (2U))`,
/// * `b_u = pi / (2U) * sqrt(1 - theta_u^2) * (theta_u + 1)`,
/// * `c_u = 1 + (R_D (theta_u + 1) / 2)^alpha`.
///
/// The weights sum to `pi / (2U sin(pi / 2U))`, which tends to 1 from above.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevRule {
    theta: Vec<f64>,
    weights: Vec<f64>,
    path_loss: Vec<f64>,
}

impl ChebyshevRule {
    pub fn new(nodes: usize, radius: f64, path_loss_exponent: f64) -> Result<Self> {
        if nodes == 0 {
            return Err(Error::config(
                "U",
                "at least one Chebyshev node is required",
            ));
        }
        let scale = PI / (2.0 * nodes as f64);
        let theta: Vec<f64> = (1..=nodes)
            .map(|u| ((2 * u - 1) as f64 * scale).cos())
            .collect();
        let weights = theta
            .iter()
            .map(|&t| scale * (1.0 - t * t).sqrt() * (t + 1.0))
            .collect();
        let path_loss = theta
            .iter()
            .map(|&t| 1.0 + (radius * (t + 1.0) / 2.0).powf(path_loss_exponent))
            .collect();
        Ok(ChebyshevRule {
            theta,
            weights,
            path_loss,
        })
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Weights `b_u`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Path-loss factors `c_u`.
    pub fn path_loss(&self) -> &[f64] {
        &self.path_loss
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `sum_u b_u f(c_u)`: the disk average of `f(1 + r^alpha)`.
    pub fn disk_average(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.weights
            .iter()
            .zip(&self.path_loss)
            .map(|(&b, &c)| b * f(c))
            .sum()
    }
}

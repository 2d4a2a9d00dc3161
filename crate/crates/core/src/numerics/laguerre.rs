use crate::error::{Error, Result};

/// Largest supported Gauss-Laguerre order.
pub const MAX_LAGUERRE_NODES: usize = 256;

const MAX_NEWTON_STEPS: usize = 100;

/// Gauss-Laguerre rule for `integral_0^inf f(t) e^{-t} dt ~ sum_l w_l f(t_l)`.
///
/// Exact for polynomials of degree up to `2L - 1`. For large orders the
/// weights of the outermost nodes fall below the `f64` range and are stored
/// as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct LaguerreRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Evaluates `e^{-t/2} L_n(t)` and `e^{-t/2} L_{n-1}(t)` by the three-term recurrence.
fn scaled_laguerre(n: usize, t: f64) -> (f64, f64) {
    let mut p1 = (-0.5 * t).exp();
    let mut p2 = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = ((2.0 * jf - 1.0 - t) * p2 - (jf - 1.0) * p3) / jf;
    }
    (p1, p2)
}

impl LaguerreRule {
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 || order > MAX_LAGUERRE_NODES {
            return Err(Error::config(
                "L",
                format!("Laguerre order must lie in 1..={MAX_LAGUERRE_NODES}, got {order}"),
            ));
        }
        let n = order as f64;
        let mut nodes: Vec<f64> = Vec::with_capacity(order);
        let mut weights = Vec::with_capacity(order);
        let mut z = 0.0;
        for i in 0..order {
            // root guesses extrapolated from the previous roots
            z = match i {
                0 => 3.0 / (1.0 + 2.4 * n),
                1 => z + 15.0 / (1.0 + 2.5 * n),
                _ => {
                    let ai = (i - 1) as f64;
                    z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - nodes[i - 2])
                }
            };
            let mut converged = false;
            let mut prev = 0.0;
            for _ in 0..MAX_NEWTON_STEPS {
                let (p1, p2) = scaled_laguerre(order, z);
                // t L_n'(t) = n (L_n(t) - L_{n-1}(t))
                let deriv = n * (p1 - p2) / z;
                prev = p2;
                let step = p1 / deriv;
                z -= step;
                if step.abs() <= 1e-12 * z.abs() {
                    converged = true;
                    break;
                }
            }
            if !converged || !z.is_finite() {
                return Err(Error::NonConvergence {
                    what: "Gauss-Laguerre root search",
                    detail: format!("root {} of order {order}", i + 1),
                });
            }
            let (p1, p2) = scaled_laguerre(order, z);
            let deriv = n * (p1 - p2) / z;
            prev = if p2 != 0.0 { p2 } else { prev };
            nodes.push(z);
            weights.push(-(-z).exp() / (deriv * n * prev));
        }
        let ordered = nodes.windows(2).all(|w| w[1] > w[0]) && nodes[0] > 0.0;
        if !ordered || weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::NonConvergence {
                what: "Gauss-Laguerre root search",
                detail: format!("order {order} produced unordered roots or negative weights"),
            });
        }
        Ok(LaguerreRule { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `sum_l w_l f(t_l)`.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }
}

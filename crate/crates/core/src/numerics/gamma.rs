use crate::error::{Error, Result};

/// CDF of a unit-mean exponential, `1 - e^{-y}`, computed without cancellation.
pub fn exp_cdf(y: f64) -> f64 {
    -(-y).exp_m1()
}

/// CDF of a Gamma(`shape`, 1) variable with integer shape:
/// `1 - e^{-y} sum_{i<K} y^i / i!`.
pub fn gamma_cdf_unit(y: f64, shape: usize) -> Result<f64> {
    if y.is_nan() || y < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "Gamma CDF argument must be non-negative, got {y}"
        )));
    }
    if shape == 0 {
        return Err(Error::InvalidArgument(
            "Gamma shape must be at least 1".into(),
        ));
    }
    Ok(gamma_cdf_unit_unchecked(y, shape))
}

/// [`gamma_cdf_unit`] without argument checks, for hot loops. `y >= 0`, `shape >= 1`.
///
/// Below the mode the tail series `e^{-y} sum_{i>=K} y^i / i!` is summed
/// directly, so small probabilities keep full relative precision.
pub fn gamma_cdf_unit_unchecked(y: f64, shape: usize) -> f64 {
    if shape == 1 {
        return exp_cdf(y);
    }
    if y <= 0.0 {
        return 0.0;
    }
    if y.is_infinite() {
        return 1.0;
    }
    let k = shape as f64;
    if y < k + 1.0 {
        // leading term y^K e^{-y} / K!, built as a running product
        let mut term = (-y).exp();
        for i in 1..=shape {
            term *= y / i as f64;
        }
        let mut sum = 0.0;
        let mut i = k;
        while term > sum * 1e-17 {
            sum += term;
            i += 1.0;
            term *= y / i;
        }
        sum.min(1.0)
    } else {
        // upper tail, summed from its largest (last) term downwards in log space
        let log_fact: f64 = (2..shape).map(|i| (i as f64).ln()).sum();
        let mut term = (-y + (k - 1.0) * y.ln() - log_fact).exp();
        let mut upper = 0.0;
        for i in (0..shape).rev() {
            upper += term;
            term *= i as f64 / y;
        }
        (1.0 - upper).max(0.0)
    }
}

/// Binomial coefficient as `f64`.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// CDF of the `k`-th smallest of `m` i.i.d. draws whose common CDF value is `f`:
/// `phi_k sum_p C(m-k, p) (-1)^p / (k+p) f^(k+p)` with `phi_k = m! / ((m-k)! (k-1)!)`.
///
/// The alternating terms are added largest-first with Neumaier compensation.
pub fn order_statistic_cdf(f: f64, k: usize, m: usize) -> f64 {
    debug_assert!(k >= 1 && k <= m);
    let f = f.clamp(0.0, 1.0);
    if f == 0.0 {
        return 0.0;
    }
    let phi = k as f64 * binomial(m, k);
    let mut terms: Vec<f64> = (0..=m - k)
        .map(|p| {
            let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(m - k, p) / (k + p) as f64 * f.powi((k + p) as i32)
        })
        .collect();
    terms.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    let (mut sum, mut carry) = (0.0f64, 0.0f64);
    for t in terms {
        let s = sum + t;
        carry += if sum.abs() >= t.abs() {
            (sum - s) + t
        } else {
            (t - s) + sum
        };
        sum = s;
    }
    (phi * (sum + carry)).clamp(0.0, 1.0)
}

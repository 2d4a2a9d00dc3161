use crate::analytic::Curve;

/// Width of the high-SNR window used for slope fits, dB.
pub const DIVERSITY_FIT_SPAN_DB: f64 = 10.0;

/// Probabilities at or below this value are excluded from slope fits.
pub const MIN_FIT_PROBABILITY: f64 = 1e-12;

/// Estimates the diversity order `-d log P / d log rho` of a curve.
///
/// Least-squares slope of `log10 P` against `log10 rho` over the top
/// [`DIVERSITY_FIT_SPAN_DB`] of the grid, negated. Non-positive and
/// underflowed probabilities are skipped; `None` when fewer than two
/// usable points remain.
pub fn diversity_order_estimate(curve: &Curve) -> Option<f64> {
    let top = curve
        .snr_db
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let points: Vec<(f64, f64)> = curve
        .snr_db
        .iter()
        .zip(&curve.values)
        .filter(|&(&db, &p)| {
            db >= top - DIVERSITY_FIT_SPAN_DB - 1e-9 && p > MIN_FIT_PROBABILITY && p.is_finite()
        })
        .map(|(&db, &p)| (db / 10.0, p.log10()))
        .collect();
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(-sxy / sxx)
}

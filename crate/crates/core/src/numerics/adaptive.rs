use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const MAX_SUBINTERVALS: usize = 4000;

/// Upper integration limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    Finite(f64),
    Infinity,
}

// 15-point Kronrod abscissae (non-negative half) and weights, with the embedded 7-point Gauss weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Gauss-Kronrod 7/15 on `[lo, hi]`: (Kronrod value, |Kronrod - Gauss|, sum |f| w).
fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64) -> (f64, f64, f64) {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(mid);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs = fc.abs() * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let (f1, f2) = (f(mid - dx), f(mid + dx));
        kron += WGK[j] * (f1 + f2);
        abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    (kron * half, ((kron - gauss) * half).abs(), abs * half.abs())
}

/// Adaptive Gauss-Kronrod integration to relative tolerance `tol`.
///
/// A semi-infinite range is mapped onto `[0, 1)` with `x = a + s / (1 - s)`,
/// which turns exponentially decaying tails into integrands vanishing at `s = 1`.
/// The segment with the largest error estimate is bisected until the summed
/// estimate drops below `tol * |I|` (or the rounding limit of the integrand);
/// exceeding the subdivision budget is reported as non-convergence.
pub fn adaptive_integrate<F>(mut f: F, lower: f64, upper: Bound, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if !(1e-12..=1e-3).contains(&tol) {
        return Err(Error::InvalidArgument(format!(
            "relative tolerance must lie in [1e-12, 1e-3], got {tol}"
        )));
    }
    match upper {
        Bound::Finite(b) => integrate_finite(&mut f, lower, b, tol),
        Bound::Infinity => {
            let mut mapped = |s: f64| {
                if s >= 1.0 {
                    return 0.0;
                }
                let w = 1.0 - s;
                let v = f(lower + s / w) / (w * w);
                if v.is_finite() {
                    v
                } else {
                    0.0
                }
            };
            integrate_finite(&mut mapped, 0.0, 1.0, tol)
        }
    }
}

fn integrate_finite<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if lo == hi {
        return Ok(0.0);
    }
    let (value, error, abs) = kronrod(f, lo, hi);
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        lo,
        hi,
        value,
        error,
    });
    let (mut total, mut total_err, mut total_abs) = (value, error, abs);
    let mut count = 1;
    loop {
        if !total.is_finite() || !total_err.is_finite() {
            return Err(Error::NonConvergence {
                what: "adaptive integration",
                detail: format!("non-finite estimate after {count} subintervals"),
            });
        }
        let limit = (tol * total.abs()).max(50.0 * f64::EPSILON * total_abs);
        if total_err <= limit {
            return Ok(total);
        }
        if count >= MAX_SUBINTERVALS {
            return Err(Error::NonConvergence {
                what: "adaptive integration",
                detail: format!(
                    "error estimate {total_err:.3e} above {limit:.3e} after {count} subintervals"
                ),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        let (v1, e1, a1) = kronrod(f, worst.lo, mid);
        let (v2, e2, a2) = kronrod(f, mid, worst.hi);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        total_abs += a1 + a2;
        heap.push(Segment {
            lo: worst.lo,
            hi: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            lo: mid,
            hi: worst.hi,
            value: v2,
            error: e2,
        });
        count += 1;
    }
}

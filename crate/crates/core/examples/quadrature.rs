//! The two quadrature rules: Gauss-Chebyshev over the user disk and
//! Gauss-Laguerre over the residual-interference power.
//!
//! Run with `cargo run --example quadrature`.

use noma_outage::numerics::{
    adaptive_integrate, gamma_cdf_unit, Bound, ChebyshevRule, LaguerreRule,
};

fn main() -> noma_outage::Result<()> {
    let (radius, alpha) = (2.0, 2.0);
    let eta = 5.691433657e-4;
    let k = 2;
    let z = eta;

    // reference: average of Gamma(K,1) CDF over a uniform disk, by adaptive integration
    let exact = adaptive_integrate(
        |r| {
            2.0 * r / (radius * radius)
                * gamma_cdf_unit(z * (1.0 + r.powf(alpha)) / eta, k).unwrap()
        },
        0.0,
        Bound::Finite(radius),
        1e-12,
    )?;
    println!("unsorted CDF at z = eta, K = {k}: adaptive {exact:.10}");
    println!(
        "{:>5} {:>14} {:>12} {:>10}",
        "U", "Chebyshev", "rel. error", "sum b_u"
    );
    for u in [5, 10, 15, 30, 60, 120, 400] {
        let rule = ChebyshevRule::new(u, radius, alpha)?;
        let approx = rule.disk_average(|c| gamma_cdf_unit(z * c / eta, k).unwrap());
        println!(
            "{u:>5} {approx:>14.10} {:>12.3e} {:>10.6}",
            (approx - exact).abs() / exact,
            rule.weight_sum()
        );
    }

    // int_0^inf t e^-t sin(t) dt = 1/2
    println!("\n{:>5} {:>22}", "L", "int t e^-t sin t dt");
    for l in [4, 8, 16, 32, 64] {
        let rule = LaguerreRule::new(l)?;
        println!("{l:>5} {:>22.15}", rule.integrate(|t| t * t.sin()));
    }
    Ok(())
}

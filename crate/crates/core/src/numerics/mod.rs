//! Quadrature rules and special-function kernels behind the closed forms.

mod adaptive;
mod chebyshev;
mod gamma;
mod laguerre;

pub use adaptive::{adaptive_integrate, Bound};
pub use chebyshev::ChebyshevRule;
pub use gamma::{exp_cdf, gamma_cdf_unit, gamma_cdf_unit_unchecked};
pub use laguerre::{LaguerreRule, MAX_LAGUERRE_NODES};

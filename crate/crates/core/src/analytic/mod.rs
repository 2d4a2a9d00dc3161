//! Closed-form outage probabilities, their high-SNR asymptotes, diversity
//! order estimation and delay-limited throughput.

mod curve;
mod diversity;
mod order;
mod outage;

pub use curve::{Curve, CurveLabel, Method, Quantity};
pub use diversity::{diversity_order_estimate, DIVERSITY_FIT_SPAN_DB, MIN_FIT_PROBABILITY};
pub use order::{binomial, order_statistic_cdf};
pub use outage::{throughput_from, AsymptoteResult, OutageModel};

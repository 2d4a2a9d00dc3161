pub mod analytic;
pub mod error;
pub mod experiment;
pub mod model;
pub mod montecarlo;
pub mod numerics;

pub use error::{Error, Result};

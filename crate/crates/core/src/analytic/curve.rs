use std::fmt;

use crate::model::{linear_to_db, Scheme, SicMode, SystemConfig};

/// What a curve measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    OutageWeak,
    OutageStrong,
    /// Orthogonal multiple access baseline.
    Oma,
    Throughput,
}

/// How the values of a curve were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Exact,
    Asymptotic,
    MonteCarlo,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Asymptotic => "asym",
            Method::MonteCarlo => "mc",
        }
    }
}

/// Identity of a curve. Curves of the same quantity and configuration
/// differ only in their [`Method`].
#[derive(Debug, Clone, PartialEq)]
pub struct CurveLabel {
    pub quantity: Quantity,
    pub scheme: Scheme,
    pub subcarriers: usize,
    pub sic: SicMode,
    /// Residual-interference power in dB (only meaningful under imperfect SIC).
    pub residual_db: f64,
    pub rate_weak: f64,
    pub rate_strong: f64,
    pub method: Method,
}

impl CurveLabel {
    pub fn new(quantity: Quantity, config: &SystemConfig, method: Method) -> Self {
        CurveLabel {
            quantity,
            scheme: config.scheme,
            subcarriers: config.subcarriers,
            sic: config.sic,
            residual_db: linear_to_db(config.residual_power),
            rate_weak: config.rate_weak,
            rate_strong: config.rate_strong,
            method,
        }
    }

    pub fn with_method(&self, method: Method) -> Self {
        CurveLabel {
            method,
            ..self.clone()
        }
    }

    /// Whether the SIC quality affects this quantity.
    fn depends_on_sic(&self) -> bool {
        matches!(self.quantity, Quantity::OutageStrong | Quantity::Throughput)
    }
}

impl fmt::Display for CurveLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = match self.quantity {
            Quantity::OutageWeak => "m",
            Quantity::OutageStrong => "n",
            Quantity::Oma => "oma",
            Quantity::Throughput => "throughput",
        };
        write!(f, "{q}_{}_K{}", self.scheme.short_name(), self.subcarriers)?;
        if self.depends_on_sic() {
            match self.sic {
                SicMode::Perfect => f.write_str("_pSIC")?,
                SicMode::Imperfect if self.residual_db.is_finite() => {
                    write!(f, "_ipSIC{}dB", (self.residual_db * 10.0).round() / 10.0)?
                }
                SicMode::Imperfect => f.write_str("_ipSIC0")?,
            }
        }
        if self.rate_weak == self.rate_strong {
            write!(f, "_R{}", self.rate_weak)?;
        } else {
            write!(f, "_R{}-{}", self.rate_weak, self.rate_strong)?;
        }
        write!(f, "_{}", self.method.tag())
    }
}

/// Values of one quantity over an SNR grid (in dB).
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub label: CurveLabel,
    pub snr_db: Vec<f64>,
    pub values: Vec<f64>,
}

impl Curve {
    /// Admissible value range: `[0, 1]` for probabilities, `[0, R_m + R_n]` for throughput.
    pub fn value_range(&self) -> (f64, f64) {
        match self.label.quantity {
            Quantity::Throughput => (0.0, self.label.rate_weak + self.label.rate_strong),
            _ => (0.0, 1.0),
        }
    }

    pub fn is_probability(&self) -> bool {
        self.label.quantity != Quantity::Throughput
    }
}

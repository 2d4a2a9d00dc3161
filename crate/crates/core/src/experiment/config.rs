use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ini::{Ini, ParseOption};

use crate::analytic::{Method, Quantity};
use crate::error::{Error, Result};
use crate::model::{db_to_linear, eta_from_carrier, RatePairing, Scheme, SicMode, SystemConfig};
use crate::montecarlo::OmaUser;

/// Every key accepted in an experiment file or through `--set`.
pub const KNOWN_KEYS: &[&str] = &[
    "M",
    "K",
    "m_index",
    "n_index",
    "R_D",
    "alpha",
    "eta",
    "carrier_hz",
    "a_m",
    "a_n",
    "R_m",
    "R_n",
    "omega_I",
    "omega_I_db",
    "sic_mode",
    "scheme",
    "U",
    "L",
    "throughput_pairing",
    "snr_start_db",
    "snr_stop_db",
    "snr_step_db",
    "curves",
    "trials",
    "seed",
    "preset",
    "out_dir",
    "svg",
    "oma_user",
    "fig3_rates",
];

/// Smallest Monte Carlo budget accepted when simulated curves are requested.
pub const MIN_MC_TRIALS: u64 = 1_000;

/// Named curve families reproducing the four published figures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// `K = 2`: both users under perfect SIC plus user `n` at two residual levels, with OMA.
    Fig1,
    /// PD (`K = 1`) against CD with `K = 3`.
    Fig2,
    /// Target-rate family.
    Fig3,
    /// Throughput for CD/PD under perfect and imperfect SIC.
    Fig4,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Fig1, Preset::Fig2, Preset::Fig3, Preset::Fig4];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig1 => "fig1",
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
        }
    }

    /// Whether the preset plots probabilities (log axis) rather than throughput.
    pub fn is_outage(self) -> bool {
        self != Preset::Fig4
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                Error::config(
                    "preset",
                    format!("expected fig1, fig2, fig3 or fig4, got `{s}`"),
                )
            })
    }
}

/// Uniform SNR grid in dB, both ends included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrGrid {
    pub start_db: f64,
    pub stop_db: f64,
    pub step_db: f64,
}

impl Default for SnrGrid {
    fn default() -> Self {
        SnrGrid {
            start_db: 0.0,
            stop_db: 60.0,
            step_db: 2.0,
        }
    }
}

impl SnrGrid {
    pub fn validate(&self) -> Result<()> {
        if !self.start_db.is_finite() {
            return Err(Error::config("snr_start_db", "must be finite"));
        }
        if !(self.stop_db.is_finite() && self.stop_db >= self.start_db) {
            return Err(Error::config(
                "snr_stop_db",
                format!(
                    "must be finite and at least snr_start_db ({})",
                    self.start_db
                ),
            ));
        }
        if !(self.step_db > 0.0 && self.step_db.is_finite()) {
            return Err(Error::config("snr_step_db", "must be positive"));
        }
        if self.len() > 100_000 {
            return Err(Error::config(
                "snr_step_db",
                "grid has more than 100000 points",
            ));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        // a relative slack keeps 0..60 step 0.1 from losing its last point to rounding
        ((self.stop_db - self.start_db) / self.step_db * (1.0 + 1e-12)).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points_db(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| self.start_db + i as f64 * self.step_db)
            .collect()
    }
}

/// A quantity together with the way it is computed, written `m_exact`,
/// `n_asym`, `oma_mc`, `throughput_exact` and so on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurveKind {
    pub quantity: Quantity,
    pub method: Method,
}

impl CurveKind {
    pub const fn new(quantity: Quantity, method: Method) -> Self {
        CurveKind { quantity, method }
    }

    /// Whether a closed form exists for this combination.
    pub fn is_supported(self) -> bool {
        !matches!(
            (self.quantity, self.method),
            (Quantity::Oma | Quantity::Throughput, Method::Asymptotic)
        )
    }
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = match self.quantity {
            Quantity::OutageWeak => "m",
            Quantity::OutageStrong => "n",
            Quantity::Oma => "oma",
            Quantity::Throughput => "throughput",
        };
        write!(f, "{q}_{}", self.method.tag())
    }
}

impl FromStr for CurveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::config("curves", format!("unknown curve `{s}`"));
        let (q, m) = s.trim().rsplit_once('_').ok_or_else(bad)?;
        let quantity = match q {
            "m" => Quantity::OutageWeak,
            "n" => Quantity::OutageStrong,
            "oma" => Quantity::Oma,
            "throughput" => Quantity::Throughput,
            _ => return Err(bad()),
        };
        let method = match m {
            "exact" => Method::Exact,
            "asym" => Method::Asymptotic,
            "mc" => Method::MonteCarlo,
            _ => return Err(bad()),
        };
        let kind = CurveKind::new(quantity, method);
        if !kind.is_supported() {
            return Err(Error::config(
                "curves",
                format!("`{s}` has no asymptotic form"),
            ));
        }
        Ok(kind)
    }
}

/// Curves produced when neither `curves` nor `preset` is given.
pub const DEFAULT_CURVES: [CurveKind; 6] = [
    CurveKind::new(Quantity::OutageWeak, Method::Exact),
    CurveKind::new(Quantity::OutageWeak, Method::Asymptotic),
    CurveKind::new(Quantity::OutageWeak, Method::MonteCarlo),
    CurveKind::new(Quantity::OutageStrong, Method::Exact),
    CurveKind::new(Quantity::OutageStrong, Method::Asymptotic),
    CurveKind::new(Quantity::OutageStrong, Method::MonteCarlo),
];

/// Target rates of the rate-family preset. Illustrative only: no published
/// rate set exists for that figure.
pub const DEFAULT_FIG3_RATES: [f64; 3] = [0.01, 0.5, 1.0];

/// A fully validated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    /// System parameters shared by every curve; presets vary `K`, SIC and rates on top.
    pub base: SystemConfig,
    pub grid: SnrGrid,
    /// Curve selection for preset-free runs; presets define their own.
    pub curves: Vec<CurveKind>,
    pub trials: u64,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub preset: Option<Preset>,
    pub svg: bool,
    pub oma_user: OmaUser,
    pub fig3_rates: Vec<f64>,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec {
            base: SystemConfig::default(),
            grid: SnrGrid::default(),
            curves: DEFAULT_CURVES.to_vec(),
            trials: 1_000_000,
            seed: 1,
            out_dir: PathBuf::from("out"),
            preset: None,
            svg: false,
            oma_user: OmaUser::Rank(SystemConfig::default().strong_index),
            fig3_rates: DEFAULT_FIG3_RATES.to_vec(),
        }
    }
}

impl ExperimentSpec {
    /// Output file stem: the preset name, or `sweep`.
    pub fn run_name(&self) -> &'static str {
        self.preset.map_or("sweep", Preset::name)
    }

    pub fn csv_path(&self) -> PathBuf {
        self.out_dir.join(format!("{}.csv", self.run_name()))
    }

    /// Whether any requested curve is simulated. Presets always simulate.
    pub fn needs_simulation(&self) -> bool {
        self.preset.is_some() || self.curves.iter().any(|c| c.method == Method::MonteCarlo)
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        self.grid.validate()?;
        if self.preset.is_none() && self.curves.is_empty() {
            return Err(Error::config("curves", "no curves selected"));
        }
        if self.needs_simulation() && self.trials < MIN_MC_TRIALS {
            return Err(Error::config(
                "trials",
                format!(
                    "simulated curves need at least {MIN_MC_TRIALS} trials, got {}",
                    self.trials
                ),
            ));
        }
        if let OmaUser::Rank(r) = self.oma_user {
            if r == 0 || r > self.base.users {
                return Err(Error::config(
                    "oma_user",
                    format!("rank {r} outside 1..={}", self.base.users),
                ));
            }
        }
        if self.fig3_rates.is_empty() {
            return Err(Error::config("fig3_rates", "at least one rate is required"));
        }
        for &r in &self.fig3_rates {
            self.base.clone().with_rates(r, r).validate().map_err(|_| {
                Error::config("fig3_rates", format!("rate {r} is not a valid target rate"))
            })?;
        }
        Ok(())
    }
}

/// Where a key's value came from.
#[derive(Debug, Clone, Copy)]
enum Origin {
    File,
    Override,
}

struct Entries {
    values: BTreeMap<String, (String, Origin)>,
}

impl Entries {
    fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|(v, _)| v.as_str())
    }

    fn parse<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .trim()
                .parse()
                .map(Some)
                .map_err(|_| Error::config(key, format!("cannot parse `{v}`"))),
        }
    }

    fn float(&self, key: &str) -> Result<Option<f64>> {
        match self.parse::<f64>(key)? {
            Some(v) if !v.is_finite() => {
                Err(Error::config(key, format!("must be finite, got {v}")))
            }
            other => Ok(other),
        }
    }

    fn set_float(&self, key: &str, slot: &mut f64) -> Result<()> {
        if let Some(v) = self.float(key)? {
            *slot = v;
        }
        Ok(())
    }

    fn set_count(&self, key: &str, slot: &mut usize) -> Result<()> {
        if let Some(v) = self.parse(key)? {
            *slot = v;
        }
        Ok(())
    }

    fn exclusive(&self, a: &str, b: &str) -> Result<()> {
        if self.raw(a).is_some() && self.raw(b).is_some() {
            return Err(Error::config(
                b,
                format!("give either `{a}` or `{b}`, not both"),
            ));
        }
        Ok(())
    }
}

fn line_of(text: &str, key: &str) -> usize {
    text.lines()
        .position(|l| {
            l.trim_start()
                .strip_prefix(key)
                .is_some_and(|rest| rest.trim_start().starts_with(['=', ':']))
        })
        .map_or(0, |i| i + 1)
}

fn read_entries(text: &str, overrides: &[(String, String)]) -> Result<Entries> {
    let opts = ParseOption {
        enabled_quote: false,
        enabled_escape: false,
        ..ParseOption::default()
    };
    // indented comment lines are still comments
    let flat: String = text
        .lines()
        .map(|l| format!("{}\n", l.trim_start()))
        .collect();
    let ini = Ini::load_from_str_opt(&flat, opts).map_err(|e| Error::InvalidConfig {
        field: format!("line {}", e.line + 1),
        reason: e.msg.into_owned(),
    })?;
    let mut values = BTreeMap::new();
    for (section, props) in ini.iter() {
        if let Some(name) = section {
            return Err(Error::config(
                format!("[{name}]"),
                "sections are not supported; the format is flat `key = value`",
            ));
        }
        for (k, v) in props.iter() {
            if !KNOWN_KEYS.contains(&k) {
                return Err(Error::UnknownKey {
                    key: k.to_string(),
                    line: line_of(text, k),
                });
            }
            values.insert(k.to_string(), (v.to_string(), Origin::File));
        }
    }
    for (k, v) in overrides {
        if !KNOWN_KEYS.contains(&k.as_str()) {
            return Err(Error::InvalidArgument(format!(
                "unknown configuration key `{k}`"
            )));
        }
        values.insert(k.clone(), (v.clone(), Origin::Override));
    }
    Ok(Entries { values })
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::config(
            key,
            format!("expected true or false, got `{v}`"),
        )),
    }
}

fn build(e: &Entries) -> Result<ExperimentSpec> {
    let mut spec = ExperimentSpec::default();
    let c = &mut spec.base;

    e.set_count("M", &mut c.users)?;
    e.set_count("m_index", &mut c.weak_index)?;
    e.set_count("n_index", &mut c.strong_index)?;
    if let Some(s) = e.raw("scheme") {
        c.scheme = match s.trim().to_ascii_uppercase().as_str() {
            "CD" => Scheme::CodeDomain,
            "PD" => {
                c.subcarriers = 1;
                Scheme::PowerDomain
            }
            _ => {
                return Err(Error::config(
                    "scheme",
                    format!("expected CD or PD, got `{s}`"),
                ))
            }
        };
    }
    e.set_count("K", &mut c.subcarriers)?;
    e.set_float("R_D", &mut c.radius)?;
    e.set_float("alpha", &mut c.path_loss_exponent)?;
    e.exclusive("eta", "carrier_hz")?;
    e.set_float("eta", &mut c.eta)?;
    if let Some(hz) = e.float("carrier_hz")? {
        c.eta = eta_from_carrier(hz)
            .map_err(|_| Error::config("carrier_hz", format!("must be positive, got {hz}")))?;
    }
    e.set_float("a_m", &mut c.power_weak)?;
    e.set_float("a_n", &mut c.power_strong)?;
    e.set_float("R_m", &mut c.rate_weak)?;
    e.set_float("R_n", &mut c.rate_strong)?;
    e.exclusive("omega_I", "omega_I_db")?;
    e.set_float("omega_I", &mut c.residual_power)?;
    if let Some(db) = e.float("omega_I_db")? {
        c.residual_power = db_to_linear(db);
    }
    if let Some(s) = e.raw("sic_mode") {
        c.sic = match s.trim().to_ascii_lowercase().as_str() {
            "psic" | "perfect" => SicMode::Perfect,
            "ipsic" | "imperfect" => SicMode::Imperfect,
            _ => {
                return Err(Error::config(
                    "sic_mode",
                    format!("expected pSIC or ipSIC, got `{s}`"),
                ))
            }
        };
    }
    e.set_count("U", &mut c.chebyshev_nodes)?;
    e.set_count("L", &mut c.laguerre_nodes)?;
    if let Some(s) = e.raw("throughput_pairing") {
        c.throughput_pairing = match s.trim() {
            "as_written" => RatePairing::AsWritten,
            "swapped" => RatePairing::Swapped,
            _ => {
                return Err(Error::config(
                    "throughput_pairing",
                    format!("expected as_written or swapped, got `{s}`"),
                ))
            }
        };
    }

    e.set_float("snr_start_db", &mut spec.grid.start_db)?;
    e.set_float("snr_stop_db", &mut spec.grid.stop_db)?;
    e.set_float("snr_step_db", &mut spec.grid.step_db)?;
    if let Some(list) = e.raw("curves") {
        spec.curves = list
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(str::parse)
            .collect::<Result<_>>()?;
    }
    if let Some(t) = e.parse("trials")? {
        spec.trials = t;
    }
    if let Some(s) = e.parse("seed")? {
        spec.seed = s;
    }
    if let Some(p) = e.raw("preset") {
        spec.preset = Some(p.parse()?);
    }
    if let Some(dir) = e.raw("out_dir") {
        spec.out_dir = PathBuf::from(dir.trim());
    }
    if let Some(v) = e.raw("svg") {
        spec.svg = parse_bool("svg", v)?;
    }
    spec.oma_user = match e.raw("oma_user").map(|s| s.trim().to_ascii_lowercase()) {
        None => OmaUser::Rank(spec.base.strong_index),
        Some(s) => match s.as_str() {
            "n" => OmaUser::Rank(spec.base.strong_index),
            "m" => OmaUser::Rank(spec.base.weak_index),
            "unordered" => OmaUser::Unordered,
            other => OmaUser::Rank(other.parse().map_err(|_| {
                Error::config(
                    "oma_user",
                    format!("expected n, m, unordered or a rank, got `{other}`"),
                )
            })?),
        },
    };
    if let Some(list) = e.raw("fig3_rates") {
        spec.fig3_rates = list
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::config("fig3_rates", format!("cannot parse `{s}`")))
            })
            .collect::<Result<_>>()?;
    }
    spec.validate()?;
    Ok(spec)
}

/// Parses experiment text, then applies `overrides` (later wins).
///
/// An empty text yields the reference experiment.
pub fn parse_experiment(text: &str, overrides: &[(String, String)]) -> Result<ExperimentSpec> {
    let entries = read_entries(text, overrides)?;
    build(&entries).map_err(|err| {
        // point file-borne mistakes at the offending line
        match &err {
            Error::InvalidConfig { field, .. } => match entries.values.get(field) {
                Some((_, Origin::File)) => {
                    let line = line_of(text, field);
                    err.with_context(format!("configuration line {line}"))
                }
                Some((_, Origin::Override)) => err.with_context("command-line override"),
                None => err,
            },
            _ => err,
        }
    })
}

/// Reads and parses an experiment file.
pub fn parse_experiment_file(
    path: &Path,
    overrides: &[(String, String)],
) -> Result<ExperimentSpec> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_experiment(&text, overrides)
}

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::analytic::{Curve, Method};
use crate::error::{Error, Result};
use crate::montecarlo::OmaUser;

use super::config::ExperimentSpec;
use super::sweep::SweepOutput;

/// Formats a curve value with nine significant digits.
pub fn format_value(v: f64) -> String {
    format!("{v:.8e}")
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes `snr_db,<label>,...` with one row per grid point.
pub fn write_csv(path: &Path, snr_db: &[f64], curves: &[Curve]) -> Result<()> {
    if curves.iter().any(|c| c.values.len() != snr_db.len()) {
        return Err(Error::InvalidArgument(
            "curve length differs from the SNR grid".into(),
        ));
    }
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    let mut header = vec!["snr_db".to_string()];
    header.extend(curves.iter().map(|c| c.label.to_string()));
    w.write_record(&header).map_err(csv_err(path))?;
    for (i, snr) in snr_db.iter().enumerate() {
        let mut row = vec![snr.to_string()];
        row.extend(curves.iter().map(|c| format_value(c.values[i])));
        w.write_record(&row).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Parsed contents of a curve CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub labels: Vec<String>,
    pub snr_db: Vec<f64>,
    /// One column per label.
    pub columns: Vec<Vec<f64>>,
}

pub fn read_csv(path: &Path) -> Result<CsvTable> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let header = r.headers().map_err(csv_err(path))?.clone();
    if header.get(0) != Some("snr_db") {
        return Err(Error::InvalidArgument(format!(
            "{}: first column must be snr_db",
            path.display()
        )));
    }
    let labels: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut snr_db = Vec::new();
    let mut columns = vec![Vec::new(); labels.len()];
    for record in r.records() {
        let record = record.map_err(csv_err(path))?;
        let mut fields = record.iter().map(|f| {
            f.parse::<f64>().map_err(|_| {
                Error::InvalidArgument(format!("{}: bad number `{f}`", path.display()))
            })
        });
        snr_db.push(fields.next().transpose()?.unwrap_or(f64::NAN));
        for col in columns.iter_mut() {
            col.push(fields.next().transpose()?.unwrap_or(f64::NAN));
        }
    }
    Ok(CsvTable {
        labels,
        snr_db,
        columns,
    })
}

/// Run parameters and caveats, one `key = value` per line.
pub fn render_meta(spec: &ExperimentSpec, out: &SweepOutput) -> String {
    let c = &spec.base;
    let mut s = String::new();
    let oma = match spec.oma_user {
        OmaUser::Unordered => "unordered".to_string(),
        OmaUser::Rank(r) => r.to_string(),
    };
    let _ = writeln!(s, "run = {}", out.name);
    let _ = writeln!(s, "seed = {}", spec.seed);
    let _ = writeln!(s, "trials = {}", spec.trials);
    let _ = writeln!(
        s,
        "snr_grid_db = {}:{}:{}",
        spec.grid.start_db, spec.grid.step_db, spec.grid.stop_db
    );
    let _ = writeln!(s, "M = {}", c.users);
    let _ = writeln!(s, "m_index = {}", c.weak_index);
    let _ = writeln!(s, "n_index = {}", c.strong_index);
    let _ = writeln!(s, "R_D = {}", c.radius);
    let _ = writeln!(s, "alpha = {}", c.path_loss_exponent);
    let _ = writeln!(s, "eta = {}", c.eta);
    let _ = writeln!(s, "a_m = {}", c.power_weak);
    let _ = writeln!(s, "a_n = {}", c.power_strong);
    let _ = writeln!(s, "U = {}", c.chebyshev_nodes);
    let _ = writeln!(s, "L = {}", c.laguerre_nodes);
    let _ = writeln!(s, "oma_user = {oma}");
    let _ = writeln!(s, "throughput_pairing = {:?}", c.throughput_pairing);
    if out.name == "fig3" {
        let rates: Vec<String> = spec.fig3_rates.iter().map(f64::to_string).collect();
        let _ = writeln!(s, "fig3_rates = {}", rates.join(","));
        let _ = writeln!(s, "fig3_rates_authoritative = false");
    }
    let _ = writeln!(s, "columns = {}", out.curves.len());
    for note in &out.notes {
        let _ = writeln!(s, "note = {note}");
    }
    s
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
    "#7f7f7f", "#bcbd22",
];

/// Plots every curve on one chart: solid lines for closed forms, dashed for
/// asymptotes, markers for simulation. Curves of the same configuration and
/// quantity share a colour.
pub fn render_svg(out: &SweepOutput, log_y: bool) -> String {
    let (w, h) = (960.0, 540.0);
    let (left, right, top, bottom) = (70.0, 700.0, 20.0, 490.0);
    let x0 = out.snr_db.first().copied().unwrap_or(0.0);
    let x1 = out.snr_db.last().copied().unwrap_or(1.0).max(x0 + 1e-9);

    let finite = out.curves.iter().flat_map(|c| c.values.iter().copied());
    let (y0, y1) = if log_y {
        let min = finite
            .filter(|v| *v > 0.0)
            .fold(1.0f64, f64::min)
            .max(1e-12);
        (min.log10().floor().min(-1.0), 0.0)
    } else {
        let max = finite.fold(0.0f64, f64::max);
        (0.0, if max > 0.0 { max * 1.05 } else { 1.0 })
    };
    let px = |x: f64| left + (x - x0) / (x1 - x0) * (right - left);
    let py = |y: f64| {
        let t = if log_y {
            y.max(10f64.powf(y0)).log10()
        } else {
            y
        };
        bottom - (t - y0) / (y1 - y0) * (bottom - top)
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{left}" y="{top}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        right - left,
        bottom - top
    );
    if log_y {
        let mut d = y0 as i32;
        while d <= y1 as i32 {
            let y = bottom - (d as f64 - y0) / (y1 - y0) * (bottom - top);
            let _ = writeln!(
                s,
                r##"<line x1="{left}" x2="{right}" y1="{y:.1}" y2="{y:.1}" stroke="#ddd"/><text x="{}" y="{:.1}" text-anchor="end">1e{d}</text>"##,
                left - 4.0,
                y + 4.0
            );
            d += 1;
        }
    } else {
        for i in 0..=5 {
            let v = y0 + (y1 - y0) * i as f64 / 5.0;
            let y = py(v);
            let _ = writeln!(
                s,
                r##"<line x1="{left}" x2="{right}" y1="{y:.1}" y2="{y:.1}" stroke="#ddd"/><text x="{}" y="{:.1}" text-anchor="end">{v:.3}</text>"##,
                left - 4.0,
                y + 4.0
            );
        }
    }
    for i in 0..=6 {
        let v = x0 + (x1 - x0) * i as f64 / 6.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{}" text-anchor="middle">{v:.0}</text>"#,
            px(v),
            bottom + 16.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">SNR (dB)</text>"#,
        (left + right) / 2.0,
        bottom + 36.0
    );

    let mut families: Vec<String> = Vec::new();
    for (i, c) in out.curves.iter().enumerate() {
        let family = c.label.with_method(Method::Exact).to_string();
        let idx = families
            .iter()
            .position(|f| *f == family)
            .unwrap_or_else(|| {
                families.push(family);
                families.len() - 1
            });
        let color = PALETTE[idx % PALETTE.len()];
        let points: Vec<(f64, f64)> = c
            .snr_db
            .iter()
            .zip(&c.values)
            .filter(|(_, v)| !log_y || **v >= 10f64.powf(y0))
            .map(|(x, v)| (px(*x), py(*v)))
            .collect();
        match c.label.method {
            Method::MonteCarlo => {
                for (x, y) in &points {
                    let _ = writeln!(
                        s,
                        r#"<circle cx="{x:.1}" cy="{y:.1}" r="3" fill="none" stroke="{color}"/>"#
                    );
                }
            }
            method => {
                let dash = if method == Method::Asymptotic {
                    r#" stroke-dasharray="6 4""#
                } else {
                    ""
                };
                let path: Vec<String> = points
                    .iter()
                    .map(|(x, y)| format!("{x:.1},{y:.1}"))
                    .collect();
                let _ = writeln!(
                    s,
                    r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>"#,
                    path.join(" ")
                );
            }
        }
        let ly = top + 12.0 + 14.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{ly:.1}" fill="{color}">{}</text>"#,
            right + 12.0,
            c.label
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Writes the CSV, the metadata sidecar and, if requested, the SVG chart.
/// Returns the paths written.
pub fn write_outputs(spec: &ExperimentSpec, out: &SweepOutput) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(&spec.out_dir).map_err(io_err(&spec.out_dir))?;
    let csv = spec.out_dir.join(format!("{}.csv", out.name));
    write_csv(&csv, &out.snr_db, &out.curves)?;
    let meta = spec.out_dir.join(format!("{}.meta", out.name));
    fs::write(&meta, render_meta(spec, out)).map_err(io_err(&meta))?;
    let mut paths = vec![csv, meta];
    if spec.svg {
        let log_y = out.curves.iter().all(Curve::is_probability);
        let svg = spec.out_dir.join(format!("{}.svg", out.name));
        fs::write(&svg, render_svg(out, log_y)).map_err(io_err(&svg))?;
        paths.push(svg);
    }
    Ok(paths)
}

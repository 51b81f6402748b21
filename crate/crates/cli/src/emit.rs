//! CSV, SVG and metadata output for experiment reports.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use curvelab_core::ExperimentReport;

#[derive(Debug, thiserror::Error)]
#[error("{path}: {source}")]
pub struct EmitError {
    pub path: PathBuf,
    #[source]
    pub source: io::Error,
}

fn write(path: &Path, text: &str) -> Result<(), EmitError> {
    fs::write(path, text).map_err(|source| EmitError { path: path.to_path_buf(), source })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Header plus rows sorted lexicographically; numbers use the shortest
/// representation that parses back to the same value.
pub fn csv_string(report: &ExperimentReport) -> String {
    let mut rows = report.rows.clone();
    rows.sort_by(|a, b| {
        a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut out = report.columns.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(",");
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn emit_csv(report: &ExperimentReport, path: &Path) -> Result<(), EmitError> {
    write(path, &csv_string(report))
}

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Log-log scatter of the report's plot columns with its fitted line.
pub fn svg_string(report: &ExperimentReport) -> String {
    let (ml, mr, mt, mb) = (80.0, 30.0, 40.0, 60.0);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#, WIDTH / 2.0, escape(&report.name));
    let pts: Vec<(f64, f64)> = match report.plot {
        Some((xi, yi)) => report
            .rows
            .iter()
            .filter_map(|r| Some((*r.get(xi)?, *r.get(yi)?)))
            .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
            .map(|(x, y)| (x.log10(), y.log10()))
            .collect(),
        None => Vec::new(),
    };
    if pts.is_empty() {
        let _ = writeln!(s, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="14" text-anchor="middle">no positive data to plot</text>"#, WIDTH / 2.0, HEIGHT / 2.0);
        s.push_str("</svg>\n");
        return s;
    }
    let (xl, yl) = report.plot.map(|(x, y)| (report.columns[x].clone(), report.columns[y].clone())).unwrap_or_default();
    let span = |v: &mut dyn Iterator<Item = f64>| {
        let (lo, hi) = v.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
        if hi - lo < 1e-9 {
            (lo - 0.5, hi + 0.5)
        } else {
            let pad = 0.05 * (hi - lo);
            (lo - pad, hi + pad)
        }
    };
    let (x0, x1) = span(&mut pts.iter().map(|p| p.0));
    let (y0, y1) = span(&mut pts.iter().map(|p| p.1));
    let px = |x: f64| ml + (x - x0) / (x1 - x0) * (WIDTH - ml - mr);
    let py = |y: f64| HEIGHT - mb - (y - y0) / (y1 - y0) * (HEIGHT - mt - mb);
    let _ = writeln!(
        s,
        r#"<rect x="{ml}" y="{mt}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - ml - mr,
        HEIGHT - mt - mb
    );
    for (lo, hi, vertical) in [(x0, x1, true), (y0, y1, false)] {
        let mut e = lo.ceil() as i32;
        let step = (((hi - lo) / 6.0).ceil() as i32).max(1);
        while (e as f64) <= hi {
            let v = e as f64;
            if vertical {
                let _ = writeln!(s, r#"<line x1="{0:.2}" y1="{1}" x2="{0:.2}" y2="{2}" stroke="black"/><text x="{0:.2}" y="{3}" font-family="sans-serif" font-size="12" text-anchor="middle">1e{e}</text>"#, px(v), HEIGHT - mb, HEIGHT - mb + 6.0, HEIGHT - mb + 22.0);
            } else {
                let _ = writeln!(s, r#"<line x1="{0}" y1="{1:.2}" x2="{2}" y2="{1:.2}" stroke="black"/><text x="{3}" y="{4:.2}" font-family="sans-serif" font-size="12" text-anchor="end">1e{e}</text>"#, ml - 6.0, py(v), ml, ml - 10.0, py(v) + 4.0);
            }
            e += step;
        }
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="14" text-anchor="middle">{} (log scale)</text>"#, WIDTH / 2.0, HEIGHT - 15.0, escape(&xl));
    let _ = writeln!(s, r#"<text x="20" y="{}" font-family="sans-serif" font-size="14" text-anchor="middle" transform="rotate(-90 20 {})">{} (log scale)</text>"#, HEIGHT / 2.0, HEIGHT / 2.0, escape(&yl));
    for (x, y) in &pts {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="steelblue"/>"#, px(*x), py(*y));
    }
    if let Some(fit) = &report.fit {
        // the fit is in natural logs: ln y = intercept + slope ln x
        let line_y = |lx: f64| (fit.intercept + fit.slope * lx * std::f64::consts::LN_10) / std::f64::consts::LN_10;
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="firebrick" stroke-width="2"/>"#,
            px(x0),
            py(line_y(x0)),
            px(x1),
            py(line_y(x1))
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="14" fill="firebrick">slope = {:.4} ± {:.4}</text>"#,
            ml + 12.0,
            mt + 20.0,
            fit.slope,
            fit.slope_stderr
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn emit_svg(report: &ExperimentReport, path: &Path) -> Result<(), EmitError> {
    write(path, &svg_string(report))
}

/// Run metadata kept out of the CSV so that reruns compare byte for byte.
pub fn emit_meta(report: &ExperimentReport, seed: u64, wall_seconds: f64, path: &Path) -> Result<(), EmitError> {
    let mut s = String::new();
    let _ = writeln!(s, "experiment = {}", report.name);
    let _ = writeln!(s, "seed = {seed}");
    let _ = writeln!(s, "version = {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(s, "wall_seconds = {wall_seconds:.3}");
    if let Some(f) = &report.fit {
        let _ = writeln!(s, "slope = {}", f.slope);
        let _ = writeln!(s, "slope_stderr = {}", f.slope_stderr);
        let _ = writeln!(s, "r_squared = {}", f.r_squared);
    }
    for n in &report.notes {
        let _ = writeln!(s, "note = {n}");
    }
    for v in &report.verdicts {
        let _ = writeln!(s, "verdict = {v}");
    }
    write(path, &s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use curvelab_core::fit_exponent;

    fn sample() -> ExperimentReport {
        let mut r = ExperimentReport::new("demo", &["x", "y"]);
        for x in [4.0, 1.0, 2.0, 8.0] {
            r.push_row(vec![x, 5.0 * f64::powf(x, -3.0 / 7.0)]);
        }
        r.fit = Some(fit_exponent(
            &r.rows.iter().map(|r| r[0]).collect::<Vec<_>>(),
            &r.rows.iter().map(|r| r[1]).collect::<Vec<_>>(),
        ).unwrap());
        r.plot = Some((0, 1));
        r
    }

    #[test]
    fn csv_sorted_and_round_trips() {
        let text = csv_string(&sample());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x,y");
        assert!(lines[1].starts_with("1,") && lines[4].starts_with("8,"));
        for (line, x) in lines[1..].iter().zip([1.0, 2.0, 4.0, 8.0]) {
            let y: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
            assert_eq!(y, 5.0 * f64::powf(x, -3.0 / 7.0));
        }
        assert!(text.ends_with('\n') && !text.contains('\r'));
    }

    #[test]
    fn csv_quotes_awkward_headers() {
        let r = ExperimentReport::new("q", &["a,b", "c\"d"]);
        assert_eq!(csv_string(&r), "\"a,b\",\"c\"\"d\"\n");
    }

    #[test]
    fn svg_is_standalone_with_slope_label() {
        let s = svg_string(&sample());
        assert!(s.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\""));
        assert!(s.contains("slope = -0.4286"), "{s}");
        assert_eq!(s.matches("<circle").count(), 4);
        assert!(!s.contains("href"));
        let empty = svg_string(&ExperimentReport::new("none", &["x"]));
        assert!(empty.contains("no positive data"));
    }
}

//! CSV persistence and SVG plots.
//!
//! Reals are written with 17 significant digits (`{:.16e}`), which
//! round-trips every `f64` exactly. Files are written to a temporary sibling
//! and renamed into place, so a failed command never leaves a partial file.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::link::SampleRow;
use crate::{Error, Result};

pub const TRAJECTORY_HEADER: [&str; 3] = ["path_id", "t", "x"];
pub const LINK_HEADER: [&str; 5] = ["lambda", "mu", "alpha", "t", "x"];

pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `path` via a temporary file in the same directory.
pub fn write_atomic<F>(path: &Path, body: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> std::io::Result<()>,
{
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    {
        let mut w = BufWriter::new(tmp.as_file());
        body(&mut w).map_err(|e| Error::io(path, e))?;
        w.flush().map_err(|e| Error::io(path, e))?;
    }
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

/// One path of a trajectory file.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSeries {
    pub path_id: u64,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

pub fn write_trajectories(w: &mut dyn Write, paths: &[PathSeries]) -> std::io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(TRAJECTORY_HEADER)?;
    let mut sorted: Vec<&PathSeries> = paths.iter().collect();
    sorted.sort_by_key(|p| p.path_id);
    for p in sorted {
        let id = p.path_id.to_string();
        for (&t, &x) in p.times.iter().zip(&p.values) {
            out.write_record([id.as_str(), &format_real(t), &format_real(x)])?;
        }
    }
    out.flush()?;
    Ok(())
}

fn check_header(path: &Path, rdr: &mut csv::Reader<impl std::io::Read>, want: &[&str]) -> Result<()> {
    let headers = rdr
        .headers()
        .map_err(|e| Error::format(path, e.to_string()))?
        .clone();
    if headers.iter().ne(want.iter().copied()) {
        return Err(Error::format(
            path,
            format!("header must be `{}`, found `{}`", want.join(","), headers.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    Ok(())
}

fn parse_field<T: std::str::FromStr>(path: &Path, line: u64, name: &str, s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::format(path, format!("line {line}: cannot parse {name} from `{s}`")))
}

/// Reads a `path_id,t,x` file, grouping rows by path in file order.
pub fn read_trajectories(path: &Path) -> Result<Vec<PathSeries>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::format(path, e.to_string()))?;
    check_header(path, &mut rdr, &TRAJECTORY_HEADER)?;
    let mut out: Vec<PathSeries> = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::format(path, e.to_string()))?;
        let line = i as u64 + 2;
        let id: u64 = parse_field(path, line, "path_id", &rec[0])?;
        let t: f64 = parse_field(path, line, "t", &rec[1])?;
        let x: f64 = parse_field(path, line, "x", &rec[2])?;
        match out.last_mut() {
            Some(p) if p.path_id == id => {
                p.times.push(t);
                p.values.push(x);
            }
            _ => out.push(PathSeries {
                path_id: id,
                times: vec![t],
                values: vec![x],
            }),
        }
    }
    Ok(out)
}

pub fn write_link_rows(w: &mut dyn Write, rows: &[SampleRow<f64>]) -> std::io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(LINK_HEADER)?;
    for r in rows {
        out.write_record([r.lambda, r.mu, r.alpha, r.t, r.x].map(format_real))?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a `lambda,mu,alpha,t,x` file.
pub fn read_link_rows(path: &Path) -> Result<Vec<SampleRow<f64>>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::format(path, e.to_string()))?;
    check_header(path, &mut rdr, &LINK_HEADER)?;
    rdr.records()
        .enumerate()
        .map(|(i, rec)| {
            let rec = rec.map_err(|e| Error::format(path, e.to_string()))?;
            let line = i as u64 + 2;
            let mut vals = [0.0; 5];
            for (k, name) in LINK_HEADER.iter().enumerate() {
                vals[k] = parse_field(path, line, name, &rec[k])?;
            }
            Ok(SampleRow {
                lambda: vals[0],
                mu: vals[1],
                alpha: vals[2],
                t: vals[3],
                x: vals[4],
            })
        })
        .collect()
}

pub fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

const SVG_WIDTH: f64 = 800.0;
const SVG_HEIGHT: f64 = 600.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Line plot with one polyline per path, linear axes fitted to the finite
/// data, axis labels `t` and `X_t`. Non-finite points are left out of their
/// polyline.
pub fn render_svg(paths: &[PathSeries], title: &str) -> String {
    let finite = || {
        paths
            .iter()
            .flat_map(|p| p.times.iter().zip(&p.values))
            .filter(|(t, x)| t.is_finite() && x.is_finite())
    };
    let bounds = |get: fn((&f64, &f64)) -> f64| {
        let (lo, hi) = finite().map(get).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if !lo.is_finite() {
            (0.0, 1.0)
        } else if lo == hi {
            let pad = if lo == 0.0 { 0.5 } else { lo.abs() * 0.5 };
            (lo - pad, hi + pad)
        } else {
            (lo, hi)
        }
    };
    let (t0, t1) = bounds(|(t, _)| *t);
    let (x0, x1) = bounds(|(_, x)| *x);
    let px = |t: f64| MARGIN + (t - t0) / (t1 - t0) * (SVG_WIDTH - 2.0 * MARGIN);
    let py = |x: f64| SVG_HEIGHT - MARGIN - (x - x0) / (x1 - x0) * (SVG_HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="30" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        SVG_WIDTH / 2.0,
        escape(title)
    );
    let (left, right, top, bottom) = (MARGIN, SVG_WIDTH - MARGIN, MARGIN, SVG_HEIGHT - MARGIN);
    let _ = writeln!(s, r#"<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>"#);
    let _ = writeln!(s, r#"<line x1="{left}" y1="{top}" x2="{left}" y2="{bottom}" stroke="black"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="14">t</text>"#,
        SVG_WIDTH / 2.0,
        SVG_HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{}" text-anchor="middle" font-family="sans-serif" font-size="14" transform="rotate(-90 20 {})">X_t</text>"#,
        SVG_HEIGHT / 2.0,
        SVG_HEIGHT / 2.0
    );
    for (v, x, anchor) in [(t0, left, "start"), (t1, right, "end")] {
        let _ = writeln!(
            s,
            r#"<text x="{x}" y="{}" text-anchor="{anchor}" font-family="sans-serif" font-size="11">{}</text>"#,
            bottom + 18.0,
            tick(v)
        );
    }
    for (v, y) in [(x0, bottom), (x1, top)] {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end" font-family="sans-serif" font-size="11">{}</text>"#,
            left - 4.0,
            y + 4.0,
            tick(v)
        );
    }

    let mut sorted: Vec<&PathSeries> = paths.iter().collect();
    sorted.sort_by_key(|p| p.path_id);
    for (i, p) in sorted.iter().enumerate() {
        let points: Vec<String> = p
            .times
            .iter()
            .zip(&p.values)
            .filter(|(t, x)| t.is_finite() && x.is_finite())
            .map(|(&t, &x)| format!("{:.2},{:.2}", px(t), py(x)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline data-path-id="{}" fill="none" stroke="{}" stroke-width="1" points="{}"/>"#,
            p.path_id,
            PALETTE[i % PALETTE.len()],
            points.join(" ")
        );
    }
    s.push_str("</svg>\n");
    s
}

fn tick(v: f64) -> String {
    format!("{v:.4}")
}

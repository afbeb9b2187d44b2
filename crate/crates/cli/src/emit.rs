//! CSV emission and atomic file writes.
//!
//! Numbers are written with 17 significant digits (scientific), enough to
//! round-trip any f64, so re-running a command reproduces files byte for
//! byte. Files are written to a temporary sibling and renamed into place.

use std::fs;
use std::io::Write;
use std::path::Path;

use mfjump_core::{JumpPath, PointSystem, RegularityField, SpectrumCurve, TangentReport};

/// 17 significant digits: exact round-trip for f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write-temp-then-rename so readers never observe a half-written file.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

/// `t,z,lambda` in event order.
pub fn points_csv(points: &PointSystem) -> String {
    let mut s = String::from("t,z,lambda\n");
    for e in points.events() {
        s.push_str(&fmt_f64(e.t));
        s.push(',');
        s.push_str(&fmt_f64(e.z));
        s.push(',');
        s.push_str(&fmt_f64(e.lambda));
        s.push('\n');
    }
    s
}

/// `t,left_value,jump_size` per jump.
pub fn path_csv(path: &JumpPath) -> String {
    let mut s = String::from("t,left_value,jump_size\n");
    for k in 0..path.jump_count() {
        s.push_str(&fmt_f64(path.times()[k]));
        s.push(',');
        s.push_str(&fmt_f64(path.left_values()[k]));
        s.push(',');
        s.push_str(&fmt_f64(path.sizes()[k]));
        s.push('\n');
    }
    s
}

/// `t,M(t)` sampled on a uniform grid, for plotting.
pub fn path_samples_csv(path: &JumpPath, resolution: usize) -> String {
    let mut s = String::from("t,M(t)\n");
    for k in 0..=resolution {
        let t = path.horizon() * k as f64 / resolution as f64;
        s.push_str(&fmt_f64(t));
        s.push(',');
        s.push_str(&fmt_f64(path.value(t)));
        s.push('\n');
    }
    s
}

/// `h,d` with empty levels written as the literal `NA`.
pub fn spectrum_csv(curve: &SpectrumCurve) -> String {
    let mut s = String::from("h,d\n");
    for &(h, d) in &curve.samples {
        s.push_str(&fmt_f64(h));
        s.push(',');
        match d {
            Some(v) => s.push_str(&fmt_f64(v)),
            None => s.push_str("NA"),
        }
        s.push('\n');
    }
    s
}

/// `t,delta_hat,h_hat,h_theory` per grid point.
pub fn regularity_csv(field: &RegularityField) -> String {
    let mut s = String::from("t,delta_hat,h_hat,h_theory\n");
    for k in 0..field.len() {
        s.push_str(&fmt_f64(field.grid()[k]));
        s.push(',');
        s.push_str(&fmt_f64(field.delta_hat()[k]));
        s.push(',');
        s.push_str(&fmt_f64(field.h_hat()[k]));
        s.push(',');
        s.push_str(&fmt_f64(field.h_theory()[k]));
        s.push('\n');
    }
    s
}

/// `alpha,ks,n,t0,gamma0`, one row per zoom level.
pub fn tangent_csv(report: &TangentReport) -> String {
    let mut s = String::from("alpha,ks,n,t0,gamma0\n");
    for (alpha, ks) in report.alpha_levels.iter().zip(&report.ks_distances) {
        s.push_str(&fmt_f64(*alpha));
        s.push(',');
        s.push_str(&fmt_f64(*ks));
        s.push(',');
        s.push_str(&report.n_samples.to_string());
        s.push(',');
        s.push_str(&fmt_f64(report.t0));
        s.push(',');
        s.push_str(&fmt_f64(report.gamma0));
        s.push('\n');
    }
    s
}

/// `j,band_size,n_j` redundancy table.
pub fn redundancy_csv(rows: &[(u32, usize, usize)]) -> String {
    let mut s = String::from("j,band_size,n_j\n");
    for &(j, size, nj) in rows {
        s.push_str(&format!("{j},{size},{nj}\n"));
    }
    s
}

/// `delta,fraction` covering table.
pub fn covering_csv(rows: &[(f64, f64)]) -> String {
    let mut s = String::from("delta,fraction\n");
    for &(d, frac) in rows {
        s.push_str(&fmt_f64(d));
        s.push(',');
        s.push_str(&fmt_f64(frac));
        s.push('\n');
    }
    s
}

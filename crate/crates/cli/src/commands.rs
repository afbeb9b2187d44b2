//! The four experiment commands. Each is a pure function of
//! `(config, seed)`: identical inputs reproduce every output file byte
//! for byte.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use mfjump_core::points::PointSystem;
use mfjump_core::regularity::{RegularityField, RegularityParams};
use mfjump_core::sde::{self, simulate_markov, JumpPath};
use mfjump_core::spectrum::{coarse_grained_spectrum, interval_spectrum_curve, local_spectrum_curve};
use mfjump_core::tangent::tangent_report;
use mfjump_core::GammaSpec;

use crate::config::ExperimentConfig;
use crate::emit;
use crate::svg;

#[derive(Debug)]
pub enum CmdError {
    Validation(String),
    Io { path: PathBuf, source: std::io::Error },
}

impl fmt::Display for CmdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CmdError::Validation(msg) => write!(f, "{msg}"),
            CmdError::Io { path, source } => write!(f, "{}: {source}", path.display()),
        }
    }
}

impl std::error::Error for CmdError {}

impl CmdError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CmdError::Validation(_) => 2,
            CmdError::Io { .. } => 3,
        }
    }

    fn invalid(e: impl fmt::Display) -> Self {
        CmdError::Validation(e.to_string())
    }
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CmdError> {
    let path = dir.join(name);
    emit::write_atomic(&path, contents)
        .map_err(|source| CmdError::Io { path: path.clone(), source })?;
    Ok(path)
}

fn ensure_dir(dir: &Path) -> Result<(), CmdError> {
    fs::create_dir_all(dir).map_err(|source| CmdError::Io { path: dir.to_path_buf(), source })
}

struct Run {
    gamma: GammaSpec,
    points: PointSystem,
    path: JumpPath,
    z_max: f64,
}

fn prepare(cfg: &ExperimentConfig) -> Result<Run, CmdError> {
    cfg.validate().map_err(CmdError::invalid)?;
    let gamma = cfg.gamma().map_err(CmdError::invalid)?;
    for w in gamma.warnings() {
        eprintln!("warning: {w}");
    }
    let z_max = cfg.effective_z_max().map_err(CmdError::invalid)?;
    let points =
        PointSystem::generate(cfg.horizon, z_max, cfg.seed).map_err(CmdError::invalid)?;
    let path = simulate_markov(&gamma, &points, cfg.start_value).map_err(CmdError::invalid)?;
    Ok(Run { gamma, points, path, z_max })
}

/// `simulate`: event table, jump table, sampled path, truncation bound.
pub fn cmd_simulate(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>, CmdError> {
    let run = prepare(cfg)?;
    let dir = PathBuf::from(&cfg.out_dir);
    ensure_dir(&dir)?;
    let mut written = Vec::new();
    written.push(write(&dir, "points.csv", &emit::points_csv(&run.points))?);
    written.push(write(&dir, "path.csv", &emit::path_csv(&run.path))?);
    written.push(write(
        &dir,
        "path_samples.csv",
        &emit::path_samples_csv(&run.path, cfg.grid_resolution),
    )?);
    if run.z_max > 0.0 {
        let bound = sde::truncation_error_bound(cfg.epsilon, run.z_max, cfg.horizon)
            .map_err(CmdError::invalid)?;
        println!(
            "simulate: {} events, final value {:.6}, truncation bound {:.3e}",
            run.points.len(),
            run.path.final_value(),
            bound
        );
    } else {
        println!("simulate: 0 events (z_max = 0)");
    }
    Ok(written)
}

/// `spectrum`: interval theory curve, local curves, coarse overlay, SVG.
pub fn cmd_spectrum(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>, CmdError> {
    let run = prepare(cfg)?;
    let dir = PathBuf::from(&cfg.out_dir);
    ensure_dir(&dir)?;
    let grid = cfg.h_grid();
    let (a, b) = cfg.interval;
    let theory = interval_spectrum_curve(&run.path, &run.gamma, a, b, &grid)
        .map_err(CmdError::invalid)?;
    let coarse = coarse_grained_spectrum(&run.path, cfg.coarse_j, cfg.bin_width)
        .map_err(CmdError::invalid)?;
    let mut written = Vec::new();
    written.push(write(&dir, "spectrum_interval.csv", &emit::spectrum_csv(&theory))?);
    written.push(write(&dir, "spectrum_coarse.csv", &emit::spectrum_csv(&coarse))?);
    for (idx, &t) in cfg.local_t.iter().enumerate() {
        let local = local_spectrum_curve(&run.path, &run.gamma, t, &grid)
            .map_err(CmdError::invalid)?;
        written.push(write(
            &dir,
            &format!("spectrum_local_{idx}.csv"),
            &emit::spectrum_csv(&local),
        )?);
    }
    let title = format!("spectrum over ({a}, {b})");
    written.push(write(&dir, "spectrum.svg", &svg::spectrum_svg(&theory, Some(&coarse), &title))?);
    if let Some((h, d)) = theory.apex() {
        println!("spectrum: theory apex d({h:.4}) = {d:.4}, {} of {} grid points defined",
            theory.defined_len(), grid.len());
    }
    Ok(written)
}

/// `diagnose`: regularity field, redundancy table, covering fractions.
pub fn cmd_diagnose(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>, CmdError> {
    let run = prepare(cfg)?;
    let dir = PathBuf::from(&cfg.out_dir);
    ensure_dir(&dir)?;
    let params = RegularityParams {
        j_window: cfg.j_window,
        delta_cap: cfg.delta_cap,
        j_lo: cfg.j_lo,
        j_hi: cfg.j_hi,
        h_cap: cfg.h_cap,
    };
    // interior grid: endpoints excluded so oscillation windows are two-sided
    let n = cfg.grid_resolution;
    let grid: Vec<f64> = (1..n).map(|k| cfg.horizon * k as f64 / n as f64).collect();
    let field = RegularityField::build(&run.points, &run.path, &run.gamma, &grid, &params)
        .map_err(CmdError::invalid)?;

    let j_top = if run.z_max > 0.0 {
        (1.0 + run.z_max).log2().ceil() as u32
    } else {
        0
    };
    let counts = run.points.overlap_counts(0, j_top).map_err(CmdError::invalid)?;
    let rows: Vec<(u32, usize, usize)> = (0..=j_top)
        .map(|j| (j, run.points.band_indices(j).len(), counts[j as usize]))
        .collect();

    let deltas = [1.0, 1.2, 1.5, 2.0, 3.0];
    let covering: Vec<(f64, f64)> = deltas
        .iter()
        .map(|&d| {
            run.points
                .covering_fraction(d, cfg.grid_resolution)
                .map(|frac| (d, frac))
                .map_err(CmdError::invalid)
        })
        .collect::<Result<_, _>>()?;

    let mut written = Vec::new();
    written.push(write(&dir, "regularity.csv", &emit::regularity_csv(&field))?);
    written.push(write(&dir, "redundancy.csv", &emit::redundancy_csv(&rows))?);
    written.push(write(&dir, "covering.csv", &emit::covering_csv(&covering))?);

    let mut deltas_sorted: Vec<f64> = field.delta_hat().to_vec();
    deltas_sorted.sort_unstable_by(f64::total_cmp);
    let median = deltas_sorted[deltas_sorted.len() / 2];
    println!(
        "diagnose: median delta_hat {median:.4}, covering fraction at delta=1: {:.4}",
        covering[0].1
    );
    Ok(written)
}

/// `tangent`: rescaled-increment KS report.
pub fn cmd_tangent(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>, CmdError> {
    let run = prepare(cfg)?;
    let dir = PathBuf::from(&cfg.out_dir);
    ensure_dir(&dir)?;
    let report = tangent_report(
        &run.gamma,
        cfg.t0,
        &run.path,
        &cfg.alpha_levels,
        cfg.tangent_n,
        cfg.tangent_z_base,
        cfg.seed,
    )
    .map_err(CmdError::invalid)?;
    let written = vec![write(&dir, "tangent.csv", &emit::tangent_csv(&report))?];
    let ks: Vec<String> = report
        .alpha_levels
        .iter()
        .zip(&report.ks_distances)
        .map(|(a, d)| format!("alpha={a}: ks={d:.4}"))
        .collect();
    println!("tangent: t0={} gamma0={:.4} {}", report.t0, report.gamma0, ks.join(" "));
    Ok(written)
}

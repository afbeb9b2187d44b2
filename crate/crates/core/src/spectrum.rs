//! Singularity spectra: closed-form theory curves computed from a path's
//! jump data, the constant-index oracle, and a coarse-grained empirical
//! estimator for cross-validation.
//!
//! Spectrum values live in `[0, 1]`; `None` encodes the empty level set
//! (a dimension of "minus infinity"), kept out of the arithmetic so CSV
//! and plots stay finite.
//!
//! The interval spectrum is the supremum of `h * gamma(left limit)` over
//! jumps in the interval, restricted to products at most one. Because the
//! index along a path is nondecreasing, the qualifying jumps form a prefix
//! and the supremum sits at the last of them, so evaluation is a binary
//! search. Products are compared to one inclusively: the boundary value
//! `h = 1/alpha` then yields dimension one for a constant index, matching
//! the stable-subordinator spectrum it degenerates to.

use alloc::vec::Vec;
use core::fmt;

use crate::gamma::GammaSpec;
use crate::sde::{JumpPath, LevyParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumKind {
    LevyOracle,
    LocalTheory,
    IntervalTheory,
    CoarseGrained,
}

/// Sampled map `h -> d(h)`; `None` marks empty levels.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumCurve {
    pub samples: Vec<(f64, Option<f64>)>,
    pub interval: (f64, f64),
    pub kind: SpectrumKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumError {
    BadInterval { a: f64, b: f64, horizon: f64 },
    NoJumpsInInterval { a: f64, b: f64 },
    TimeOutOfRange { t: f64, horizon: f64 },
    NegativeExponent(f64),
    ScaleTooCoarse(u32),
    ScaleTooFine(u32),
    NonPositiveBinWidth(f64),
    EmptyPath,
    NonFinite,
}

impl fmt::Display for SpectrumError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectrumError::BadInterval { a, b, horizon } => {
                write!(f, "need 0 <= a < b <= horizon, got ({a}, {b}) with horizon {horizon}")
            }
            SpectrumError::NoJumpsInInterval { a, b } => {
                write!(f, "no jumps in ({a}, {b}); interval too small for this truncation")
            }
            SpectrumError::TimeOutOfRange { t, horizon } => {
                write!(f, "time {t} outside (0, {horizon})")
            }
            SpectrumError::NegativeExponent(h) => write!(f, "exponent must be >= 0, got {h}"),
            SpectrumError::ScaleTooCoarse(j) => write!(f, "scale j must be >= 4, got {j}"),
            SpectrumError::ScaleTooFine(j) => write!(f, "scale j = {j} too fine (cell count overflows)"),
            SpectrumError::NonPositiveBinWidth(w) => {
                write!(f, "bin width must be positive, got {w}")
            }
            SpectrumError::EmptyPath => write!(f, "path has no jumps"),
            SpectrumError::NonFinite => write!(f, "inputs must be finite"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SpectrumError {}

/// Spectrum of a stable subordinator of index `alpha`: the line
/// `h * alpha` up to `h = 1/alpha`, empty beyond.
pub fn levy_spectrum(params: &LevyParams, h: f64) -> Option<f64> {
    let product = h * params.alpha();
    if product <= 1.0 {
        Some(product)
    } else {
        None
    }
}

fn check_exponent(h: f64) -> Result<(), SpectrumError> {
    if !h.is_finite() {
        return Err(SpectrumError::NonFinite);
    }
    if h < 0.0 {
        return Err(SpectrumError::NegativeExponent(h));
    }
    Ok(())
}

/// Spectrum of the path restricted to the open interval `(a, b)`.
///
/// Errs when the interval holds no jumps: with the untruncated dynamics
/// the jump times are dense, so an empty interval is a truncation
/// artifact the caller should know about.
pub fn interval_spectrum(
    path: &JumpPath,
    gamma: &GammaSpec,
    a: f64,
    b: f64,
    h: f64,
) -> Result<Option<f64>, SpectrumError> {
    check_exponent(h)?;
    if !a.is_finite() || !b.is_finite() || a < 0.0 || a >= b || b > path.horizon() {
        return Err(SpectrumError::BadInterval { a, b, horizon: path.horizon() });
    }
    let lo = path.first_jump_after(a);
    let hi = path.jumps_before(b);
    if lo >= hi {
        return Err(SpectrumError::NoJumpsInInterval { a, b });
    }
    // products h * gamma(left limit) are nondecreasing over jumps, so the
    // qualifying set is a prefix and its supremum is at the last member
    let lefts = &path.left_values()[lo..hi];
    let qualifying = lefts.partition_point(|&m| h * gamma.value(m) <= 1.0);
    if qualifying == 0 {
        Ok(None)
    } else {
        Ok(Some(h * gamma.value(lefts[qualifying - 1])))
    }
}

/// Local spectrum at an interior time.
///
/// At continuity points this is the stable line for the current state's
/// index. At a jump the curve keeps the right-limit index strictly below
/// its edge, switches to the left-limit index on the closed band between
/// the two edges, and is empty beyond.
pub fn local_spectrum(
    path: &JumpPath,
    gamma: &GammaSpec,
    t: f64,
    h: f64,
) -> Result<Option<f64>, SpectrumError> {
    check_exponent(h)?;
    if !t.is_finite() || t <= 0.0 || t >= path.horizon() {
        return Err(SpectrumError::TimeOutOfRange { t, horizon: path.horizon() });
    }
    let g_right = gamma.value(path.value(t));
    if path.jump_at(t).is_none() {
        let product = h * g_right;
        return Ok(if product <= 1.0 { Some(product) } else { None });
    }
    let g_left = gamma.value(path.left_value(t));
    let p_right = h * g_right;
    let p_left = h * g_left;
    if p_right < 1.0 {
        Ok(Some(p_right))
    } else if p_left <= 1.0 {
        Ok(Some(p_left))
    } else {
        Ok(None)
    }
}

/// Interval theory curve sampled over an exponent grid.
pub fn interval_spectrum_curve(
    path: &JumpPath,
    gamma: &GammaSpec,
    a: f64,
    b: f64,
    h_grid: &[f64],
) -> Result<SpectrumCurve, SpectrumError> {
    let mut samples = Vec::with_capacity(h_grid.len());
    for &h in h_grid {
        samples.push((h, interval_spectrum(path, gamma, a, b, h)?));
    }
    Ok(SpectrumCurve { samples, interval: (a, b), kind: SpectrumKind::IntervalTheory })
}

/// Local theory curve at `t` sampled over an exponent grid.
pub fn local_spectrum_curve(
    path: &JumpPath,
    gamma: &GammaSpec,
    t: f64,
    h_grid: &[f64],
) -> Result<SpectrumCurve, SpectrumError> {
    let mut samples = Vec::with_capacity(h_grid.len());
    for &h in h_grid {
        samples.push((h, local_spectrum(path, gamma, t, h)?));
    }
    Ok(SpectrumCurve { samples, interval: (t, t), kind: SpectrumKind::LocalTheory })
}

/// Oracle curve for a constant index, on the same grid convention.
pub fn levy_spectrum_curve(params: &LevyParams, h_grid: &[f64]) -> SpectrumCurve {
    let samples = h_grid.iter().map(|&h| (h, levy_spectrum(params, h))).collect();
    SpectrumCurve { samples, interval: (0.0, f64::INFINITY), kind: SpectrumKind::LevyOracle }
}

/// Coarse-grained spectrum from dyadic increments at scale `j`.
///
/// Each of the `2^j` cells contributes the exponent
/// `-log2(increment) / j` (clamped at zero); empty cells are skipped.
/// Histogram bins of width `bin_width` then give
/// `d(h) = log2(count) / j` at the bin centers.
pub fn coarse_grained_spectrum(
    path: &JumpPath,
    j: u32,
    bin_width: f64,
) -> Result<SpectrumCurve, SpectrumError> {
    if j < 4 {
        return Err(SpectrumError::ScaleTooCoarse(j));
    }
    if j > 30 {
        return Err(SpectrumError::ScaleTooFine(j));
    }
    if !bin_width.is_finite() || bin_width <= 0.0 {
        return Err(SpectrumError::NonPositiveBinWidth(bin_width));
    }
    if path.jump_count() == 0 {
        return Err(SpectrumError::EmptyPath);
    }
    let cells = 1usize << j;
    let width = path.horizon() / cells as f64;
    let mut counts: alloc::collections::BTreeMap<u64, usize> = alloc::collections::BTreeMap::new();
    let mut prev = path.value(0.0);
    for k in 1..=cells {
        let edge = if k == cells { path.horizon() } else { width * k as f64 };
        let cur = path.value(edge);
        let inc = cur - prev;
        prev = cur;
        if inc <= 0.0 {
            continue;
        }
        let h = (-libm::log2(inc) / j as f64).max(0.0);
        let bin = libm::floor(h / bin_width) as u64;
        *counts.entry(bin).or_insert(0) += 1;
    }
    let samples = counts
        .into_iter()
        .map(|(bin, count)| {
            let h = (bin as f64 + 0.5) * bin_width;
            (h, Some(libm::log2(count as f64) / j as f64))
        })
        .collect();
    Ok(SpectrumCurve {
        samples,
        interval: (0.0, path.horizon()),
        kind: SpectrumKind::CoarseGrained,
    })
}

impl SpectrumCurve {
    /// Largest defined value with its exponent, if any.
    pub fn apex(&self) -> Option<(f64, f64)> {
        self.samples
            .iter()
            .filter_map(|&(h, d)| d.map(|v| (h, v)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
    }

    pub fn defined_len(&self) -> usize {
        self.samples.iter().filter(|(_, d)| d.is_some()).count()
    }
}

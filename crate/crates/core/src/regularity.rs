//! Pointwise regularity: approximation rates from the point system and
//! Hölder exponents from paths.
//!
//! The approximation rate at `t` asks how well `t` is approached by event
//! times relative to their radii; for a nondecreasing pure-jump path the
//! pointwise exponent then satisfies `h(t) = 1/(delta_t * gamma(M(t)))` at
//! continuity points, which is what the empirical estimator is checked
//! against. Finite truncation forces both quantities onto finite scale
//! windows: the rate looks only at the `j_window` finest nonempty radius
//! bands and the exponent regresses oscillations over dyadic radii.

use alloc::vec::Vec;
use core::fmt;

use crate::gamma::GammaSpec;
use crate::points::{BandDecomposition, PointSystem};
use crate::sde::JumpPath;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularityParams {
    /// How many of the finest nonempty bands feed the rate estimate.
    pub j_window: usize,
    /// Rates are clamped to this ceiling; exact event hits return it.
    pub delta_cap: f64,
    /// Coarsest dyadic oscillation scale `2^-j_lo`.
    pub j_lo: i32,
    /// Finest dyadic oscillation scale `2^-j_hi`.
    pub j_hi: i32,
    /// Exponent ceiling for degenerate (jump-free) windows.
    pub h_cap: f64,
}

impl Default for RegularityParams {
    fn default() -> Self {
        RegularityParams { j_window: 4, delta_cap: 16.0, j_lo: 6, j_hi: 14, h_cap: 16.0 }
    }
}

/// Hölder estimate together with a degeneracy flag (fewer than two usable
/// scales in the regression window).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderEstimate {
    pub h: f64,
    pub degenerate: bool,
}

/// Per-grid-point regularity record.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularityField {
    grid: Vec<f64>,
    delta_hat: Vec<f64>,
    h_hat: Vec<f64>,
    h_theory: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RegularityError {
    EmptyPointSystem,
    ZeroWindow,
    CapBelowOne(f64),
    NonPositiveRadius(f64),
    WindowOutOfRange { t: f64, r: f64 },
    BadScaleRange { j_lo: i32, j_hi: i32 },
    NonPositiveCap(f64),
    DeltaBelowOne(f64),
    NonFinite,
}

impl fmt::Display for RegularityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegularityError::EmptyPointSystem => write!(f, "point system has no events"),
            RegularityError::ZeroWindow => write!(f, "band window must be positive"),
            RegularityError::CapBelowOne(c) => write!(f, "delta cap must exceed 1, got {c}"),
            RegularityError::NonPositiveRadius(r) => {
                write!(f, "oscillation radius must be positive, got {r}")
            }
            RegularityError::WindowOutOfRange { t, r } => {
                write!(f, "window [{}, {}] misses the path domain", t - r, t + r)
            }
            RegularityError::BadScaleRange { j_lo, j_hi } => {
                write!(f, "scale range requires j_lo < j_hi, got [{j_lo}, {j_hi}]")
            }
            RegularityError::NonPositiveCap(c) => write!(f, "cap must be positive, got {c}"),
            RegularityError::DeltaBelowOne(d) => write!(f, "delta_hat must be >= 1, got {d}"),
            RegularityError::NonFinite => write!(f, "inputs must be finite"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for RegularityError {}

/// Best approach exponent of one event: the supremum of `delta` with
/// `|t - t_n| < lambda^delta`. Negative when the event is useless.
fn event_rate(distance: f64, lambda: f64, delta_cap: f64) -> f64 {
    if distance == 0.0 {
        return delta_cap;
    }
    if lambda >= 1.0 {
        // unit radius covers t at every power, or never
        return if distance < 1.0 { delta_cap } else { f64::NEG_INFINITY };
    }
    libm::log(distance) / libm::log(lambda)
}

/// Finite-scale approximation rate of `t` by the point system.
///
/// Within each of the `j_window` finest nonempty bands, takes the best
/// event rate; the result is `max(1, best over bands)` clamped to
/// `delta_cap`. Events at exactly `t` return the cap.
pub fn approximation_rate(
    bands: &BandDecomposition,
    t: f64,
    j_window: usize,
    delta_cap: f64,
) -> Result<f64, RegularityError> {
    if bands.is_empty() {
        return Err(RegularityError::EmptyPointSystem);
    }
    if j_window == 0 {
        return Err(RegularityError::ZeroWindow);
    }
    if !delta_cap.is_finite() || delta_cap <= 1.0 {
        return Err(RegularityError::CapBelowOne(delta_cap));
    }
    if !t.is_finite() {
        return Err(RegularityError::NonFinite);
    }
    let selected: Vec<u32> = {
        let all: Vec<u32> = bands.nonempty_bands().collect();
        let skip = all.len().saturating_sub(j_window);
        all[skip..].to_vec()
    };
    let mut best = 1.0_f64;
    for j in selected {
        best = best.max(band_rate(bands.band(j), j, t, best, delta_cap));
        if best >= delta_cap {
            return Ok(delta_cap);
        }
    }
    Ok(best.min(delta_cap))
}

/// Best event rate within one band, scanning outward from `t`.
///
/// An event at distance `d` can only beat `floor` if `d < 2^(-j*floor)`,
/// because band-`j` radii are at most `2^-j`; the outward scan stops at
/// that threshold, which keeps the expected cost O(1) per band.
fn band_rate(band: &[(f64, f64)], j: u32, t: f64, floor: f64, delta_cap: f64) -> f64 {
    let mut best = floor;
    let pos = band.partition_point(|&(x, _)| x < t);
    let mut left = pos;
    let mut right = pos;
    loop {
        let dl = if left > 0 { t - band[left - 1].0 } else { f64::INFINITY };
        let dr = if right < band.len() { band[right].0 - t } else { f64::INFINITY };
        let (d, lambda) = if dl <= dr {
            if left == 0 {
                break;
            }
            left -= 1;
            (dl, band[left].1)
        } else {
            right += 1;
            (dr, band[right - 1].1)
        };
        if d >= libm::exp2(-(j as f64) * best) {
            break;
        }
        best = best.max(event_rate(d, lambda, delta_cap));
        if best >= delta_cap {
            return delta_cap;
        }
    }
    best
}

/// Two-sided oscillation `M(min(t+r, horizon)) - M(max(t-r, 0))`.
///
/// For a nondecreasing path this is the full oscillation over the clamped
/// window, since the best local approximation is the constant level.
pub fn oscillation(path: &JumpPath, t: f64, r: f64) -> Result<f64, RegularityError> {
    if !t.is_finite() || !r.is_finite() {
        return Err(RegularityError::NonFinite);
    }
    if r <= 0.0 {
        return Err(RegularityError::NonPositiveRadius(r));
    }
    if t - r > path.horizon() || t + r < 0.0 {
        return Err(RegularityError::WindowOutOfRange { t, r });
    }
    let lo = (t - r).max(0.0);
    let hi = (t + r).min(path.horizon());
    Ok(path.value(hi) - path.value(lo))
}

/// Least-squares exponent from oscillations over the dyadic scales
/// `2^-j`, `j` in `[j_lo, j_hi]`.
///
/// The slope of `log2 oscillation` against `j` is `-h`; windows with no
/// jumps contribute nothing, and fewer than two usable scales yield the
/// cap with the degenerate flag set. The estimate is clamped to
/// `[0, h_cap]`.
pub fn holder_estimate(
    path: &JumpPath,
    t: f64,
    j_lo: i32,
    j_hi: i32,
    h_cap: f64,
) -> Result<HolderEstimate, RegularityError> {
    if j_lo >= j_hi {
        return Err(RegularityError::BadScaleRange { j_lo, j_hi });
    }
    if !h_cap.is_finite() || h_cap <= 0.0 {
        return Err(RegularityError::NonPositiveCap(h_cap));
    }
    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    for j in j_lo..=j_hi {
        let r = libm::exp2(-(j as f64));
        let osc = oscillation(path, t, r)?;
        if osc > 0.0 {
            xs.push(j as f64);
            ys.push(libm::log2(osc));
        }
    }
    if xs.len() < 2 {
        return Ok(HolderEstimate { h: h_cap, degenerate: true });
    }
    let slope = ls_slope(&xs, &ys);
    Ok(HolderEstimate { h: (-slope).clamp(0.0, h_cap), degenerate: false })
}

fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

/// Exponent predicted from the rate and the path state:
/// `1 / (delta_hat * gamma(M(t)))`.
pub fn theoretical_exponent(
    path: &JumpPath,
    gamma: &GammaSpec,
    delta_hat: f64,
    t: f64,
) -> Result<f64, RegularityError> {
    if !delta_hat.is_finite() || !t.is_finite() {
        return Err(RegularityError::NonFinite);
    }
    if delta_hat < 1.0 {
        return Err(RegularityError::DeltaBelowOne(delta_hat));
    }
    Ok(1.0 / (delta_hat * gamma.value(path.value(t))))
}

impl RegularityField {
    /// Evaluate rate, empirical exponent, and theoretical exponent on a
    /// grid of times. The band decomposition is built once and reused.
    pub fn build(
        points: &PointSystem,
        path: &JumpPath,
        gamma: &GammaSpec,
        grid: &[f64],
        params: &RegularityParams,
    ) -> Result<Self, RegularityError> {
        let bands = points.band_decomposition();
        let mut delta_hat = Vec::with_capacity(grid.len());
        let mut h_hat = Vec::with_capacity(grid.len());
        let mut h_theory = Vec::with_capacity(grid.len());
        for &t in grid {
            let d = approximation_rate(&bands, t, params.j_window, params.delta_cap)?;
            let h = holder_estimate(path, t, params.j_lo, params.j_hi, params.h_cap)?;
            let ht = theoretical_exponent(path, gamma, d, t)?;
            delta_hat.push(d);
            h_hat.push(h.h);
            h_theory.push(ht);
        }
        Ok(RegularityField { grid: grid.to_vec(), delta_hat, h_hat, h_theory })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn delta_hat(&self) -> &[f64] {
        &self.delta_hat
    }

    pub fn h_hat(&self) -> &[f64] {
        &self.h_hat
    }

    pub fn h_theory(&self) -> &[f64] {
        &self.h_theory
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }
}

//! Tangent-process statistics: rescaled increments of the state-dependent
//! process against exact stable-subordinator samples.
//!
//! Zooming in at a time `t0`, the increment `(M(t0 + a) - M(t0)) / a^(1/g0)`
//! with `g0 = gamma(M(t0))` approaches, as `a` shrinks, the law of `S_1`
//! for a stable subordinator of index `g0` with jump intensity
//! `g0 * u^(-1-g0) du`, i.e. Laplace transform
//! `E[exp(-l S_1)] = exp(-Gamma(1-g0) * l^g0)`. The report quantifies the
//! approach with two-sample Kolmogorov-Smirnov distances per zoom level.

use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::gamma::GammaSpec;
use crate::points::{PointError, PointSystem};
use crate::rng::{clamp_open01, derive_seed};
use crate::sde::{simulate_markov, JumpPath, SdeError};

/// Expected event count per rescaled sample is capped at this budget so
/// ensembles stay tractable; see [`level_z_max`].
pub const LEVEL_EVENT_BUDGET: f64 = 1500.0;

/// Target for the truncation bound after rescaling, as a fraction of the
/// tangent scale `alpha^(1/gamma0)`.
pub const LEVEL_TRUNCATION_FACTOR: f64 = 1e-3;

/// KS distances of rescaled-increment ensembles against the exact stable
/// reference, one entry per zoom level.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentReport {
    pub alpha_levels: Vec<f64>,
    pub ks_distances: Vec<f64>,
    pub n_samples: usize,
    pub t0: f64,
    pub gamma0: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TangentError {
    IndexOutOfRange(f64),
    ZeroSamples,
    EmptySample,
    BadLevel(f64),
    LevelsNotDecreasing,
    NoLevels,
    NegativeState(f64),
    TimeOutOfRange { t0: f64, horizon: f64 },
    NonFinite,
    Point(PointError),
    Sde(SdeError),
}

impl fmt::Display for TangentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TangentError::IndexOutOfRange(a) => write!(f, "index must lie in (0, 1), got {a}"),
            TangentError::ZeroSamples => write!(f, "sample count must be positive"),
            TangentError::EmptySample => write!(f, "samples must be nonempty"),
            TangentError::BadLevel(a) => write!(f, "zoom level must lie in (0, 1], got {a}"),
            TangentError::LevelsNotDecreasing => {
                write!(f, "zoom levels must be strictly decreasing")
            }
            TangentError::NoLevels => write!(f, "at least one zoom level required"),
            TangentError::NegativeState(m) => write!(f, "state must be nonnegative, got {m}"),
            TangentError::TimeOutOfRange { t0, horizon } => {
                write!(f, "t0 = {t0} outside [0, {horizon}]")
            }
            TangentError::NonFinite => write!(f, "inputs must be finite"),
            TangentError::Point(e) => write!(f, "point generation failed: {e}"),
            TangentError::Sde(e) => write!(f, "simulation failed: {e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for TangentError {}

impl From<PointError> for TangentError {
    fn from(e: PointError) -> Self {
        TangentError::Point(e)
    }
}

impl From<SdeError> for TangentError {
    fn from(e: SdeError) -> Self {
        TangentError::Sde(e)
    }
}

/// `n` independent draws of `S_1` for the stable subordinator of index
/// `alpha0` with Laplace transform `exp(-Gamma(1-alpha0) * l^alpha0)`.
///
/// Kanter's representation gives the unit one-sided stable variable
/// exactly; multiplying by `Gamma(1-alpha0)^(1/alpha0)` sets the scale
/// that the jump intensity `alpha0 * u^(-1-alpha0) du` demands.
pub fn stable_subordinator_samples(
    alpha0: f64,
    n: usize,
    seed: u64,
) -> Result<Vec<f64>, TangentError> {
    if !alpha0.is_finite() {
        return Err(TangentError::NonFinite);
    }
    if alpha0 <= 0.0 || alpha0 >= 1.0 {
        return Err(TangentError::IndexOutOfRange(alpha0));
    }
    if n == 0 {
        return Err(TangentError::ZeroSamples);
    }
    let scale = libm::pow(libm::tgamma(1.0 - alpha0), 1.0 / alpha0);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let u = core::f64::consts::PI * clamp_open01(rng.random::<f64>());
        let w = -libm::log(clamp_open01(rng.random::<f64>()));
        let s1 = libm::sin(alpha0 * u) / libm::pow(libm::sin(u), 1.0 / alpha0);
        let s2 = libm::pow(libm::sin((1.0 - alpha0) * u) / w, (1.0 - alpha0) / alpha0);
        out.push(scale * s1 * s2);
    }
    Ok(out)
}

/// Rescaled increments over `n` independent restarts: simulate from state
/// `m_t0` on `[0, alpha]` and return `(M(alpha) - m_t0) / alpha^(1/g0)`.
pub fn rescaled_increment_samples(
    gamma: &GammaSpec,
    m_t0: f64,
    alpha: f64,
    n: usize,
    z_max: f64,
    seed: u64,
) -> Result<Vec<f64>, TangentError> {
    if !m_t0.is_finite() || !alpha.is_finite() || !z_max.is_finite() {
        return Err(TangentError::NonFinite);
    }
    if m_t0 < 0.0 {
        return Err(TangentError::NegativeState(m_t0));
    }
    if alpha <= 0.0 || alpha > 1.0 {
        return Err(TangentError::BadLevel(alpha));
    }
    if n == 0 {
        return Err(TangentError::ZeroSamples);
    }
    let gamma0 = gamma.value(m_t0);
    let denom = libm::pow(alpha, 1.0 / gamma0);
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let points = PointSystem::generate(alpha, z_max, derive_seed(seed, k as u64))?;
        let path = simulate_markov(gamma, &points, m_t0)?;
        out.push((path.final_value() - m_t0) / denom);
    }
    Ok(out)
}

/// Two-sample Kolmogorov-Smirnov statistic: the largest gap between the
/// empirical CDFs over the merged support.
pub fn ks_distance(a: &[f64], b: &[f64]) -> Result<f64, TangentError> {
    if a.is_empty() || b.is_empty() {
        return Err(TangentError::EmptySample);
    }
    let mut xs: Vec<f64> = a.to_vec();
    let mut ys: Vec<f64> = b.to_vec();
    xs.sort_unstable_by(f64::total_cmp);
    ys.sort_unstable_by(f64::total_cmp);
    let step_x = 1.0 / xs.len() as f64;
    let step_y = 1.0 / ys.len() as f64;
    let mut i = 0usize;
    let mut j = 0usize;
    let mut diff = 0.0_f64;
    let mut worst = 0.0_f64;
    while i < xs.len() || j < ys.len() {
        let take_x = match (xs.get(i), ys.get(j)) {
            (Some(x), Some(y)) => x <= y,
            (Some(_), None) => true,
            _ => false,
        };
        if take_x {
            // absorb ties within and across samples at this point
            let x = xs[i];
            while i < xs.len() && xs[i] == x {
                diff += step_x;
                i += 1;
            }
            while j < ys.len() && ys[j] == x {
                diff -= step_y;
                j += 1;
            }
        } else {
            let y = ys[j];
            while j < ys.len() && ys[j] == y {
                diff -= step_y;
                j += 1;
            }
        }
        worst = worst.max(diff.abs());
    }
    Ok(worst)
}

/// Mark truncation level for one zoom window.
///
/// Ideally the expected omitted mass should stay below
/// `LEVEL_TRUNCATION_FACTOR * alpha^(1/gamma0)` so it is negligible after
/// rescaling; the sharpest closed-form bound uses the largest index the
/// spec can reach. Near index one that demand explodes, so the level is
/// capped where the expected event count hits [`LEVEL_EVENT_BUDGET`], and
/// the caller-provided floor `z_base` always applies.
pub fn level_z_max(gamma: &GammaSpec, gamma0: f64, alpha: f64, z_base: f64) -> f64 {
    let tol = LEVEL_TRUNCATION_FACTOR * libm::pow(alpha, 1.0 / gamma0);
    let gs = gamma.max_value();
    let ratio = gs / (1.0 - gs);
    // bound: alpha * ratio * (1+z)^(-1/ratio) <= tol
    let ln_required = ratio * libm::log(alpha * ratio / tol);
    let cap = LEVEL_EVENT_BUDGET / alpha;
    let z_needed = if ln_required < libm::log(1.0 + cap) {
        libm::exp(ln_required) - 1.0
    } else {
        cap
    };
    z_needed.max(z_base)
}

/// Build rescaled ensembles at every zoom level and compare them against
/// one shared exact stable reference of the same size.
pub fn tangent_report(
    gamma: &GammaSpec,
    t0: f64,
    base_path: &JumpPath,
    alpha_levels: &[f64],
    n: usize,
    z_max: f64,
    seed: u64,
) -> Result<TangentReport, TangentError> {
    if n == 0 {
        return Err(TangentError::ZeroSamples);
    }
    if alpha_levels.is_empty() {
        return Err(TangentError::NoLevels);
    }
    for pair in alpha_levels.windows(2) {
        if pair[1] >= pair[0] {
            return Err(TangentError::LevelsNotDecreasing);
        }
    }
    for &a in alpha_levels {
        if !a.is_finite() || a <= 0.0 || a > 1.0 {
            return Err(TangentError::BadLevel(a));
        }
    }
    if !t0.is_finite() || t0 < 0.0 || t0 > base_path.horizon() {
        return Err(TangentError::TimeOutOfRange { t0, horizon: base_path.horizon() });
    }
    let m_t0 = base_path.value(t0);
    let gamma0 = gamma.value(m_t0);
    let reference = stable_subordinator_samples(gamma0, n, derive_seed(seed, 0))?;
    let mut ks_distances = Vec::with_capacity(alpha_levels.len());
    for (k, &alpha) in alpha_levels.iter().enumerate() {
        let z_level = level_z_max(gamma, gamma0, alpha, z_max);
        let samples = rescaled_increment_samples(
            gamma,
            m_t0,
            alpha,
            n,
            z_level,
            derive_seed(seed, 1 + k as u64),
        )?;
        ks_distances.push(ks_distance(&samples, &reference)?);
    }
    Ok(TangentReport {
        alpha_levels: alpha_levels.to_vec(),
        ks_distances,
        n_samples: n,
        t0,
        gamma0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn ks_examples() {
        let a = [1.0, 2.0, 3.0];
        assert_eq!(ks_distance(&a, &a).unwrap(), 0.0);
        let b = [2.5, 2.9, 3.5];
        let c = [0.0, 0.5, 1.0];
        // disjoint supports
        assert_eq!(ks_distance(&[0.0, 0.4, 1.0], &[2.0, 2.5, 3.0]).unwrap(), 1.0);
        // {1,2,3} vs {1,2,4} -> 1/3
        let d = ks_distance(&[1.0, 2.0, 3.0], &[1.0, 2.0, 4.0]).unwrap();
        assert!((d - 1.0 / 3.0).abs() < 1e-15);
        // symmetry
        assert_eq!(ks_distance(&b, &c).unwrap(), ks_distance(&c, &b).unwrap());
        assert!(ks_distance(&[], &a).is_err());
    }

    #[test]
    fn ks_bounds() {
        let a = [0.3, 0.3, 0.3];
        let b = [0.3, 0.3];
        // identical point masses
        assert_eq!(ks_distance(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn stable_samples_are_positive_and_deterministic() {
        let s1 = stable_subordinator_samples(0.5, 200, 9).unwrap();
        let s2 = stable_subordinator_samples(0.5, 200, 9).unwrap();
        assert_eq!(s1, s2);
        assert!(s1.iter().all(|&x| x > 0.0 && x.is_finite()));
        assert!(stable_subordinator_samples(1.0, 10, 0).is_err());
        assert!(stable_subordinator_samples(0.5, 0, 0).is_err());
    }

    #[test]
    fn stable_laplace_transform_rough() {
        // quick check at modest n; the calibrated version runs in the
        // acceptance suite with n = 1e5
        let s = stable_subordinator_samples(0.5, 20_000, 4242).unwrap();
        let mean_exp: f64 = s.iter().map(|&x| libm::exp(-x)).sum::<f64>() / s.len() as f64;
        let expected = libm::exp(-libm::sqrt(core::f64::consts::PI));
        assert!((mean_exp - expected).abs() < 0.02, "{mean_exp} vs {expected}");
    }

    #[test]
    fn rescaled_samples_nonnegative_and_zero_without_events() {
        let gamma = GammaSpec::constant(0.5, 0.4).unwrap();
        // z_max = 0: no events ever, all samples zero
        let s = rescaled_increment_samples(&gamma, 0.0, 0.5, 16, 0.0, 3).unwrap();
        assert!(s.iter().all(|&x| x == 0.0));
        let s = rescaled_increment_samples(&gamma, 1.0, 0.1, 64, 200.0, 3).unwrap();
        assert!(s.iter().all(|&x| x >= 0.0));
        assert!(rescaled_increment_samples(&gamma, 0.0, 0.5, 0, 1.0, 3).is_err());
        assert!(rescaled_increment_samples(&gamma, -1.0, 0.5, 4, 1.0, 3).is_err());
    }

    #[test]
    fn forced_single_event_rescaling() {
        // one event (t = alpha/2, z = 3), gamma = 0.5, alpha = 0.01:
        // jump 0.0625, rescaled by alpha^2 -> 625
        let gamma = GammaSpec::constant(0.5, 0.4).unwrap();
        let alpha = 0.01;
        let ps = PointSystem::from_events(&[(alpha / 2.0, 3.0)], alpha).unwrap();
        let path = simulate_markov(&gamma, &ps, 0.0).unwrap();
        let sample = (path.final_value() - 0.0) / libm::pow(alpha, 2.0);
        assert!((sample - 625.0).abs() < 1e-9);
    }

    #[test]
    fn control_schedule_keeps_constant_event_budget() {
        let gamma = GammaSpec::constant(0.5, 0.4).unwrap();
        for &alpha in &[0.1, 0.01, 0.001] {
            let z = level_z_max(&gamma, 0.5, alpha, 0.0);
            let events = alpha * z;
            assert!((events - 1000.0).abs() < 2.0, "alpha {alpha}: {events}");
        }
        // steep specs hit the budget cap instead
        let fig = GammaSpec::new(vec![(0.0, 0.5), (1.6, 0.9)], 0.05).unwrap();
        let z = level_z_max(&fig, 0.5, 0.1, 0.0);
        assert!((0.1 * z - LEVEL_EVENT_BUDGET).abs() < 2.0);
    }

    #[test]
    fn report_validates_inputs() {
        let gamma = GammaSpec::constant(0.5, 0.4).unwrap();
        let ps = PointSystem::generate(1.0, 100.0, 5).unwrap();
        let path = simulate_markov(&gamma, &ps, 0.0).unwrap();
        assert!(matches!(
            tangent_report(&gamma, 0.5, &path, &[0.1, 0.01], 0, 10.0, 1),
            Err(TangentError::ZeroSamples)
        ));
        assert!(matches!(
            tangent_report(&gamma, 0.5, &path, &[0.01, 0.1], 8, 10.0, 1),
            Err(TangentError::LevelsNotDecreasing)
        ));
        assert!(matches!(
            tangent_report(&gamma, 2.0, &path, &[0.1], 8, 10.0, 1),
            Err(TangentError::TimeOutOfRange { .. })
        ));
        let report = tangent_report(&gamma, 0.5, &path, &[0.2, 0.1], 64, 10.0, 1).unwrap();
        assert_eq!(report.ks_distances.len(), 2);
        assert!(report.ks_distances.iter().all(|&d| (0.0..=1.0).contains(&d)));
        assert_eq!(report.gamma0, 0.5);
    }
}

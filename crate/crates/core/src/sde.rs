//! Event-driven exact integration of the jump dynamics.
//!
//! At event `(t, z)` the process jumps by `(1 + z)^(-1/gamma(state))`,
//! where `state` is the left limit just before `t`. Replaying the sorted
//! event list therefore integrates the dynamics exactly: there is no time
//! discretization anywhere. A constant index produces the coupled
//! subordinator driven by the same events, which sandwiches the
//! state-dependent path increment by increment.
//!
//! Truncating marks at `z_max` drops jumps below `(1 + z_max)^(-1/gamma)`;
//! [`truncation_error_bound`] gives the closed-form expected mass lost.

use alloc::vec::Vec;
use core::fmt;

use crate::gamma::GammaSpec;
use crate::points::PointSystem;

/// Nondecreasing cadlag step path: jump times, sizes, left limits.
///
/// `value(t)` includes jumps at exactly `t` (right continuity);
/// `left_value(t)` excludes them.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpPath {
    jump_times: Vec<f64>,
    jump_sizes: Vec<f64>,
    left_values: Vec<f64>,
    /// value right after each jump: `left_values[k] + jump_sizes[k]`
    cumulative: Vec<f64>,
    start_value: f64,
    horizon: f64,
}

/// Stability index of a constant-index subordinator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevyParams {
    alpha: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SdeError {
    IndexOutOfRange(f64),
    NegativeMark(f64),
    NegativeStart(f64),
    NonFinite,
    MismatchedLengths { path: usize, points: usize },
    EpsilonOutOfRange(f64),
    NonPositive(&'static str),
    JumpFloorOutOfRange(f64),
}

impl fmt::Display for SdeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SdeError::IndexOutOfRange(b) => write!(f, "index must lie in (0, 1), got {b}"),
            SdeError::NegativeMark(z) => write!(f, "mark must be nonnegative, got {z}"),
            SdeError::NegativeStart(s) => write!(f, "start value must be nonnegative, got {s}"),
            SdeError::NonFinite => write!(f, "inputs must be finite"),
            SdeError::MismatchedLengths { path, points } => write!(
                f,
                "path has {path} jumps but the point system has {points} events"
            ),
            SdeError::EpsilonOutOfRange(e) => write!(f, "epsilon must lie in (0, 1/2), got {e}"),
            SdeError::NonPositive(what) => write!(f, "{what} must be positive"),
            SdeError::JumpFloorOutOfRange(u) => {
                write!(f, "jump floor must lie in (0, 1), got {u}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SdeError {}

impl LevyParams {
    pub fn new(alpha: f64) -> Result<Self, SdeError> {
        if !alpha.is_finite() {
            return Err(SdeError::NonFinite);
        }
        if alpha <= 0.0 || alpha >= 1.0 {
            return Err(SdeError::IndexOutOfRange(alpha));
        }
        Ok(LevyParams { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

#[inline]
pub(crate) fn kernel_unchecked(beta: f64, z: f64) -> f64 {
    libm::pow(1.0 + z, -1.0 / beta)
}

/// Jump-size kernel `(1 + z)^(-1/beta)`.
///
/// Increasing in `beta`, decreasing in `z`, with values in `(0, 1]`.
pub fn jump_kernel(beta: f64, z: f64) -> Result<f64, SdeError> {
    if !beta.is_finite() || !z.is_finite() {
        return Err(SdeError::NonFinite);
    }
    if beta <= 0.0 || beta >= 1.0 {
        return Err(SdeError::IndexOutOfRange(beta));
    }
    if z < 0.0 {
        return Err(SdeError::NegativeMark(z));
    }
    Ok(kernel_unchecked(beta, z))
}

/// Replay the events in time order with the state-dependent index: at each
/// event the jump is `(1 + z)^(-1/gamma(left limit))`.
pub fn simulate_markov(
    gamma: &GammaSpec,
    points: &PointSystem,
    start_value: f64,
) -> Result<JumpPath, SdeError> {
    if !start_value.is_finite() {
        return Err(SdeError::NonFinite);
    }
    if start_value < 0.0 {
        return Err(SdeError::NegativeStart(start_value));
    }
    Ok(replay(points, start_value, |state| gamma.value(state)))
}

/// Constant-index subordinator driven by the same event system.
pub fn simulate_levy(params: &LevyParams, points: &PointSystem) -> JumpPath {
    let alpha = params.alpha();
    replay(points, 0.0, move |_| alpha)
}

fn replay(points: &PointSystem, start_value: f64, index_at: impl Fn(f64) -> f64) -> JumpPath {
    let n = points.len();
    let mut jump_times = Vec::with_capacity(n);
    let mut jump_sizes = Vec::with_capacity(n);
    let mut left_values = Vec::with_capacity(n);
    let mut cumulative = Vec::with_capacity(n);
    let mut state = start_value;
    for e in points.events() {
        let size = kernel_unchecked(index_at(state), e.z);
        jump_times.push(e.t);
        jump_sizes.push(size);
        left_values.push(state);
        state += size;
        cumulative.push(state);
    }
    JumpPath {
        jump_times,
        jump_sizes,
        left_values,
        cumulative,
        start_value,
        horizon: points.horizon(),
    }
}

impl JumpPath {
    /// Rebuild a path from stored jump times and sizes, e.g. data read
    /// back from disk. Left limits and running values are recomputed.
    pub fn from_parts(
        jump_times: Vec<f64>,
        jump_sizes: Vec<f64>,
        start_value: f64,
        horizon: f64,
    ) -> Result<Self, SdeError> {
        if jump_times.len() != jump_sizes.len() {
            return Err(SdeError::MismatchedLengths {
                path: jump_times.len(),
                points: jump_sizes.len(),
            });
        }
        if !start_value.is_finite() || !horizon.is_finite() || horizon <= 0.0 {
            return Err(SdeError::NonFinite);
        }
        if start_value < 0.0 {
            return Err(SdeError::NegativeStart(start_value));
        }
        for pair in jump_times.windows(2) {
            if !(pair[1] >= pair[0]) {
                return Err(SdeError::NonFinite);
            }
        }
        let mut left_values = Vec::with_capacity(jump_sizes.len());
        let mut cumulative = Vec::with_capacity(jump_sizes.len());
        let mut state = start_value;
        for (&t, &s) in jump_times.iter().zip(&jump_sizes) {
            if !t.is_finite() || t < 0.0 || t > horizon || !(s > 0.0) || s > 1.0 {
                return Err(SdeError::NonFinite);
            }
            left_values.push(state);
            state += s;
            cumulative.push(state);
        }
        Ok(JumpPath { jump_times, jump_sizes, left_values, cumulative, start_value, horizon })
    }

    /// Right-continuous evaluation: start value plus all jumps at or
    /// before `t`.
    pub fn value(&self, t: f64) -> f64 {
        let idx = self.jump_times.partition_point(|&x| x <= t);
        if idx == 0 {
            self.start_value
        } else {
            self.cumulative[idx - 1]
        }
    }

    /// Left limit at `t`: jumps strictly before `t` only.
    pub fn left_value(&self, t: f64) -> f64 {
        let idx = self.jump_times.partition_point(|&x| x < t);
        if idx == 0 {
            self.start_value
        } else {
            self.cumulative[idx - 1]
        }
    }

    /// Index of the jump at exactly `t`, if any.
    pub fn jump_at(&self, t: f64) -> Option<usize> {
        self.jump_times.binary_search_by(|x| x.total_cmp(&t)).ok()
    }

    /// Increment `value(t) - value(s)`; nonnegative for `s <= t`.
    pub fn increment(&self, s: f64, t: f64) -> f64 {
        self.value(t) - self.value(s)
    }

    pub fn final_value(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(self.start_value)
    }

    pub fn jump_count(&self) -> usize {
        self.jump_times.len()
    }

    pub fn times(&self) -> &[f64] {
        &self.jump_times
    }

    pub fn sizes(&self) -> &[f64] {
        &self.jump_sizes
    }

    pub fn left_values(&self) -> &[f64] {
        &self.left_values
    }

    pub fn start_value(&self) -> f64 {
        self.start_value
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// First index of a jump strictly after `t`.
    pub fn first_jump_after(&self, t: f64) -> usize {
        self.jump_times.partition_point(|&x| x <= t)
    }

    /// Index one past the last jump strictly before `t`.
    pub fn jumps_before(&self, t: f64) -> usize {
        self.jump_times.partition_point(|&x| x < t)
    }
}

/// Max absolute deviation from the jump identity
/// `size^gamma(left limit) = (1 + z)^(-1)` over all jumps of the path.
///
/// Zero up to rounding whenever `path` was produced from `points` with
/// `gamma`; anything larger flags corrupted inputs.
pub fn jump_identity_residual(
    path: &JumpPath,
    points: &PointSystem,
    gamma: &GammaSpec,
) -> Result<f64, SdeError> {
    if path.jump_count() != points.len() {
        return Err(SdeError::MismatchedLengths {
            path: path.jump_count(),
            points: points.len(),
        });
    }
    let mut worst = 0.0_f64;
    for (k, e) in points.events().iter().enumerate() {
        let g = gamma.value(path.left_values[k]);
        let lhs = libm::pow(path.jump_sizes[k], g);
        worst = worst.max((lhs - e.lambda).abs());
    }
    Ok(worst)
}

/// Upper bound on the expected total jump mass lost to the mark
/// truncation: `horizon * ((1-eps)/eps) * (1 + z_max)^(-eps/(1-eps))`,
/// the exact tail integral of the worst-case kernel `(1+z)^(-1/(1-eps))`.
pub fn truncation_error_bound(epsilon: f64, z_max: f64, horizon: f64) -> Result<f64, SdeError> {
    if !epsilon.is_finite() || !z_max.is_finite() || !horizon.is_finite() {
        return Err(SdeError::NonFinite);
    }
    if epsilon <= 0.0 || epsilon >= 0.5 {
        return Err(SdeError::EpsilonOutOfRange(epsilon));
    }
    if z_max <= 0.0 {
        return Err(SdeError::NonPositive("z_max"));
    }
    if horizon <= 0.0 {
        return Err(SdeError::NonPositive("horizon"));
    }
    let ratio = (1.0 - epsilon) / epsilon;
    Ok(horizon * ratio * libm::pow(1.0 + z_max, -epsilon / (1.0 - epsilon)))
}

/// Mark level equivalent to retaining only jumps at least `u_min` under
/// the worst-case index `1 - eps`: `z_max = u_min^-(1-eps) - 1`. With this
/// choice the truncation bound simplifies to
/// `horizon * ((1-eps)/eps) * u_min^eps`.
pub fn z_max_for_jump_floor(u_min: f64, epsilon: f64) -> Result<f64, SdeError> {
    if !u_min.is_finite() || !epsilon.is_finite() {
        return Err(SdeError::NonFinite);
    }
    if epsilon <= 0.0 || epsilon >= 0.5 {
        return Err(SdeError::EpsilonOutOfRange(epsilon));
    }
    if u_min <= 0.0 || u_min >= 1.0 {
        return Err(SdeError::JumpFloorOutOfRange(u_min));
    }
    Ok(libm::pow(u_min, -(1.0 - epsilon)) - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn figure_spec() -> GammaSpec {
        GammaSpec::new(vec![(0.0, 0.5), (1.6, 0.9)], 0.05).unwrap()
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(jump_kernel(0.5, 3.0).unwrap(), 0.0625);
        assert_eq!(jump_kernel(0.7, 0.0).unwrap(), 1.0);
        let lo = jump_kernel(0.25, 3.0).unwrap();
        assert_eq!(lo, 0.00390625);
        assert!(lo < jump_kernel(0.5, 3.0).unwrap());
        assert!(jump_kernel(1.0, 3.0).is_err());
        assert!(jump_kernel(0.5, -1.0).is_err());
    }

    #[test]
    fn empty_points_give_flat_path() {
        let ps = PointSystem::from_events(&[], 1.0).unwrap();
        let path = simulate_markov(&figure_spec(), &ps, 0.7).unwrap();
        assert_eq!(path.jump_count(), 0);
        assert_eq!(path.value(0.5), 0.7);
        assert_eq!(path.final_value(), 0.7);

        let levy = simulate_levy(&LevyParams::new(0.5).unwrap(), &ps);
        assert_eq!(levy.value(0.9), 0.0);
    }

    #[test]
    fn single_event_replay() {
        let ps = PointSystem::from_events(&[(0.5, 3.0)], 1.0).unwrap();
        let g = GammaSpec::constant(0.5, 0.4).unwrap();
        let path = simulate_markov(&g, &ps, 0.0).unwrap();
        assert_eq!(path.jump_count(), 1);
        assert_eq!(path.sizes()[0], 0.0625);
        assert_eq!(path.value(0.49), 0.0);
        assert_eq!(path.value(0.5), 0.0625);
        assert_eq!(path.left_value(0.5), 0.0);
    }

    #[test]
    fn two_event_hand_replay() {
        // gamma(y) = 0.5 + 0.25 y up to the 0.9 plateau
        let ps = PointSystem::from_events(&[(0.25, 1.0), (0.75, 3.0)], 1.0).unwrap();
        let path = simulate_markov(&figure_spec(), &ps, 0.0).unwrap();
        assert_eq!(path.sizes()[0], 0.25); // 2^(-1/0.5)
        let expected_second = libm::pow(4.0, -1.0 / 0.5625);
        assert!((path.sizes()[1] - expected_second).abs() < 1e-15);
        assert!((expected_second - 0.085_049_6).abs() < 1e-6);
        assert_eq!(path.left_values()[1], 0.25);
    }

    #[test]
    fn levy_coupling_monotone_in_alpha() {
        let ps = PointSystem::generate(1.0, 100.0, 3).unwrap();
        let x_lo = simulate_levy(&LevyParams::new(0.25).unwrap(), &ps);
        let x_hi = simulate_levy(&LevyParams::new(0.5).unwrap(), &ps);
        assert_eq!(x_lo.jump_count(), x_hi.jump_count());
        for k in 0..x_lo.jump_count() {
            assert!(x_lo.sizes()[k] <= x_hi.sizes()[k]);
        }
        // single-event sanity: jump 0.0625 for alpha 0.5, z 3
        let one = PointSystem::from_events(&[(0.5, 3.0)], 1.0).unwrap();
        let x = simulate_levy(&LevyParams::new(0.5).unwrap(), &one);
        assert_eq!(x.sizes()[0], 0.0625);
    }

    #[test]
    fn identity_residual_is_tiny() {
        let ps = PointSystem::generate(1.0, 1000.0, 11).unwrap();
        let g = figure_spec();
        let path = simulate_markov(&g, &ps, 0.0).unwrap();
        let res = jump_identity_residual(&path, &ps, &g).unwrap();
        assert!(res <= 1e-12, "residual {res}");

        let empty = PointSystem::from_events(&[], 1.0).unwrap();
        let flat = simulate_markov(&g, &empty, 0.0).unwrap();
        assert_eq!(jump_identity_residual(&flat, &empty, &g).unwrap(), 0.0);

        assert!(matches!(
            jump_identity_residual(&path, &empty, &g),
            Err(SdeError::MismatchedLengths { .. })
        ));
    }

    #[test]
    fn truncation_bound_matches_closed_form() {
        // eps = 0.1, 1 + z_max = 1e6: 9 * 10^(-2/3)
        let b = truncation_error_bound(0.1, 1e6 - 1.0, 1.0).unwrap();
        let expected = 9.0 * libm::pow(10.0, -2.0 / 3.0);
        assert!((b - expected).abs() < 1e-12);
        // decreasing in z_max
        let b2 = truncation_error_bound(0.1, 1e8, 1.0).unwrap();
        assert!(b2 < b);
        assert!(truncation_error_bound(0.5, 1.0, 1.0).is_err());
    }

    #[test]
    fn jump_floor_inverts_the_bound() {
        let eps = 0.2;
        let u_min = 1e-4;
        let z = z_max_for_jump_floor(u_min, eps).unwrap();
        let bound = truncation_error_bound(eps, z, 2.0).unwrap();
        let simplified = 2.0 * ((1.0 - eps) / eps) * libm::pow(u_min, eps);
        assert!((bound - simplified).abs() < 1e-9 * simplified);
    }

    #[test]
    fn path_is_nondecreasing_with_unit_jumps() {
        let ps = PointSystem::generate(2.0, 500.0, 77).unwrap();
        let path = simulate_markov(&figure_spec(), &ps, 0.0).unwrap();
        for k in 0..path.jump_count() {
            assert!(path.sizes()[k] > 0.0 && path.sizes()[k] <= 1.0);
            let expect = path.start_value()
                + path.sizes()[..k].iter().sum::<f64>();
            assert!((path.left_values()[k] - expect).abs() <= 1e-12 * (1.0 + expect.abs()));
        }
        assert_eq!(path.jump_count(), ps.len());
    }
}

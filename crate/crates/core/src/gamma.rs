//! State-dependent jump index functions.
//!
//! A [`GammaSpec`] maps process states to a jump index in `(0, 1)`. It is
//! piecewise linear between validated breakpoints and constant beyond the
//! first/last breakpoint. The index controls how heavy the small-jump
//! activity is at a given state: larger values mean denser small jumps.

use alloc::vec::Vec;
use core::fmt;

/// Validated piecewise-linear index function `state -> (0, 1)`.
///
/// Invariants enforced at construction:
/// * all values lie in `[epsilon, 1 - epsilon]` with `epsilon` in `(0, 1/2)`,
/// * breakpoint states are strictly increasing and values nondecreasing,
/// * the Lipschitz constant equals the maximum segment slope.
///
/// Evaluation clamps the state to the breakpoint span, so the function is
/// constant outside it. Strict monotonicity can therefore hold only on the
/// span itself; [`GammaSpec::warnings`] reports where it fails.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSpec {
    breakpoints: Vec<(f64, f64)>,
    epsilon: f64,
    lipschitz: f64,
    strict_on_span: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GammaError {
    EmptyBreakpoints,
    NonFinite,
    EpsilonOutOfRange(f64),
    UnorderedStates { index: usize },
    ValueOutOfRange { state: f64, value: f64, epsilon: f64 },
    DecreasingValue { state: f64 },
}

impl fmt::Display for GammaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaError::EmptyBreakpoints => write!(f, "gamma needs at least one breakpoint"),
            GammaError::NonFinite => write!(f, "gamma breakpoints and epsilon must be finite"),
            GammaError::EpsilonOutOfRange(e) => {
                write!(f, "epsilon must lie in (0, 1/2), got {e}")
            }
            GammaError::UnorderedStates { index } => {
                write!(f, "breakpoint states must be strictly increasing (index {index})")
            }
            GammaError::ValueOutOfRange { state, value, epsilon } => write!(
                f,
                "gamma({state}) = {value} outside [{epsilon}, {}]",
                1.0 - epsilon
            ),
            GammaError::DecreasingValue { state } => {
                write!(f, "gamma values must be nondecreasing (violated at state {state})")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GammaError {}

/// Non-fatal findings from validation. The simulator accepts all of these;
/// only the theoretical-spectrum formulas implicitly assume a monotone
/// index along the path, which still holds for nondecreasing specs.
#[derive(Debug, Clone, PartialEq)]
pub enum GammaWarning {
    /// The function is constant beyond this state, so it is not strictly
    /// increasing on the whole half-line.
    ConstantBeyond { state: f64 },
    /// Some interior segment has zero slope.
    FlatSegment { from: f64, to: f64 },
    /// Single breakpoint: the function is globally constant.
    Constant { value: f64 },
}

impl fmt::Display for GammaWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaWarning::ConstantBeyond { state } => write!(
                f,
                "gamma is constant beyond state {state}; strict monotonicity fails there"
            ),
            GammaWarning::FlatSegment { from, to } => {
                write!(f, "gamma has a flat segment on [{from}, {to}]")
            }
            GammaWarning::Constant { value } => write!(f, "gamma is constant at {value}"),
        }
    }
}

impl GammaSpec {
    pub fn new(breakpoints: Vec<(f64, f64)>, epsilon: f64) -> Result<Self, GammaError> {
        if breakpoints.is_empty() {
            return Err(GammaError::EmptyBreakpoints);
        }
        if !epsilon.is_finite()
            || breakpoints.iter().any(|(y, v)| !y.is_finite() || !v.is_finite())
        {
            return Err(GammaError::NonFinite);
        }
        if epsilon <= 0.0 || epsilon >= 0.5 {
            return Err(GammaError::EpsilonOutOfRange(epsilon));
        }
        for (i, pair) in breakpoints.windows(2).enumerate() {
            if pair[1].0 <= pair[0].0 {
                return Err(GammaError::UnorderedStates { index: i + 1 });
            }
            if pair[1].1 < pair[0].1 {
                return Err(GammaError::DecreasingValue { state: pair[1].0 });
            }
        }
        for &(y, v) in &breakpoints {
            if v < epsilon || v > 1.0 - epsilon {
                return Err(GammaError::ValueOutOfRange { state: y, value: v, epsilon });
            }
        }
        let mut lipschitz = 0.0_f64;
        let mut strict_on_span = breakpoints.len() > 1;
        for pair in breakpoints.windows(2) {
            let slope = (pair[1].1 - pair[0].1) / (pair[1].0 - pair[0].0);
            lipschitz = lipschitz.max(slope);
            if slope == 0.0 {
                strict_on_span = false;
            }
        }
        Ok(GammaSpec { breakpoints, epsilon, lipschitz, strict_on_span })
    }

    /// Degenerate constant spec `gamma ≡ value`. Handy as the calibration
    /// control: with a constant index the process is a truncated stable
    /// subordinator.
    pub fn constant(value: f64, epsilon: f64) -> Result<Self, GammaError> {
        GammaSpec::new(alloc::vec![(0.0, value)], epsilon)
    }

    /// Evaluate at a state, clamping to the breakpoint span.
    pub fn value(&self, y: f64) -> f64 {
        let bps = &self.breakpoints;
        let first = bps[0];
        let last = bps[bps.len() - 1];
        if y <= first.0 {
            return first.1;
        }
        if y >= last.0 {
            return last.1;
        }
        // strictly inside the span, so there are >= 2 breakpoints
        let idx = bps.partition_point(|&(x, _)| x <= y);
        let (x0, v0) = bps[idx - 1];
        let (x1, v1) = bps[idx];
        let t = (y - x0) / (x1 - x0);
        v0 + t * (v1 - v0)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.breakpoints
    }

    pub fn min_value(&self) -> f64 {
        self.breakpoints[0].1
    }

    pub fn max_value(&self) -> f64 {
        self.breakpoints[self.breakpoints.len() - 1].1
    }

    /// Whether every interior segment has strictly positive slope.
    pub fn strict_on_span(&self) -> bool {
        self.strict_on_span
    }

    pub fn warnings(&self) -> Vec<GammaWarning> {
        let mut out = Vec::new();
        if self.breakpoints.len() == 1 {
            out.push(GammaWarning::Constant { value: self.breakpoints[0].1 });
            return out;
        }
        for pair in self.breakpoints.windows(2) {
            if pair[1].1 == pair[0].1 {
                out.push(GammaWarning::FlatSegment { from: pair[0].0, to: pair[1].0 });
            }
        }
        let last = self.breakpoints[self.breakpoints.len() - 1];
        out.push(GammaWarning::ConstantBeyond { state: last.0 });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn figure_spec() -> GammaSpec {
        GammaSpec::new(vec![(0.0, 0.5), (1.6, 0.9)], 0.05).unwrap()
    }

    #[test]
    fn interpolates_and_extrapolates() {
        let g = figure_spec();
        assert_eq!(g.value(0.0), 0.5);
        assert_eq!(g.value(1.6), 0.9);
        assert_eq!(g.value(5.0), 0.9);
        assert_eq!(g.value(-1.0), 0.5);
        assert!((g.value(0.8) - 0.7).abs() < 1e-15);
        assert!((g.lipschitz() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn constant_spec_is_exact() {
        let g = GammaSpec::constant(0.5, 0.45).unwrap();
        assert_eq!(g.value(0.0), 0.5);
        assert_eq!(g.value(123.0), 0.5);
        assert_eq!(g.lipschitz(), 0.0);
        assert!(!g.strict_on_span());
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(matches!(
            GammaSpec::new(vec![], 0.1),
            Err(GammaError::EmptyBreakpoints)
        ));
        assert!(matches!(
            GammaSpec::new(vec![(0.0, 0.5)], 0.6),
            Err(GammaError::EpsilonOutOfRange(_))
        ));
        assert!(matches!(
            GammaSpec::new(vec![(0.0, 0.5), (0.0, 0.6)], 0.1),
            Err(GammaError::UnorderedStates { .. })
        ));
        assert!(matches!(
            GammaSpec::new(vec![(0.0, 0.6), (1.0, 0.5)], 0.1),
            Err(GammaError::DecreasingValue { .. })
        ));
        assert!(matches!(
            GammaSpec::new(vec![(0.0, 0.99)], 0.05),
            Err(GammaError::ValueOutOfRange { .. })
        ));
        assert!(matches!(
            GammaSpec::new(vec![(0.0, f64::NAN)], 0.1),
            Err(GammaError::NonFinite)
        ));
    }

    #[test]
    fn figure_spec_warns_about_plateau() {
        let g = figure_spec();
        assert!(g.strict_on_span());
        let warnings = g.warnings();
        assert!(warnings
            .iter()
            .any(|w| matches!(w, GammaWarning::ConstantBeyond { state } if *state == 1.6)));
    }

    #[test]
    fn flat_segment_detected() {
        let g = GammaSpec::new(vec![(0.0, 0.4), (1.0, 0.4), (2.0, 0.6)], 0.1).unwrap();
        assert!(!g.strict_on_span());
        assert!(g.warnings().iter().any(|w| matches!(w, GammaWarning::FlatSegment { .. })));
    }
}

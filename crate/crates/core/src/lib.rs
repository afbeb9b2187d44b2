//! Exact event-driven simulation of an increasing pure-jump Markov process
//! whose jump law depends on the current state, together with the analysis
//! toolkit that goes with it: closed-form singularity spectra, pointwise
//! regularity estimators, dyadic covering/redundancy diagnostics, and
//! tangent-process statistics.
//!
//! The process is driven by a planar Poisson point process: each event
//! `(t, z)` triggers a jump of size `(1 + z)^(-1/gamma(state))`, where
//! `gamma` is a nondecreasing piecewise-linear index function of the
//! current state. Constant `gamma` recovers a truncated stable
//! subordinator, which doubles as the calibration oracle throughout.
//!
//! The crate is `no_std`-compatible (it needs `alloc`); all floating-point
//! transcendentals go through `libm` so results are bit-stable across
//! platforms. Everything is deterministic given the seeds.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod gamma;
pub mod points;
pub mod regularity;
pub mod rng;
pub mod sde;
pub mod spectrum;
pub mod tangent;

pub use gamma::{GammaSpec, GammaWarning};
pub use points::{PointSystem, PoissonEvent};
pub use regularity::{HolderEstimate, RegularityField, RegularityParams};
pub use sde::{JumpPath, LevyParams};
pub use spectrum::{SpectrumCurve, SpectrumKind};
pub use tangent::TangentReport;

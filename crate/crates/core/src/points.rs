//! Driving Poisson point process and dyadic-band combinatorics.
//!
//! Events live on `[0, horizon] x [0, z_max]` with unit intensity. Each
//! event carries a derived radius `lambda = (1 + z)^(-1)`, which turns the
//! system into a family of intervals `B(t, lambda)` used by the covering
//! and redundancy diagnostics. Bands group events by dyadic radius:
//! band `j` holds the events with `lambda` in `(2^-(j+1), 2^-j]`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Poisson};

/// One driving event: time, mark, derived radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonEvent {
    pub t: f64,
    pub z: f64,
    /// `(1 + z)^(-1)`, exact up to one rounding.
    pub lambda: f64,
}

/// Immutable, time-sorted collection of events with its generation
/// parameters. Safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSystem {
    events: Vec<PoissonEvent>,
    horizon: f64,
    z_max: f64,
    seed: u64,
}

/// Events of one dyadic radius band keyed by band index, each band sorted
/// by time. Built once, queried many times by the regularity estimators.
#[derive(Debug, Clone)]
pub struct BandDecomposition {
    bands: BTreeMap<u32, Vec<(f64, f64)>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PointError {
    NonFinite,
    NonPositiveHorizon(f64),
    NegativeZMax(f64),
    EventOutOfRange { t: f64, z: f64 },
    BadBandRange { j_min: u32, j_max: u32 },
    DeltaBelowOne(f64),
    ZeroResolution,
}

impl fmt::Display for PointError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointError::NonFinite => write!(f, "inputs must be finite"),
            PointError::NonPositiveHorizon(h) => write!(f, "horizon must be positive, got {h}"),
            PointError::NegativeZMax(z) => write!(f, "z_max must be nonnegative, got {z}"),
            PointError::EventOutOfRange { t, z } => {
                write!(f, "event (t={t}, z={z}) outside [0, horizon] x [0, inf)")
            }
            PointError::BadBandRange { j_min, j_max } => {
                write!(f, "band range requires j_min <= j_max, got [{j_min}, {j_max}]")
            }
            PointError::DeltaBelowOne(d) => write!(f, "delta must be >= 1, got {d}"),
            PointError::ZeroResolution => write!(f, "grid resolution must be positive"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for PointError {}

/// Band index of a radius: the `j` with `2^-(j+1) < lambda <= 2^-j`.
///
/// Exact at dyadic boundaries because powers of two are representable.
pub fn band_index(lambda: f64) -> u32 {
    debug_assert!(lambda > 0.0 && lambda <= 1.0);
    let mut j = libm::floor(-libm::log2(lambda)) as i64;
    j = j.max(0);
    while lambda <= libm::exp2(-(j as f64) - 1.0) {
        j += 1;
    }
    while lambda > libm::exp2(-(j as f64)) {
        j -= 1;
    }
    j.max(0) as u32
}

impl PointSystem {
    /// Draw a Poisson system on `[0, horizon] x [0, z_max]` with unit
    /// intensity: a Poisson count with mean `horizon * z_max`, then that
    /// many independent uniform events. Deterministic given the seed.
    pub fn generate(horizon: f64, z_max: f64, seed: u64) -> Result<Self, PointError> {
        if !horizon.is_finite() || !z_max.is_finite() {
            return Err(PointError::NonFinite);
        }
        if horizon <= 0.0 {
            return Err(PointError::NonPositiveHorizon(horizon));
        }
        if z_max < 0.0 {
            return Err(PointError::NegativeZMax(z_max));
        }
        let mut events = Vec::new();
        let mean = horizon * z_max;
        if mean > 0.0 {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let count = Poisson::new(mean).expect("validated mean").sample(&mut rng) as u64;
            events.reserve(count as usize);
            for _ in 0..count {
                let t = horizon * rng.random::<f64>();
                let z = z_max * rng.random::<f64>();
                events.push(PoissonEvent { t, z, lambda: 1.0 / (1.0 + z) });
            }
            sort_and_dedup(&mut events);
        }
        Ok(PointSystem { events, horizon, z_max, seed })
    }

    /// Build a system from explicit `(t, z)` pairs, for hand-crafted
    /// scenarios and oracles. Radii are derived, events sorted, exact
    /// duplicates dropped. `z_max` is the largest mark present.
    pub fn from_events(pairs: &[(f64, f64)], horizon: f64) -> Result<Self, PointError> {
        if !horizon.is_finite() {
            return Err(PointError::NonFinite);
        }
        if horizon <= 0.0 {
            return Err(PointError::NonPositiveHorizon(horizon));
        }
        let mut events = Vec::with_capacity(pairs.len());
        let mut z_max = 0.0_f64;
        for &(t, z) in pairs {
            if !t.is_finite() || !z.is_finite() {
                return Err(PointError::NonFinite);
            }
            if t < 0.0 || t > horizon || z < 0.0 {
                return Err(PointError::EventOutOfRange { t, z });
            }
            z_max = z_max.max(z);
            events.push(PoissonEvent { t, z, lambda: 1.0 / (1.0 + z) });
        }
        sort_and_dedup(&mut events);
        Ok(PointSystem { events, horizon, z_max, seed: 0 })
    }

    pub fn events(&self) -> &[PoissonEvent] {
        &self.events
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn z_max(&self) -> f64 {
        self.z_max
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Indices of the events whose radius falls in band `j`.
    pub fn band_indices(&self, j: u32) -> Vec<usize> {
        let lo = libm::exp2(-(j as f64) - 1.0);
        let hi = libm::exp2(-(j as f64));
        self.events
            .iter()
            .enumerate()
            .filter(|(_, e)| e.lambda > lo && e.lambda <= hi)
            .map(|(i, _)| i)
            .collect()
    }

    /// Group all events by dyadic radius band, each band sorted by time.
    pub fn band_decomposition(&self) -> BandDecomposition {
        let mut bands: BTreeMap<u32, Vec<(f64, f64)>> = BTreeMap::new();
        for e in &self.events {
            bands.entry(band_index(e.lambda)).or_default().push((e.t, e.lambda));
        }
        BandDecomposition { bands }
    }

    /// Per-band maximum overlap counts `N_j` for `j` in `[j_min, j_max]`.
    ///
    /// `N_j` is the largest number of band-`j` intervals `B(t, lambda)`
    /// containing a common point, computed by an endpoint sweep. Interval
    /// graphs are perfect, so the same `N_j` colors suffice to split the
    /// band into pairwise-disjoint families.
    pub fn overlap_counts(&self, j_min: u32, j_max: u32) -> Result<Vec<usize>, PointError> {
        if j_min > j_max {
            return Err(PointError::BadBandRange { j_min, j_max });
        }
        let bands = self.band_decomposition();
        let mut out = Vec::with_capacity((j_max - j_min + 1) as usize);
        for j in j_min..=j_max {
            let band = bands.band(j);
            out.push(max_stabbing(band));
        }
        Ok(out)
    }

    /// Fraction of the uniform grid `{k * horizon / resolution}` covered by
    /// the union of open intervals `B(t, lambda^delta)`.
    pub fn covering_fraction(&self, delta: f64, resolution: usize) -> Result<f64, PointError> {
        if !delta.is_finite() || delta < 1.0 {
            return Err(PointError::DeltaBelowOne(delta));
        }
        if resolution == 0 {
            return Err(PointError::ZeroResolution);
        }
        if self.events.is_empty() {
            return Ok(0.0);
        }
        let mut intervals: Vec<(f64, f64)> = self
            .events
            .iter()
            .map(|e| {
                let r = libm::pow(e.lambda, delta);
                (e.t - r, e.t + r)
            })
            .collect();
        intervals.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
        let merged = merge_open_intervals(&intervals);

        let mut covered = 0usize;
        let mut cursor = 0usize;
        for k in 0..=resolution {
            let t = self.horizon * (k as f64) / (resolution as f64);
            while cursor < merged.len() && merged[cursor].1 <= t {
                cursor += 1;
            }
            if cursor < merged.len() && merged[cursor].0 < t && t < merged[cursor].1 {
                covered += 1;
            }
        }
        Ok(covered as f64 / (resolution + 1) as f64)
    }
}

impl BandDecomposition {
    /// `(time, radius)` pairs of band `j`, sorted by time.
    pub fn band(&self, j: u32) -> &[(f64, f64)] {
        self.bands.get(&j).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Band indices that hold at least one event, ascending.
    pub fn nonempty_bands(&self) -> impl Iterator<Item = u32> + '_ {
        self.bands.keys().copied()
    }

    pub fn finest_band(&self) -> Option<u32> {
        self.bands.keys().next_back().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.bands.is_empty()
    }
}

fn sort_and_dedup(events: &mut Vec<PoissonEvent>) {
    events.sort_unstable_by(|a, b| a.t.total_cmp(&b.t).then(a.z.total_cmp(&b.z)));
    events.dedup_by(|a, b| a.t == b.t && a.z == b.z);
}

/// Maximum number of open intervals `(t - r, t + r)` sharing a point.
fn max_stabbing(band: &[(f64, f64)]) -> usize {
    if band.is_empty() {
        return 0;
    }
    // +1 at openings, -1 at closings; at equal coordinates closings first
    // because open intervals do not meet at a shared endpoint.
    let mut endpoints: Vec<(f64, i8)> = Vec::with_capacity(band.len() * 2);
    for &(t, r) in band {
        endpoints.push((t - r, 1));
        endpoints.push((t + r, -1));
    }
    endpoints.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut depth = 0i64;
    let mut max_depth = 0i64;
    for (_, d) in endpoints {
        depth += d as i64;
        max_depth = max_depth.max(depth);
    }
    max_depth as usize
}

/// Merge sorted open intervals; touching endpoints stay separate.
fn merge_open_intervals(sorted: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for &(l, r) in sorted {
        match merged.last_mut() {
            Some(last) if l < last.1 => last.1 = last.1.max(r),
            _ => merged.push((l, r)),
        }
    }
    merged
}

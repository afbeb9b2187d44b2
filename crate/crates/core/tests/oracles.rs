//! Independent oracles: every closed form or optimized routine in the
//! crate is checked here against a brute-force or quadrature route that
//! shares no code with it.

use mfjump_core::points::{band_index, PointSystem};
use mfjump_core::regularity::approximation_rate;
use mfjump_core::sde::{simulate_markov, truncation_error_bound};
use mfjump_core::tangent::stable_subordinator_samples;
use mfjump_core::GammaSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Simpson panels over a power-substituted integrand; the substitution
/// `w = v^m` removes the endpoint singularity.
fn tail_mass_quadrature(epsilon: f64, z_max: f64) -> f64 {
    // integral of (1+z)^(-1/(1-eps)) over (z_max, inf)
    // = integral of w^p over (0, w0) with w = (1+z)^(-1), p = 1/(1-eps) - 2
    let p = 1.0 / (1.0 - epsilon) - 2.0;
    let w0 = 1.0 / (1.0 + z_max);
    let m = (3.0 / (1.0 + p)).ceil().max(2.0);
    let q = m * (1.0 + p) - 1.0; // >= 2, integrand v^q is smooth
    let v0 = w0.powf(1.0 / m);
    let n = 1 << 14;
    let hstep = v0 / n as f64;
    let f = |v: f64| m * v.powf(q);
    let mut acc = f(0.0) + f(v0);
    for k in 1..n {
        let v = hstep * k as f64;
        acc += if k % 2 == 1 { 4.0 * f(v) } else { 2.0 * f(v) };
    }
    acc * hstep / 3.0
}

#[test]
fn truncation_bound_equals_tail_integral() {
    for &(eps, z_max) in &[(0.1, 1e6 - 1.0), (0.3, 1e4), (0.45, 100.0), (0.05, 1e5)] {
        for &horizon in &[1.0, 3.0] {
            let bound = truncation_error_bound(eps, z_max, horizon).unwrap();
            let oracle = horizon * tail_mass_quadrature(eps, z_max);
            let rel = (bound - oracle).abs() / oracle;
            assert!(rel < 1e-6, "eps={eps} z_max={z_max}: {bound} vs {oracle} (rel {rel})");
        }
    }
}

/// Bisection on delta over membership in the union of stretched balls,
/// restricted to the same finest-band window the estimator uses.
fn bisection_rate(events: &[(f64, f64)], t: f64, delta_cap: f64) -> f64 {
    let member = |delta: f64| {
        events.iter().any(|&(tn, lambda)| (t - tn).abs() < lambda.powf(delta))
    };
    if !member(1.0) {
        return 1.0;
    }
    if member(delta_cap) {
        return delta_cap;
    }
    let (mut lo, mut hi) = (1.0_f64, delta_cap);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if member(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[test]
fn approximation_rate_matches_bisection_oracle() {
    let mut rng = ChaCha12Rng::seed_from_u64(0xA11CE);
    let j_window = 4usize;
    let delta_cap = 16.0;
    for case in 0..40 {
        let n_events = 1 + (case % 50);
        let pairs: Vec<(f64, f64)> = (0..n_events)
            .map(|_| (rng.random::<f64>(), rng.random::<f64>() * 400.0))
            .collect();
        let ps = PointSystem::from_events(&pairs, 1.0).unwrap();
        let bands = ps.band_decomposition();

        // replicate the band-window selection, then hand the raw events
        // to the independent bisection
        let selected: Vec<u32> = {
            let all: Vec<u32> = bands.nonempty_bands().collect();
            let skip = all.len().saturating_sub(j_window);
            all[skip..].to_vec()
        };
        let mut window_events: Vec<(f64, f64)> = Vec::new();
        for j in selected {
            window_events.extend_from_slice(bands.band(j));
        }

        for _ in 0..20 {
            let t = rng.random::<f64>();
            let fast = approximation_rate(&bands, t, j_window, delta_cap).unwrap();
            let oracle = bisection_rate(&window_events, t, delta_cap);
            assert!(
                (fast - oracle).abs() <= 1e-6,
                "case {case}: t={t} fast={fast} oracle={oracle}"
            );
        }
    }
}

/// Count overlaps by evaluating the stabbing number at every endpoint and
/// every midpoint between consecutive endpoints.
fn brute_force_stabbing(intervals: &[(f64, f64)]) -> usize {
    if intervals.is_empty() {
        return 0;
    }
    let mut xs: Vec<f64> = intervals.iter().flat_map(|&(l, r)| [l, r]).collect();
    xs.sort_unstable_by(f64::total_cmp);
    let mut candidates = xs.clone();
    for w in xs.windows(2) {
        candidates.push(0.5 * (w[0] + w[1]));
    }
    candidates
        .iter()
        .map(|&x| intervals.iter().filter(|&&(l, r)| l < x && x < r).count())
        .max()
        .unwrap_or(0)
}

#[test]
fn overlap_counts_match_brute_force() {
    let mut rng = ChaCha12Rng::seed_from_u64(77);
    for case in 0..25 {
        let n_events = 5 + (case * 8) % 200;
        let pairs: Vec<(f64, f64)> = (0..n_events)
            .map(|_| (rng.random::<f64>(), rng.random::<f64>() * 100.0))
            .collect();
        let ps = PointSystem::from_events(&pairs, 1.0).unwrap();
        let j_top = 8;
        let fast = ps.overlap_counts(0, j_top).unwrap();
        for j in 0..=j_top {
            let intervals: Vec<(f64, f64)> = ps
                .events()
                .iter()
                .filter(|e| band_index(e.lambda) == j)
                .map(|e| (e.t - e.lambda, e.t + e.lambda))
                .collect();
            let brute = brute_force_stabbing(&intervals);
            assert_eq!(fast[j as usize], brute, "case {case} band {j}");
        }
    }
}

#[test]
fn poisson_count_mean_matches_area() {
    // mean count over many seeds approaches horizon * z_max = 10
    let n_seeds = 1000u64;
    let total: usize = (0..n_seeds)
        .map(|s| PointSystem::generate(1.0, 10.0, s).unwrap().len())
        .sum();
    let mean = total as f64 / n_seeds as f64;
    assert!((9.0..=11.0).contains(&mean), "mean {mean}");
}

/// Inverse CDF of the one-sided stable law at index 1/2 with the scale
/// used by the sampler: `S = pi * L` where `L` is Levy(1/2) distributed,
/// so `P(L <= x) = erfc(sqrt(1/(4x)))`.
fn stable_half_quantile(p: f64) -> f64 {
    // solve erfc(sqrt(1/(4x))) = p for x by bisection on y = sqrt(1/(4x))
    let (mut lo, mut hi) = (0.0_f64, 20.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if libm::erfc(mid) > p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let y = 0.5 * (lo + hi);
    core::f64::consts::PI / (4.0 * y * y)
}

#[test]
fn stable_half_median_matches_closed_form() {
    let n = 40_000;
    let mut samples = stable_subordinator_samples(0.5, n, 2024).unwrap();
    samples.sort_unstable_by(f64::total_cmp);
    let median = 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
    let expected = stable_half_quantile(0.5);
    let rel = (median - expected).abs() / expected;
    assert!(rel < 0.02, "median {median} vs {expected} (rel {rel})");
    // a second quantile for good measure
    let q25 = samples[n / 4];
    let expected_q25 = stable_half_quantile(0.25);
    assert!((q25 - expected_q25).abs() / expected_q25 < 0.03);
}

/// Straight-line reimplementation of the state recursion: independent
/// gamma evaluation (direct formula, not the breakpoint interpolator) and
/// std powf instead of libm.
#[test]
fn simulate_matches_hand_recursion() {
    let gamma = GammaSpec::new(vec![(0.0, 0.5), (1.6, 0.9)], 0.05).unwrap();
    let gamma_direct = |y: f64| (0.5 + 0.25 * y).min(0.9);
    let mut rng = ChaCha12Rng::seed_from_u64(31337);
    for case in 0..20 {
        let n_events = case % 11;
        let pairs: Vec<(f64, f64)> = (0..n_events)
            .map(|_| (rng.random::<f64>(), rng.random::<f64>() * 50.0))
            .collect();
        let ps = PointSystem::from_events(&pairs, 1.0).unwrap();
        let path = simulate_markov(&gamma, &ps, 0.0).unwrap();

        let mut state = 0.0_f64;
        for (k, e) in ps.events().iter().enumerate() {
            let jump = (1.0 + e.z).powf(-1.0 / gamma_direct(state));
            let rel = (path.sizes()[k] - jump).abs() / jump;
            assert!(rel <= 1e-14, "case {case} step {k}: rel {rel}");
            state += jump;
            let rel_state =
                (path.left_values()[k] + path.sizes()[k] - state).abs() / state.max(1e-300);
            assert!(rel_state <= 1e-13, "case {case} step {k}: state rel {rel_state}");
        }
    }
}

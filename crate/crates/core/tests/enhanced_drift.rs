use std::f64::consts::PI;

use num_complex::Complex64;
use parasde::enhanced_drift::*;
use parasde::experiments::{lift_probe, LiftConfig, Outcome};
use parasde::semigroup::{Semigroup, StableSymbol};
use parasde::spectral::{uniform_times, DyadicPartition, Field, FourierGrid, TimeField};
use parasde::stats::mean_se;

fn setup(alpha: f64, n: usize) -> (FourierGrid, Semigroup, DyadicPartition) {
    let g = FourierGrid::one_d(n).unwrap();
    (
        g,
        Semigroup::new(StableSymbol::fractional_laplacian(alpha).unwrap(), g).unwrap(),
        DyadicPartition::new(g).unwrap(),
    )
}

#[test]
fn smooth_lift_of_trivial_drifts_vanishes() {
    let (g, sg, part) = setup(1.8, 32);
    let times = uniform_times(0.0, 1.0, 8);
    for eta in [TimeField::zeros(times.clone(), g).unwrap(), TimeField::constant(times.clone(), &Field::constant(g, 0.7), 3.0).unwrap()] {
        let d = lift_smooth(&[eta], 0.5, &sg, &part).unwrap();
        assert_eq!(d.v2.unwrap()[0][0].max_abs_coeff(), 0.0);
    }
}

#[test]
fn smooth_lift_of_one_mode() {
    let alpha = 1.8;
    let (g, sg, part) = setup(alpha, 32);
    let times = uniform_times(0.0, 1.0, 8);
    let a = 0.8;
    let eta = TimeField::constant(times.clone(), &Field::cosine(g, [1, 0], a).unwrap(), 3.0).unwrap();
    let v2 = lift_smooth(&[eta], 0.5, &sg, &part).unwrap().v2.unwrap()[0][0].clone();
    // J^T(d eta)(t) = -2 pi a w(t) sin(2 pi x) with w = (1 - e^{-(T-t) psi(1)}) / psi(1), and the
    // two |k| = 1 blocks resonate fully: V2 = -pi a^2 w(t) sin(4 pi x)
    let psi = (2.0 * PI).powf(alpha);
    for (i, &t) in times.iter().enumerate() {
        let w = -(-(1.0 - t) * psi).exp_m1() / psi;
        let exact = Field::sine(g, [2, 0], -PI * a * a * w).unwrap();
        assert!(v2.value(i).sub(&exact).unwrap().max_abs_coeff() < 1e-15, "t = {t}");
    }
}

#[test]
fn white_noise_is_deterministic_with_unit_variance() {
    let a = sample_white_noise(17, 16, false);
    assert_eq!(a, sample_white_noise(17, 16, false));
    let draws: Vec<WhiteNoiseSample> = (0..10_000).map(|s| sample_white_noise(s, 2, false)).collect();
    let var: Vec<f64> = draws.iter().map(|x| x.coeff(1).norm_sqr()).collect();
    assert!(mean_se(&var).z(1.0) <= 3.0);
    let cross: Vec<Complex64> = draws.iter().map(|x| x.coeff(1) * x.coeff(2).conj()).collect();
    let re: Vec<f64> = cross.iter().map(|c| c.re).collect();
    let im: Vec<f64> = cross.iter().map(|c| c.im).collect();
    assert!(mean_se(&re).z(0.0) <= 3.0);
    assert!(mean_se(&im).z(0.0) <= 3.0);
}

#[test]
fn white_noise_lift_of_zero_mode_only() {
    let (_, sg, part) = setup(1.9, 64);
    let xi = sample_white_noise(4, 0, false);
    let d = lift_white_noise(&xi, &sg, &part, &uniform_times(0.0, 1.0, 4), 0.05).unwrap();
    assert_eq!(d.v2.unwrap()[0][0].max_abs_coeff(), 0.0);
    assert!((d.beta + 0.55).abs() < 1e-15);
}

#[test]
fn chaos_oracle_vanishes_at_equal_times() {
    let (_, sg, part) = setup(1.9, 64);
    for j in -1..=3 {
        assert_eq!(chaos_variance_oracle(&sg, &part, j, 0.4, 0.4, 8, 1.0).unwrap(), 0.0);
    }
}

#[test]
fn chaos_oracle_matches_wick_enumeration() {
    let (_, sg, part) = setup(1.9, 64);
    for j in -1..=3 {
        let k = chaos_kernel(&sg, &part, j, 0.25, 0.75, 4, 1.0).unwrap();
        let o = chaos_variance_oracle(&sg, &part, j, 0.25, 0.75, 4, 1.0).unwrap();
        assert!((o - wick_expectation(&k)).abs() <= 1e-10 * o.max(1.0), "j = {j}");
    }
}

#[test]
fn resonant_mean_over_seeds() {
    let r = lift_probe(&LiftConfig { mean_seeds: 200, ..Default::default() }, 2).unwrap();
    assert!(r.pass(), "{:?}", r.checks());
}

use parasde::levy::*;
use parasde::stats::mean_se;
use parasde::synth::seeded;
use proptest::prelude::*;

#[test]
fn gaussian_and_cauchy_ends() {
    let mut rng = seeded(1, 0);
    let x: Vec<f64> = (0..40_000).map(|_| standard_symmetric_stable(2.0, &mut rng)).collect();
    let sq: Vec<f64> = x.iter().map(|v| v * v).collect();
    assert!(mean_se(&sq).z(2.0) <= 3.0);
    // standard Cauchy: P(|X| < 1) = 1/2
    let mut rng = seeded(1, 1);
    let inside: Vec<f64> = (0..40_000)
        .map(|_| f64::from(u8::from(standard_symmetric_stable(1.0, &mut rng).abs() < 1.0)))
        .collect();
    assert!(mean_se(&inside).z(0.5) <= 3.0);
}

#[test]
fn empirical_characteristic_function() {
    let inc = StableIncrements::new(1.6, 2.0).unwrap();
    let mut rng = seeded(2, 0);
    let dt = 0.05;
    let x: Vec<f64> = (0..50_000).map(|_| inc.sample(dt, &mut rng)).collect();
    for z in [1.0, 3.0] {
        let c: Vec<f64> = x.iter().map(|v| (2.0 * std::f64::consts::PI * z * v).cos()).collect();
        assert!(mean_se(&c).z(inc.characteristic(dt, z)) <= 3.0, "z = {z}");
    }
}

#[test]
fn admissible_alpha_only() {
    assert!(StableIncrements::new(1.0, 1.0).is_err());
    assert!(StableIncrements::new(2.1, 1.0).is_err());
    assert!(StableIncrements::new(1.5, 0.0).is_err());
    assert!(JumpMeasure::new(1.0, 2.0, 1.0).is_err());
    assert!(JumpMeasure::with_cutoff(1.0, 1.5, 1e-5, 1e-4).is_err());
}

#[test]
fn counts_and_square_sums_match_measure() {
    let m = JumpMeasure::new(1.0, 1.5, 1.0).unwrap();
    let dt = 1e-3;
    let expect = 2.0 * (1e-4f64.powf(-1.5) - 1.0) / 1.5;
    let runs: Vec<JumpRecord> = (0..4000).map(|s| sample_small_jumps(&m, 0.0, dt, &mut seeded(3, s)).unwrap()).collect();
    assert!((runs[0].expected_count - dt * expect).abs() < 1e-9 * expect);
    let n: Vec<f64> = runs.iter().map(|r| r.sizes.len() as f64).collect();
    assert!(mean_se(&n).z(dt * expect) <= 3.0);
    let s2: Vec<f64> = runs.iter().map(|r| r.power_sum(2.0)).collect();
    // int y^2 mu(dy) = 2 (1 - delta^{1/2}) / (1/2)
    assert!(mean_se(&s2).z(dt * 4.0 * (1.0 - 1e-2)) <= 3.0);
}

#[test]
fn second_moment_is_mean_squared_plus_variance() {
    let m = JumpMeasure::new(1.0, 1.5, 1.0).unwrap();
    let dt = 1e-3;
    let m1 = jump_moment(1, 0.0, dt, &m).unwrap();
    let m2 = jump_moment(2, 0.0, dt, &m).unwrap();
    let c2 = campbell_moment(2, 0.0, dt, &m).unwrap();
    assert!((c2 - (m1 * m1 + m2)).abs() < 1e-14 * c2);
}

/// `dt int y^{2i} e^{lambda y^2} mu(dy)` by midpoint rule in `y`.
fn midpoint_moment(i: usize, lambda: f64, dt: f64, m: &JumpMeasure) -> f64 {
    let panels = 2_000_000;
    let h = (m.c - m.delta) / panels as f64;
    let s: f64 = (0..panels)
        .map(|p| {
            let y = m.delta + (p as f64 + 0.5) * h;
            y.powf(2.0 * i as f64 - 1.0 - m.alpha) * (lambda * y * y).exp()
        })
        .sum();
    dt * 2.0 * m.k * s * h
}

#[test]
fn damped_moments_against_direct_quadrature() {
    // a cutoff of 1e-2 keeps the integrand smooth enough for a plain midpoint rule
    let m = JumpMeasure::with_cutoff(1.0, 1.5, 1.0, 1e-2).unwrap();
    for i in 1..=3 {
        let q = jump_moment(i, -5.0, 1e-3, &m).unwrap();
        let d = midpoint_moment(i, -5.0, 1e-3, &m);
        assert!((q / d - 1.0).abs() < 1e-6, "i = {i}: {q} vs {d}");
    }
}

#[test]
fn first_moment_is_derivative_of_mgf() {
    let m = JumpMeasure::new(1.0, 1.5, 1.0).unwrap();
    let (dt, lam, h) = (0.5, -5.0, 1e-4);
    let fd = (mgf(lam + h, dt, &m).unwrap() - mgf(lam - h, dt, &m).unwrap()) / (2.0 * h);
    let c1 = campbell_moment(1, lam, dt, &m).unwrap();
    assert!((fd / c1 - 1.0).abs() < 1e-6, "{fd} vs {c1}");
    let fd2 = (mgf(lam + h, dt, &m).unwrap() - 2.0 * mgf(lam, dt, &m).unwrap() + mgf(lam - h, dt, &m).unwrap()) / (h * h);
    let c2 = campbell_moment(2, lam, dt, &m).unwrap();
    assert!((fd2 / c2 - 1.0).abs() < 1e-4, "{fd2} vs {c2}");
}

#[test]
fn positive_lambda_refused() {
    let m = JumpMeasure::new(1.0, 1.5, 1.0).unwrap();
    assert!(campbell_moment(2, 0.5, 1e-3, &m).is_err());
    assert!(coefficient_table(MAX_ORDER + 1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sizes_stay_in_support(alpha in 0.2f64..1.95, c in 0.01f64..3.0, seed in 0u64..1000) {
        let m = JumpMeasure::new(1.0, alpha, c).unwrap();
        let mut rng = seeded(seed, 0);
        for _ in 0..64 {
            let y = m.sample_size(&mut rng).abs();
            prop_assert!(y >= m.delta && y <= m.c);
        }
    }

    #[test]
    fn scale_is_self_similar(alpha in 1.01f64..2.0, c in 0.1f64..5.0, dt in 1e-4f64..1.0, f in 1.0f64..8.0) {
        let inc = StableIncrements::new(alpha, c).unwrap();
        prop_assert!((inc.scale(f * dt) / inc.scale(dt) - f.powf(1.0 / alpha)).abs() < 1e-12);
        let phi = inc.characteristic(dt, f);
        prop_assert!(phi > 0.0 && phi <= 1.0);
    }

    #[test]
    fn campbell_moments_are_positive_and_decay_in_lambda(n in 1usize..=4, lam in -20.0f64..-0.1) {
        let m = JumpMeasure::new(1.0, 1.5, 1.0).unwrap();
        let a = campbell_moment(n, lam, 1e-2, &m).unwrap();
        let b = campbell_moment(n, 0.0, 1e-2, &m).unwrap();
        prop_assert!(a > 0.0 && a < b);
    }
}

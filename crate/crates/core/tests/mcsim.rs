use std::f64::consts::TAU;

use parasde::levy::StableIncrements;
use parasde::mcsim::*;
use parasde::spectral::{uniform_times, Field, FourierGrid, TimeField};
use parasde::stats::{ks_two_sample, mean_se};
use parasde::synth::{seeded, trig_poly};
use proptest::prelude::*;

fn cfg(paths: usize, steps: usize) -> SimulationConfig {
    SimulationConfig {
        x0: 0.1,
        paths,
        steps,
        horizon: 1.0,
        seed: 7,
    }
}

#[test]
fn mollification_truncates_sharply() {
    let g = FourierGrid::one_d(32).unwrap();
    let u = trig_poly(g, 15, &mut seeded(1, 0));
    let v = TimeField::constant(uniform_times(0.0, 1.0, 4), &u, 3.0).unwrap();
    let full = mollify_drift(&v, 15).unwrap();
    assert!(full.sub(&v).unwrap().max_abs_coeff() < 1e-15);
    let mean = mollify_drift(&v, 0).unwrap();
    assert!(mean.value(2).sub(&Field::constant(g, u.coeff([0, 0]).re)).unwrap().max_abs_coeff() < 1e-15);
    assert!(mollify_drift(&v, 16).is_err());
}

#[test]
fn constant_drift_shifts_the_median() {
    let c = cfg(20_000, 64);
    let noise = StableIncrements::new(1.7, 1.0).unwrap();
    let g = FourierGrid::one_d(8).unwrap();
    let drift = ModeTable::constant(&Field::constant(g, 0.8), 0).unwrap();
    let ens = euler_maruyama(&c, &noise, &drift, &[32, 64]).unwrap();
    for (i, t) in [0.5, 1.0].into_iter().enumerate() {
        let above: Vec<f64> = ens.column(i).iter().map(|x| f64::from(u8::from(x - c.x0 > 0.8 * t))).collect();
        assert!(mean_se(&above).z(0.5) <= 3.0, "t = {t}");
    }
}

#[test]
fn ensembles_are_reproducible() {
    let c = cfg(1000, 64);
    let noise = StableIncrements::new(1.9, 1.0).unwrap();
    let g = FourierGrid::one_d(16).unwrap();
    let drift = ModeTable::constant(&Field::sine(g, [1, 0], 0.5).unwrap(), 3).unwrap();
    let a = euler_maruyama(&c, &noise, &drift, &[64]).unwrap();
    let b = euler_maruyama(&c, &noise, &drift, &[64]).unwrap();
    assert_eq!(a.x, b.x);
}

/// Euler with the increments of a 4096-step path summed in blocks, so every
/// step size sees the same noise.
fn coupled_means(alpha: f64, paths: usize, levels: &[usize]) -> Vec<f64> {
    const FINE: usize = 4096;
    let noise = StableIncrements::new(alpha, 1.0).unwrap();
    let drift = |x: f64| 0.8 * (TAU * x).sin();
    let mut acc = vec![0.0; levels.len()];
    for p in 0..paths {
        let mut rng = seeded(13, p as u64);
        let dl: Vec<f64> = (0..FINE).map(|_| noise.sample(1.0 / FINE as f64, &mut rng)).collect();
        let reference = {
            let mut x = 0.1;
            for d in &dl {
                x += drift(x) / FINE as f64 + d;
            }
            (TAU * x).cos()
        };
        for (a, &n) in acc.iter_mut().zip(levels) {
            let mut x = 0.1;
            for block in dl.chunks(FINE / n) {
                x += drift(x) / n as f64 + block.iter().sum::<f64>();
            }
            *a += (TAU * x).cos() - reference;
        }
    }
    acc.iter().map(|a| (a / paths as f64).abs()).collect()
}

#[test]
fn weak_error_halves_with_the_step() {
    let e = coupled_means(1.9, 4000, &[16, 32, 64]);
    assert!(e[0] / e[1] >= 1.5 && e[1] / e[2] >= 1.5, "{e:?}");
}

#[test]
fn moments_of_trivial_drifts() {
    let c = cfg(1000, 256);
    let noise = StableIncrements::new(1.9, 1.0).unwrap();
    let lags = [2, 8, 64];
    let zero = drift_moment_scaling(&c, &noise, &ModeTable::zero(), 2, &lags, 1.0).unwrap();
    assert!(zero.rows.iter().all(|r| r.moment == 0.0));
    let g = FourierGrid::one_d(8).unwrap();
    let flat = ModeTable::constant(&Field::constant(g, 1.5), 0).unwrap();
    for rho in [2, 4] {
        let s = drift_moment_scaling(&c, &noise, &flat, rho, &lags, 1.0).unwrap();
        for r in &s.rows {
            assert!((r.moment / (1.5 * r.lag).powi(rho as i32) - 1.0).abs() < 1e-12);
        }
        assert!((s.slope - rho as f64).abs() < 1e-9);
    }
    assert!(drift_moment_scaling(&c, &noise, &flat, 3, &lags, 1.0).is_err());
    assert!(drift_moment_scaling(&c, &noise, &flat, 2, &[2, 8], 1.0).is_err());
}

/// `exp(-rate (1 - t)) cos(2 pi x)` on nodes that contain every test time.
fn decaying_cosine(rate: f64) -> TimeField {
    let g = FourierGrid::one_d(8).unwrap();
    TimeField::from_fn(uniform_times(0.0, 1.0, 4), 1.0, |t| Field::cosine(g, [1, 0], (-rate * (1.0 - t)).exp()).unwrap())
        .unwrap()
}

#[test]
fn free_martingale_and_wrong_rate() {
    let c = cfg(20_000, 64);
    // E exp(2 pi i L_t) = e^{-t}, so the free cosine decays at rate 1
    let noise = StableIncrements::new(1.9, 1.0).unwrap();
    let pairs = [(0.25, 0.5), (0.5, 1.0)];
    let run = |rate| {
        martingale_test(&c, &noise, &ModeTable::zero(), &decaying_cosine(rate), &ModeTable::zero(), &pairs, &Functional::ALL)
            .unwrap()
    };
    let good = run(1.0);
    assert!(good.pass, "max z {}", good.max_z);
    assert_eq!(good.batches, MARTINGALE_BATCHES);
    assert!(run(3.0).max_z > 5.0);
}

#[test]
fn coupled_levels_agree_exactly() {
    let c = cfg(1000, 64);
    let noise = StableIncrements::new(1.9, 1.0).unwrap();
    let g = FourierGrid::one_d(16).unwrap();
    let f = Field::sine(g, [2, 0], 0.3).unwrap();
    let levels = vec![
        (2, ModeTable::constant(&f, 2).unwrap()),
        (4, ModeTable::constant(&f, 4).unwrap()),
        (6, ModeTable::constant(&f, 6).unwrap()),
    ];
    let t = marginal_convergence(&c, &noise, &levels, &[0.5, 1.0]).unwrap();
    assert!(t.rows.iter().all(|r| r.distance == 0.0));
    assert!(t.decreasing);
    assert!(marginal_convergence(&c, &noise, &levels[..1], &[1.0]).is_err());
    assert!(marginal_convergence(&c, &noise, &levels, &[0.3]).is_err());
}

#[test]
fn ks_is_calibrated_under_the_null() {
    let noise = StableIncrements::new(1.8, 1.0).unwrap();
    let small: Vec<f64> = (0..400)
        .map(|s| {
            let mut rng = seeded(21, s);
            let a: Vec<f64> = (0..500).map(|_| noise.sample(0.1, &mut rng)).collect();
            let b: Vec<f64> = (0..500).map(|_| noise.sample(0.1, &mut rng)).collect();
            f64::from(u8::from(ks_two_sample(&a, &b).p < 0.05))
        })
        .collect();
    assert!(mean_se(&small).z(0.05) <= 3.0);
}

#[test]
fn brox_index_range() {
    assert!(check_brox_alpha(1.6).is_err());
    assert!(check_brox_alpha(1.75).is_err());
    assert!(check_brox_alpha(1.76).is_ok());
    assert!(check_brox_alpha(2.0).is_ok());
    assert!(check_brox_alpha(2.01).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn tables_are_periodic_and_match_fields(seed in 0u64..1000, x in -2.0f64..2.0) {
        let g = FourierGrid::one_d(32).unwrap();
        let u = trig_poly(g, 10, &mut seeded(seed, 0));
        let t = ModeTable::constant(&u, 15).unwrap();
        prop_assert!((t.eval(0, x) - t.eval(0, x + 1.0)).abs() < 1e-12);
        prop_assert!((t.eval(0, x) - u.eval([x, 0.0]).re).abs() < 1e-12);
    }
}

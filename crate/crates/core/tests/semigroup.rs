use std::f64::consts::PI;

use num_complex::Complex64;
use parasde::semigroup::{Atom, Semigroup, StableSymbol};
use parasde::spectral::{uniform_times, DyadicPartition, Field, FourierGrid, TimeField};
use parasde::synth::{besov_sample, seeded};
use proptest::prelude::*;

fn sg(alpha: f64, n: usize) -> (FourierGrid, Semigroup) {
    let g = FourierGrid::one_d(n).unwrap();
    (g, Semigroup::new(StableSymbol::fractional_laplacian(alpha).unwrap(), g).unwrap())
}

#[test]
fn symbol_values() {
    let half = |d: f64| Atom { dir: vec![d], weight: 0.5 };
    let s = StableSymbol::new(1.5, vec![half(1.0), half(-1.0)]).unwrap();
    assert!((s.psi(&[2.0]) - 2f64.powf(1.5)).abs() < 1e-12);
    assert_eq!(s.psi(&[0.0]), 0.0);
    let f = StableSymbol::fractional_laplacian(1.7).unwrap();
    for k in [1.0, 3.0, 17.0] {
        let exact = (2.0 * PI * k).powf(1.7);
        assert!((f.psi(&[k]) / exact - 1.0).abs() < 1e-13);
    }
}

#[test]
fn generator_and_semigroup_on_modes() {
    let (g, s) = sg(1.8, 64);
    assert_eq!(s.apply_generator(&Field::constant(g, 1.0)).unwrap().max_abs_coeff(), 0.0);
    let e5 = Field::mode(g, [5, 0]).unwrap();
    let psi = (2.0 * PI * 5.0).powf(1.8);
    let l = s.apply_generator(&e5).unwrap();
    assert!((l.coeff([5, 0]) - Complex64::from(psi)).norm() < 1e-9);
    let u = besov_sample(g, 0.5, &mut seeded(1, 0));
    assert_eq!(s.apply(0.0, &u).unwrap(), u);
    let p = s.apply(0.01, &e5).unwrap();
    assert!((p.coeff([5, 0]).re - (-0.01 * psi).exp()).abs() < 1e-15);
}

#[test]
fn jt_closed_forms() {
    let (g, s) = sg(1.6, 32);
    let times = uniform_times(0.0, 1.0, 8);
    let flat = TimeField::constant(times.clone(), &Field::constant(g, 1.0), 1.0).unwrap();
    let e3 = TimeField::constant(times.clone(), &Field::mode(g, [3, 0]).unwrap(), 1.0).unwrap();
    let psi = (6.0 * PI).powf(1.6);
    for t in [0.0, 0.3, 0.625, 1.0] {
        let a = s.jt_apply(&flat, t).unwrap();
        assert!((a.coeff([0, 0]).re - (1.0 - t)).abs() < 1e-14);
        let b = s.jt_apply(&e3, t).unwrap();
        let exact = -(-(1.0 - t) * psi).exp_m1() / psi;
        assert!((b.coeff([3, 0]).re - exact).abs() < 1e-15, "t = {t}");
    }
}

#[test]
fn free_laplacian_matches_heat_multiplier() {
    let (g, s) = sg(2.0, 64);
    let u = besov_sample(g, 1.0, &mut seeded(5, 0));
    let times = uniform_times(0.0, 0.01, 4);
    let ev = s.free_evolution(&u, &times).unwrap();
    for (i, &t) in times.iter().enumerate() {
        for k in -31i64..=31 {
            let heat = (-4.0 * PI * PI * (k * k) as f64 * (0.01 - t)).exp();
            let want = u.coeff([k, 0]) * heat;
            assert!((ev.value(i).coeff([k, 0]) - want).norm() <= 1e-10 * u.coeff([k, 0]).norm().max(1e-300));
        }
    }
}

#[test]
fn commutators_with_unit_or_zero_data_vanish() {
    let (g, s) = sg(1.8, 64);
    let part = DyadicPartition::new(g).unwrap();
    let times = uniform_times(0.0, 1.0, 16);
    let h = TimeField::from_fn(times.clone(), 0.0, |t| besov_sample(g, -0.6, &mut seeded(9, 0)).scale(1.0 + t)).unwrap();
    let one = TimeField::constant(times.clone(), &Field::constant(g, 1.0), 3.0).unwrap();
    // 1 < w keeps the blocks j >= 1 of w, a Fourier multiplier that commutes with J^T
    assert!(s.commutator_jt(&one, &h, &part).unwrap().max_abs_coeff() < 1e-14);
    let gg = TimeField::from_fn(times.clone(), 0.7, |_| besov_sample(g, 0.7, &mut seeded(9, 1))).unwrap();
    let zero = TimeField::zeros(times, g).unwrap();
    assert_eq!(s.commutator_jt(&gg, &zero, &part).unwrap().max_abs_coeff(), 0.0);

    let u = besov_sample(g, 0.7, &mut seeded(9, 2));
    let v = besov_sample(g, -0.6, &mut seeded(9, 3));
    assert_eq!(s.commutator_semigroup(0.0, &u, &v, &part).unwrap().max_abs_coeff(), 0.0);
    assert!(s.commutator_semigroup(0.01, &Field::constant(g, 1.0), &v, &part).unwrap().max_abs_coeff() < 1e-14);
    assert!(s.commutator_semigroup(0.01, &u, &v, &part).unwrap().max_abs_coeff() > 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn semigroup_property(alpha in 0.5f64..2.0, s1 in 0.0f64..0.05, s2 in 0.0f64..0.05, seed in 0u64..1000) {
        let (g, s) = sg(alpha, 32);
        let u = besov_sample(g, 0.3, &mut seeded(seed, 0));
        let a = s.apply(s1, &s.apply(s2, &u).unwrap()).unwrap();
        let b = s.apply(s1 + s2, &u).unwrap();
        prop_assert!(a.sub(&b).unwrap().max_abs_coeff() < 1e-14);
    }

    #[test]
    fn semigroup_contracts_every_mode(alpha in 0.5f64..2.0, t in 0.0f64..1.0, seed in 0u64..1000) {
        let (g, s) = sg(alpha, 32);
        let u = besov_sample(g, 0.0, &mut seeded(seed, 0));
        let p = s.apply(t, &u).unwrap();
        for (a, b) in p.coeffs().iter().zip(u.coeffs()) {
            prop_assert!(a.norm() <= b.norm() + 1e-15);
        }
    }

    #[test]
    fn jt_is_linear(a in -2.0f64..2.0, seed in 0u64..1000) {
        let (g, s) = sg(1.8, 32);
        let times = uniform_times(0.0, 1.0, 6);
        let v = TimeField::from_fn(times.clone(), 0.0, |t| besov_sample(g, 0.0, &mut seeded(seed, 1)).scale(t)).unwrap();
        let w = TimeField::from_fn(times, 0.0, |t| besov_sample(g, 0.0, &mut seeded(seed, 2)).scale(1.0 - t)).unwrap();
        let lhs = s.jt_all(&v.axpy(a, &w).unwrap()).unwrap();
        let rhs = s.jt_all(&v).unwrap().axpy(a, &s.jt_all(&w).unwrap()).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().max_abs_coeff() < 1e-13);
    }
}

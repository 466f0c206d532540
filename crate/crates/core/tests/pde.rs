use parasde::enhanced_drift::{lift_smooth, EnhancedDrift};
use parasde::pde::{
    classical_solve, drift_product, rough_product, solve_rough, solve_young, BackwardData, Forcing,
    ParacontrolledSolution, RoughContext, SolverOptions,
};
use parasde::semigroup::{Semigroup, StableSymbol};
use parasde::spectral::{uniform_times, DyadicPartition, Field, FourierGrid, TimeField};

struct Setup {
    grid: FourierGrid,
    sg: Semigroup,
    part: DyadicPartition,
    times: Vec<f64>,
}

fn setup(alpha: f64, n: usize, m: usize) -> Setup {
    let grid = FourierGrid::one_d(n).unwrap();
    let sg = Semigroup::new(StableSymbol::fractional_laplacian(alpha).unwrap(), grid).unwrap();
    let part = DyadicPartition::new(grid).unwrap();
    Setup { grid, sg, part, times: uniform_times(0.0, 1.0, m) }
}

fn smooth_eta(s: &Setup) -> TimeField {
    TimeField::from_fn(s.times.clone(), 3.0, |t| {
        Field::cosine(s.grid, [1, 0], 0.4)
            .unwrap()
            .axpy(0.25 * (1.0 + t), &Field::sine(s.grid, [3, 0], 1.0).unwrap())
            .unwrap()
            .axpy(0.1, &Field::constant(s.grid, 1.0))
            .unwrap()
    })
    .unwrap()
}

fn smooth_f(s: &Setup) -> TimeField {
    TimeField::from_fn(s.times.clone(), 3.0, |t| {
        Field::cosine(s.grid, [2, 0], 1.0 - t).unwrap().axpy(0.5, &Field::constant(s.grid, 1.0)).unwrap()
    })
    .unwrap()
}

fn rel_err(a: &TimeField, b: &TimeField) -> f64 {
    a.sub(b).unwrap().sup_norm() / b.sup_norm()
}

#[test]
fn free_equation_is_semigroup() {
    let s = setup(1.5, 64, 32);
    let eta = TimeField::zeros(s.times.clone(), s.grid).unwrap();
    let drift = EnhancedDrift::new(vec![eta.clone()], None, 0.5, &s.sg, &s.part).unwrap();
    let terminal = Field::cosine(s.grid, [3, 0], 1.0).unwrap();
    let data = BackwardData::smooth(eta, terminal.clone());
    let sol = solve_young(&drift, &data, &s.sg, &s.part, &SolverOptions::default()).unwrap();
    let free = s.sg.free_evolution(&terminal, &s.times).unwrap();
    assert!(sol.u.sub(&free).unwrap().max_abs_coeff() < 1e-13);
}

#[test]
fn flat_forcing_gives_linear_decay() {
    let s = setup(1.5, 64, 32);
    let zero = TimeField::zeros(s.times.clone(), s.grid).unwrap();
    let drift = EnhancedDrift::new(vec![zero.clone()], None, 0.5, &s.sg, &s.part).unwrap();
    let one = TimeField::constant(s.times.clone(), &Field::constant(s.grid, 1.0), 3.0).unwrap();
    let data = BackwardData::smooth(one, Field::zeros(s.grid));
    let sol = solve_young(&drift, &data, &s.sg, &s.part, &SolverOptions::default()).unwrap();
    for (i, t) in s.times.iter().enumerate() {
        assert!((sol.u.value(i).coeff([0, 0]).re + (1.0 - t)).abs() < 1e-13);
    }
}

#[test]
fn manufactured_solution_is_recovered() {
    let s = setup(1.7, 64, 256);
    let eta = smooth_eta(&s);
    let ustar = TimeField::from_fn(s.times.clone(), 3.0, |t| {
        Field::cosine(s.grid, [1, 0], (-t).exp()).unwrap()
    })
    .unwrap();
    // f = d_t u - psi(D) u + V.grad u
    let f = TimeField::new(
        s.times.clone(),
        (0..s.times.len())
            .map(|i| {
                let u = ustar.value(i);
                let ut = u.scale(-1.0);
                let gen = s.sg.apply_generator(u).unwrap();
                let adv = drift_product(u, &[eta.value(i)]).unwrap();
                ut.sub(&gen).unwrap().add(&adv).unwrap()
            })
            .collect(),
        3.0,
    )
    .unwrap();
    let u = classical_solve(&[eta], &f, ustar.value(s.times.len() - 1), &s.sg).unwrap();
    assert!(rel_err(&u, &ustar) < 1e-4, "{}", rel_err(&u, &ustar));
}

#[test]
fn young_matches_classical() {
    let s = setup(1.8, 256, 256);
    let eta = smooth_eta(&s);
    let drift = EnhancedDrift::new(vec![eta.clone()], None, 0.5, &s.sg, &s.part).unwrap();
    let terminal = Field::cosine(s.grid, [2, 0], 1.0).unwrap();
    let f = smooth_f(&s);
    let data = BackwardData::smooth(f.clone(), terminal.clone());
    let y = solve_young(&drift, &data, &s.sg, &s.part, &SolverOptions::default()).unwrap();
    let c = classical_solve(&[eta], &f, &terminal, &s.sg).unwrap();
    assert!(rel_err(&y.u, &c) < 1e-3, "{}", rel_err(&y.u, &c));
}

#[test]
fn rough_young_classical_agree() {
    let s = setup(1.8, 128, 256);
    let eta = smooth_eta(&s);
    let drift = lift_smooth(&[eta.clone()], -0.2, &s.sg, &s.part).unwrap();
    let terminal = Field::cosine(s.grid, [2, 0], 1.0).unwrap();
    let f = smooth_f(&s);
    let data = BackwardData::smooth(f.clone(), terminal.clone());
    let opts = SolverOptions::default();
    let r = solve_rough(&drift, &data, &s.sg, &s.part, &opts).unwrap();
    let y = solve_young(&drift.without_v2(), &data, &s.sg, &s.part, &opts).unwrap();
    let c = classical_solve(&[eta], &f, &terminal, &s.sg).unwrap();
    assert!(r.reconstruction_residual <= 1e-8);
    assert!(rel_err(&r.u, &c) < 1e-3, "rough {}", rel_err(&r.u, &c));
    assert!(rel_err(&y.u, &c) < 1e-3, "young {}", rel_err(&y.u, &c));
    assert!(rel_err(&r.u, &y.u) < 1e-3);
}

#[test]
fn rough_product_collapses_for_smooth_data() {
    let s = setup(1.8, 128, 32);
    let eta = smooth_eta(&s);
    let drift = lift_smooth(&[eta.clone()], -0.2, &s.sg, &s.part).unwrap();
    let ctx = RoughContext::new(&drift, &s.sg, &s.part).unwrap();
    let u = TimeField::from_fn(s.times.clone(), 3.0, |t| {
        Field::cosine(s.grid, [1, 0], 1.0 + t)
            .unwrap()
            .axpy(0.3, &Field::sine(s.grid, [4, 0], 1.0).unwrap())
            .unwrap()
    })
    .unwrap();
    let sol = ParacontrolledSolution::from_u(u.clone(), None, 1.35, ctx.jv1(), &s.part).unwrap();
    let rp = rough_product(&sol, &ctx, &s.part).unwrap();
    let plain = u
        .zip_map(&eta, |a, b| drift_product(a, &[b]))
        .unwrap();
    let err = rp.sub(&plain).unwrap().sup_norm() / plain.sup_norm();
    assert!(err < 1e-8, "{err}");
}

#[test]
fn drift_component_forcing_shifts_derivative() {
    let s = setup(1.8, 64, 32);
    let eta = smooth_eta(&s);
    let drift = lift_smooth(&[eta.clone()], -0.2, &s.sg, &s.part).unwrap();
    let data = BackwardData {
        f: Forcing::DriftComponent(0),
        terminal: Field::zeros(s.grid),
        theta: None,
        terminal_regularity: 3.0,
    };
    let r = solve_rough(&drift, &data, &s.sg, &s.part, &SolverOptions::default()).unwrap();
    let c = classical_solve(&[eta.clone()], &eta, &Field::zeros(s.grid), &s.sg).unwrap();
    assert!(rel_err(&r.u, &c) < 1e-3);
    assert!(r.reconstruction_residual <= 1e-8);
}

#[test]
fn solution_is_affine_in_data() {
    let s = setup(1.8, 64, 32);
    let eta = smooth_eta(&s);
    let drift = EnhancedDrift::new(vec![eta], None, 0.5, &s.sg, &s.part).unwrap();
    let opts = SolverOptions::default();
    let f = smooth_f(&s);
    let t1 = Field::cosine(s.grid, [2, 0], 1.0).unwrap();
    let t2 = Field::sine(s.grid, [1, 0], 1.0).unwrap();
    let solve = |f: TimeField, t: Field| {
        solve_young(&drift, &BackwardData::smooth(f, t), &s.sg, &s.part, &opts).unwrap().u
    };
    let a = solve(f.clone(), t1.clone());
    let b = solve(f.scale(0.0), t2.clone());
    let ab = solve(f.clone(), t1.add(&t2).unwrap());
    let err = ab.sub(&a.add(&b).unwrap()).unwrap().sup_norm() / ab.sup_norm();
    assert!(err < 1e-8, "{err}");
}


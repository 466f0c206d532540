use serde::{Deserialize, Serialize};

use super::{growth, Outcome, GROWTH_LIMIT};
use crate::enhanced_drift::{lift_smooth, lift_white_noise, sample_white_noise, EnhancedDrift, WhiteNoiseSample};
use crate::error::{param, Result};
use crate::pde::{
    classical_solve, drift_product, lipschitz_numerator, solve_rough, solve_young, BackwardData, Diagnostics, Forcing,
    SolverOptions,
};
use crate::report::{Check, Table};
use crate::semigroup::{Semigroup, StableSymbol};
use crate::spectral::{sup_besov, uniform_times, DyadicPartition, Field, FourierGrid, TimeField};

/// One term `(cos cos(2 pi k x) + sin sin(2 pi k x)) (1 + slope t)`; at
/// `k = 0` only `cos` counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrigTerm {
    pub k: i64,
    #[serde(default)]
    pub cos: f64,
    #[serde(default)]
    pub sin: f64,
    #[serde(default)]
    pub slope: f64,
}

/// Band-limited real data given as a list of trigonometric terms (d = 1).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SmoothDrift {
    pub terms: Vec<TrigTerm>,
}

impl SmoothDrift {
    pub fn new(terms: &[(i64, f64, f64, f64)]) -> Self {
        Self {
            terms: terms
                .iter()
                .map(|&(k, cos, sin, slope)| TrigTerm { k, cos, sin, slope })
                .collect(),
        }
    }

    pub fn at(&self, grid: FourierGrid, t: f64) -> Result<Field> {
        let mut f = Field::zeros(grid);
        for term in &self.terms {
            if term.k < 0 || term.k as usize >= grid.n() / 2 {
                return Err(param("terms.k", format!("{} outside 0 .. N/2 = {}", term.k, grid.n() / 2)));
            }
            let s = 1.0 + term.slope * t;
            let g = if term.k == 0 {
                Field::constant(grid, term.cos)
            } else {
                Field::cosine(grid, [term.k, 0], term.cos)?.add(&Field::sine(grid, [term.k, 0], term.sin)?)?
            };
            f = f.axpy(s, &g)?;
        }
        Ok(f)
    }

    pub fn time_field(&self, grid: FourierGrid, times: &[f64]) -> Result<TimeField> {
        let values = times.iter().map(|&t| self.at(grid, t)).collect::<Result<Vec<_>>>()?;
        TimeField::new(times.to_vec(), values, f64::INFINITY)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.cos == 0.0 && (t.sin == 0.0 || t.k == 0))
    }
}

fn default_drift() -> SmoothDrift {
    SmoothDrift::new(&[(1, 0.4, 0.0, 0.0), (3, 0.0, 0.25, 1.0), (0, 0.1, 0.0, 0.0)])
}

fn default_forcing() -> SmoothDrift {
    SmoothDrift::new(&[(2, 1.0, 0.0, -1.0), (0, 0.5, 0.0, 0.0)])
}

fn default_terminal() -> SmoothDrift {
    SmoothDrift::new(&[(2, 1.0, 0.0, 0.0)])
}

struct Setup {
    grid: FourierGrid,
    sg: Semigroup,
    part: DyadicPartition,
    times: Vec<f64>,
}

fn setup(alpha: f64, n: usize, steps: usize) -> Result<Setup> {
    if steps < 1 {
        return Err(param("m", "at least one time step"));
    }
    let grid = FourierGrid::one_d(n)?;
    Ok(Setup {
        grid,
        sg: Semigroup::new(StableSymbol::fractional_laplacian(alpha)?, grid)?,
        part: DyadicPartition::new(grid)?,
        times: uniform_times(0.0, 1.0, steps),
    })
}

fn rel_err(a: &TimeField, b: &TimeField) -> Result<f64> {
    Ok(a.sub(b)?.sup_norm() / b.sup_norm())
}

/// Real samples of `u` at `count` evenly spaced nodes (always including both ends).
fn snapshot_table(name: &str, u: &TimeField, count: usize) -> Table {
    let mut t = Table::new(name, &["t", "x", "u"]);
    let m = u.len() - 1;
    let count = count.clamp(2, m + 1);
    let mut nodes: Vec<usize> = (0..count).map(|i| i * m / (count - 1)).collect();
    nodes.dedup();
    for i in nodes {
        let s = u.value(i).real_samples(1);
        let n = s.len();
        for (j, v) in s.iter().enumerate() {
            t.push(vec![u.times()[i].into(), (j as f64 / n as f64).into(), (*v).into()]);
        }
    }
    t
}

// ---------------------------------------------------------------- solve-young

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct YoungConfig {
    pub alpha: f64,
    pub n: usize,
    /// Time steps on `[0, 1]`.
    pub m: usize,
    /// Declared drift regularity.
    pub beta: f64,
    pub theta: Option<f64>,
    pub drift: SmoothDrift,
    pub forcing: SmoothDrift,
    pub terminal: SmoothDrift,
    pub snapshots: usize,
    /// Relative sup-norm tolerance against the classical solver.
    pub tol: f64,
}

impl Default for YoungConfig {
    fn default() -> Self {
        Self {
            alpha: 1.8,
            n: 256,
            m: 256,
            beta: 0.5,
            theta: None,
            drift: default_drift(),
            forcing: default_forcing(),
            terminal: default_terminal(),
            snapshots: 5,
            tol: 1e-3,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct YoungReport {
    pub theta: f64,
    pub diagnostics: Diagnostics,
    pub relative_error_vs_classical: f64,
    /// `sup |u - P_{T-t} u_T|` over nodes, the distance to the free solution.
    pub free_distance: f64,
    pub tol: f64,
    #[serde(skip)]
    pub u: TimeField,
    #[serde(skip)]
    snapshots: usize,
}

/// Young-regime solve on smooth data, compared with the classical solver.
pub fn solve_young_probe(cfg: &YoungConfig) -> Result<YoungReport> {
    let s = setup(cfg.alpha, cfg.n, cfg.m)?;
    let v = cfg.drift.time_field(s.grid, &s.times)?;
    let f = cfg.forcing.time_field(s.grid, &s.times)?;
    let terminal = cfg.terminal.at(s.grid, 1.0)?;
    let drift = EnhancedDrift::new(vec![v.clone()], None, cfg.beta, &s.sg, &s.part)?;
    let mut data = BackwardData::smooth(f.clone(), terminal.clone());
    data.theta = cfg.theta;
    let sol = solve_young(&drift, &data, &s.sg, &s.part, &SolverOptions::default())?;
    let c = classical_solve(&[v], &f, &terminal, &s.sg)?;
    let free = s.sg.free_evolution(&terminal, &s.times)?;
    Ok(YoungReport {
        theta: sol.theta,
        relative_error_vs_classical: rel_err(&sol.u, &c)?,
        free_distance: sol.u.sub(&free)?.sup_norm(),
        diagnostics: sol.diagnostics,
        tol: cfg.tol,
        u: sol.u,
        snapshots: cfg.snapshots,
    })
}

impl Outcome for YoungReport {
    fn checks(&self) -> Vec<Check> {
        vec![
            Check::at_most("relative_error_vs_classical", self.relative_error_vs_classical, self.tol),
            Check::at_most("fixed_point_residual", self.diagnostics.max_residual, 1e-6),
        ]
    }

    fn tables(&self) -> Vec<Table> {
        vec![snapshot_table("snapshots", &self.u, self.snapshots)]
    }
}

// ---------------------------------------------------------------- solve-rough

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoughSource {
    /// `V2` from the smooth lift of `drift`.
    Smooth,
    /// Truncated white noise and its lift.
    WhiteNoise,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForcingKind {
    /// The `forcing` field.
    Field,
    /// `f = V1`.
    Drift,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RoughConfig {
    pub alpha: f64,
    pub n: usize,
    pub m: usize,
    pub source: RoughSource,
    /// Declared regularity of a smooth drift.
    pub beta: f64,
    pub drift: SmoothDrift,
    pub xi_n: usize,
    pub xi_seed: u64,
    pub eps: f64,
    pub zero_mean: bool,
    pub forcing_kind: ForcingKind,
    pub forcing: SmoothDrift,
    pub terminal: SmoothDrift,
    pub theta: Option<f64>,
    /// Repeat the solve at `(2N, 2M)` and compare.
    pub refine: bool,
    pub refine_tol: f64,
    /// Agreement with the Young and classical solvers (smooth source).
    pub tol: f64,
    pub snapshots: usize,
}

impl Default for RoughConfig {
    fn default() -> Self {
        Self {
            alpha: 1.9,
            n: 128,
            m: 128,
            source: RoughSource::WhiteNoise,
            beta: -0.2,
            drift: default_drift(),
            xi_n: 32,
            xi_seed: 7,
            eps: 0.05,
            zero_mean: false,
            forcing_kind: ForcingKind::Drift,
            forcing: default_forcing(),
            terminal: SmoothDrift::default(),
            theta: None,
            refine: true,
            refine_tol: 0.02,
            tol: 1e-3,
            snapshots: 5,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RoughReport {
    pub beta: f64,
    pub theta: f64,
    pub v1_norm: f64,
    pub v2_norm: Option<f64>,
    pub notes: Vec<String>,
    pub diagnostics: Diagnostics,
    pub reconstruction_residual: f64,
    pub global_residual: f64,
    /// Smooth source: relative sup errors rough-classical, young-classical, rough-young.
    pub three_way: Option<[f64; 3]>,
    /// `||u_{N,M} - u_{2N,2M}||_{C C^theta} / ||u_{2N,2M}||_{C C^theta}`.
    pub refinement: Option<f64>,
    pub tol: f64,
    pub refine_tol: f64,
    #[serde(skip)]
    pub u: TimeField,
    #[serde(skip)]
    snapshots: usize,
}

fn rough_drift(cfg: &RoughConfig, s: &Setup) -> Result<(EnhancedDrift, Option<TimeField>)> {
    match cfg.source {
        RoughSource::Smooth => {
            let v = cfg.drift.time_field(s.grid, &s.times)?;
            Ok((lift_smooth(&[v.clone()], cfg.beta, &s.sg, &s.part)?, Some(v)))
        }
        RoughSource::WhiteNoise => {
            let xi = sample_white_noise(cfg.xi_seed, cfg.xi_n, cfg.zero_mean);
            Ok((lift_white_noise(&xi, &s.sg, &s.part, &s.times, cfg.eps)?, None))
        }
    }
}

fn rough_data(cfg: &RoughConfig, s: &Setup) -> Result<BackwardData> {
    let f = match cfg.forcing_kind {
        ForcingKind::Drift => Forcing::DriftComponent(0),
        ForcingKind::Field => Forcing::Field(cfg.forcing.time_field(s.grid, &s.times)?),
    };
    Ok(BackwardData {
        f,
        terminal: cfg.terminal.at(s.grid, 1.0)?,
        theta: cfg.theta,
        terminal_regularity: f64::INFINITY,
    })
}

/// Field on a coarser grid keeping the modes it resolves.
fn restrict(f: &Field, grid: FourierGrid) -> Result<Field> {
    let c = (0..grid.len())
        .map(|i| if grid.is_nyquist(i) { Default::default() } else { f.coeff(grid.wavevector(i)) })
        .collect();
    Field::from_coeffs(grid, c, f.is_real())
}

/// Paracontrolled solve; smooth sources are checked against the Young and
/// classical solvers, white-noise sources against a doubled resolution.
pub fn solve_rough_probe(cfg: &RoughConfig) -> Result<RoughReport> {
    let s = setup(cfg.alpha, cfg.n, cfg.m)?;
    let (drift, smooth_v) = rough_drift(cfg, &s)?;
    let data = rough_data(cfg, &s)?;
    let opts = SolverOptions::default();
    let sol = solve_rough(&drift, &data, &s.sg, &s.part, &opts)?;
    let three_way = match &smooth_v {
        Some(v) => {
            let f = data.forcing_field(&drift)?;
            let c = classical_solve(&[v.clone()], &f, &data.terminal, &s.sg)?;
            let y = solve_young(&drift.without_v2(), &data, &s.sg, &s.part, &opts)?;
            Some([rel_err(&sol.u, &c)?, rel_err(&y.u, &c)?, rel_err(&sol.u, &y.u)?])
        }
        None => None,
    };
    let refinement = if cfg.refine {
        let fine = setup(cfg.alpha, 2 * cfg.n, 2 * cfg.m)?;
        let (fd, _) = rough_drift(cfg, &fine)?;
        let fsol = solve_rough(&fd, &rough_data(cfg, &fine)?, &fine.sg, &fine.part, &opts)?;
        let coarse_of_fine = TimeField::new(
            s.times.clone(),
            (0..s.times.len())
                .map(|i| restrict(fsol.u.value(2 * i), s.grid))
                .collect::<Result<Vec<_>>>()?,
            sol.theta,
        )?;
        let diff = sup_besov(&sol.u.sub(&coarse_of_fine)?, sol.theta, &s.part)?;
        Some(diff / sup_besov(&coarse_of_fine, sol.theta, &s.part)?)
    } else {
        None
    };
    Ok(RoughReport {
        beta: drift.beta,
        theta: sol.theta,
        v1_norm: drift.norms.v1,
        v2_norm: drift.norms.v2,
        notes: drift.notes.clone(),
        diagnostics: sol.diagnostics.clone(),
        reconstruction_residual: sol.reconstruction_residual,
        global_residual: sol.global_residual,
        three_way,
        refinement,
        tol: cfg.tol,
        refine_tol: cfg.refine_tol,
        u: sol.u,
        snapshots: cfg.snapshots,
    })
}

impl Outcome for RoughReport {
    fn checks(&self) -> Vec<Check> {
        let mut c = vec![
            Check::at_most("reconstruction_residual", self.reconstruction_residual, 1e-8),
            Check::at_most("fixed_point_residual", self.global_residual, 1e-6),
        ];
        if let Some([rc, yc, ry]) = self.three_way {
            c.push(Check::at_most("rough_vs_classical", rc, self.tol));
            c.push(Check::at_most("young_vs_classical", yc, self.tol));
            c.push(Check::at_most("rough_vs_young", ry, self.tol));
        }
        if let Some(r) = self.refinement {
            c.push(Check::at_most("refinement_relative_change", r, self.refine_tol));
        }
        c
    }

    fn tables(&self) -> Vec<Table> {
        vec![snapshot_table("snapshots", &self.u, self.snapshots)]
    }
}

// ---------------------------------------------------------------- PDE consistency

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PdeConfig {
    /// `(alpha, N, M)` of the Young-vs-classical comparison.
    pub young: (f64, usize, usize),
    pub young_tol: f64,
    /// `(alpha, N, M)` of the manufactured solution.
    pub manufactured: (f64, usize, usize),
    pub manufactured_tol: f64,
    /// `(alpha, N, M, beta)` of the three-way comparison.
    pub three_way: (f64, usize, usize, f64),
    pub three_way_tol: f64,
    pub reconstruction_tol: f64,
}

impl Default for PdeConfig {
    fn default() -> Self {
        Self {
            young: (1.8, 256, 256),
            young_tol: 1e-3,
            manufactured: (1.7, 64, 256),
            manufactured_tol: 1e-4,
            three_way: (1.8, 128, 256, -0.2),
            three_way_tol: 1e-3,
            reconstruction_tol: 1e-8,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PdeReport {
    pub young_vs_classical: f64,
    pub manufactured: f64,
    /// Rough-classical, young-classical, rough-young.
    pub three_way: [f64; 3],
    pub reconstruction_residual: f64,
    #[serde(skip)]
    cfg: PdeConfig,
}

/// Solver cross-checks on smooth data: Young against classical, recovery of
/// a manufactured solution, and rough = Young = classical for the smooth lift.
pub fn pde_consistency(cfg: &PdeConfig) -> Result<PdeReport> {
    let young = solve_young_probe(&YoungConfig {
        alpha: cfg.young.0,
        n: cfg.young.1,
        m: cfg.young.2,
        ..YoungConfig::default()
    })?;

    let (alpha, n, m) = cfg.manufactured;
    let s = setup(alpha, n, m)?;
    let eta = default_drift().time_field(s.grid, &s.times)?;
    let ustar = TimeField::from_fn(s.times.clone(), f64::INFINITY, |t| {
        Field::cosine(s.grid, [1, 0], (-t).exp()).expect("resolvable")
    })?;
    // f = d_t u - L u + V.grad u
    let f = TimeField::new(
        s.times.clone(),
        (0..s.times.len())
            .map(|i| {
                let u = ustar.value(i);
                u.scale(-1.0)
                    .sub(&s.sg.apply_generator(u)?)?
                    .add(&drift_product(u, &[eta.value(i)])?)
            })
            .collect::<Result<Vec<_>>>()?,
        f64::INFINITY,
    )?;
    let u = classical_solve(&[eta], &f, ustar.value(m), &s.sg)?;
    let manufactured = rel_err(&u, &ustar)?;

    let (alpha, n, m, beta) = cfg.three_way;
    let rough = solve_rough_probe(&RoughConfig {
        alpha,
        n,
        m,
        source: RoughSource::Smooth,
        beta,
        forcing_kind: ForcingKind::Field,
        terminal: default_terminal(),
        refine: false,
        tol: cfg.three_way_tol,
        ..RoughConfig::default()
    })?;
    Ok(PdeReport {
        young_vs_classical: young.relative_error_vs_classical,
        manufactured,
        three_way: rough.three_way.expect("smooth source"),
        reconstruction_residual: rough.reconstruction_residual,
        cfg: cfg.clone(),
    })
}

impl Outcome for PdeReport {
    fn checks(&self) -> Vec<Check> {
        let c = &self.cfg;
        vec![
            Check::at_most("young_vs_classical", self.young_vs_classical, c.young_tol),
            Check::at_most("manufactured_solution", self.manufactured, c.manufactured_tol),
            Check::at_most("rough_vs_classical", self.three_way[0], c.three_way_tol),
            Check::at_most("young_vs_classical_lifted", self.three_way[1], c.three_way_tol),
            Check::at_most("rough_vs_young", self.three_way[2], c.three_way_tol),
            Check::at_most("reconstruction_residual", self.reconstruction_residual, c.reconstruction_tol),
        ]
    }
}

// ---------------------------------------------------------------- Lipschitz probe

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LipschitzConfig {
    pub alpha: f64,
    pub n: usize,
    pub m: usize,
    pub xi_n: usize,
    pub eps: f64,
    /// The two environments mixed by the perturbation.
    pub seeds: (u64, u64),
    pub deltas: Vec<f64>,
    pub forcing: SmoothDrift,
}

impl Default for LipschitzConfig {
    fn default() -> Self {
        Self {
            alpha: 1.9,
            n: 128,
            m: 64,
            xi_n: 16,
            eps: 0.05,
            seeds: (1, 2),
            deltas: vec![1e-1, 1e-2, 1e-3],
            forcing: SmoothDrift::new(&[(1, 1.0, 0.0, 0.0)]),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LipschitzRow {
    pub delta: f64,
    pub numerator: f64,
    pub denominator: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LipschitzReport {
    pub theta: f64,
    pub rows: Vec<LipschitzRow>,
    pub growth: f64,
}

/// `xi_a + delta (xi_b - xi_a)`.
fn mix(a: &WhiteNoiseSample, b: &WhiteNoiseSample, delta: f64) -> WhiteNoiseSample {
    let mut out = a.clone();
    for (o, q) in out.coeffs.iter_mut().zip(&b.coeffs) {
        o.0 += delta * (q.0 - o.0);
        o.1 += delta * (q.1 - o.1);
    }
    out
}

/// Solution-map ratios `||u - u_delta||_{C C^theta ∩ C^{theta/alpha} L^inf} / ||V - V_delta||_X`
/// along a shrinking mixture of two white-noise environments, forcing and
/// terminal value held fixed.
pub fn lipschitz_probe(cfg: &LipschitzConfig) -> Result<LipschitzReport> {
    let s = setup(cfg.alpha, cfg.n, cfg.m)?;
    let a = sample_white_noise(cfg.seeds.0, cfg.xi_n, false);
    let b = sample_white_noise(cfg.seeds.1, cfg.xi_n, false);
    let f = cfg.forcing.time_field(s.grid, &s.times)?;
    let data = BackwardData {
        f: Forcing::Field(f),
        terminal: Field::zeros(s.grid),
        theta: None,
        terminal_regularity: f64::INFINITY,
    };
    let opts = SolverOptions::default();
    let base = lift_white_noise(&a, &s.sg, &s.part, &s.times, cfg.eps)?;
    let u0 = solve_rough(&base, &data, &s.sg, &s.part, &opts)?;
    let theta = u0.theta;
    let beta = base.beta;
    let mut rows = Vec::new();
    for &delta in &cfg.deltas {
        let d = lift_white_noise(&mix(&a, &b, delta), &s.sg, &s.part, &s.times, cfg.eps)?;
        let u = solve_rough(&d, &data, &s.sg, &s.part, &opts)?;
        let numerator = lipschitz_numerator(&u.u.sub(&u0.u)?, theta, cfg.alpha, &s.part)?;
        let v2 = |e: &EnhancedDrift| e.v2.as_ref().expect("lifted")[0][0].clone();
        let denominator = sup_besov(&d.v1[0].sub(&base.v1[0])?, beta, &s.part)?
            + sup_besov(&v2(&d).sub(&v2(&base))?, 2.0 * beta + cfg.alpha - 1.0, &s.part)?;
        rows.push(LipschitzRow {
            delta,
            numerator,
            denominator,
            ratio: numerator / denominator,
        });
    }
    let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
    Ok(LipschitzReport {
        theta,
        growth: growth(&ratios),
        rows,
    })
}

impl Outcome for LipschitzReport {
    fn checks(&self) -> Vec<Check> {
        vec![Check::at_most("ratio_growth_as_delta_shrinks", self.growth, GROWTH_LIMIT)]
    }

    fn tables(&self) -> Vec<Table> {
        let mut t = Table::new("lipschitz", &["delta", "numerator", "denominator", "ratio"]);
        for r in &self.rows {
            t.push(vec![r.delta.into(), r.numerator.into(), r.denominator.into(), r.ratio.into()]);
        }
        vec![t]
    }
}

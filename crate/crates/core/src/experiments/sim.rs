use serde::{Deserialize, Serialize};

use super::pde::SmoothDrift;
use super::Outcome;
use crate::enhanced_drift::sample_white_noise;
use crate::error::{param, Result};
use crate::levy::StableIncrements;
use crate::mcsim::{
    brox_demo, BroxBundle, BroxReport,
    drift_moment_scaling, euler_maruyama, martingale_test, Functional, MartingaleReport, ModeTable, MomentScaling,
    SimulationConfig, PASS_SE,
};
use crate::pde::{classical_solve, rough_window};
use crate::report::{Check, Table};
use crate::semigroup::{Semigroup, StableSymbol};
use crate::spectral::{uniform_times, Field, FourierGrid, TimeField};
use crate::stats::mean_se;

fn semigroup(alpha: f64, n: usize) -> Result<(FourierGrid, Semigroup, StableIncrements)> {
    let grid = FourierGrid::one_d(n)?;
    let sg = Semigroup::new(StableSymbol::fractional_laplacian(alpha)?, grid)?;
    let noise = StableIncrements::from_symbol(sg.symbol())?;
    Ok((grid, sg, noise))
}

/// Largest wavenumber of a term list.
fn band(d: &SmoothDrift) -> usize {
    d.terms.iter().map(|t| t.k.max(0) as usize).max().unwrap_or(0)
}

/// Per-step table of smooth data, zero data as the trivial table.
fn table(d: &SmoothDrift, grid: FourierGrid, cfg: &SimulationConfig) -> Result<ModeTable> {
    if d.is_zero() {
        return Ok(ModeTable::zero());
    }
    ModeTable::sampled(&d.time_field(grid, &cfg.times())?, band(d).max(1), &cfg.times())
}

// ---------------------------------------------------------------- martingale

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MartingaleConfig {
    pub alpha: f64,
    /// Grid of the classical solves.
    pub n: usize,
    pub x0: f64,
    pub paths: usize,
    pub steps: usize,
    pub pairs: Vec<(f64, f64)>,
    pub drift: SmoothDrift,
    pub forcing: SmoothDrift,
    /// Terminal value of the drift-free case.
    pub free_terminal: SmoothDrift,
    /// The corrupted case must reach at least this many standard errors.
    pub corrupt_min_z: f64,
}

impl Default for MartingaleConfig {
    fn default() -> Self {
        Self {
            alpha: 1.9,
            n: 64,
            x0: 0.1,
            paths: 100_000,
            steps: 1024,
            pairs: vec![(0.25, 0.5), (0.5, 1.0), (0.25, 1.0)],
            drift: SmoothDrift::new(&[(1, 0.0, 0.4, 0.0), (2, 0.15, 0.0, 1.0)]),
            forcing: SmoothDrift::new(&[(1, 1.0, 0.0, 0.0), (0, 0.5, 0.0, 0.0)]),
            free_terminal: SmoothDrift::new(&[(1, 1.0, 0.0, 0.0)]),
            corrupt_min_z: 5.0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MartingaleSuite {
    /// `V = 0`, `f = 0`, `u` the free evolution of the terminal value.
    pub free: MartingaleReport,
    /// Paths and `u` both use the drift.
    pub matched: MartingaleReport,
    /// Paths use the drift, `u` is solved without it.
    pub corrupted: MartingaleReport,
    #[serde(skip)]
    corrupt_min_z: f64,
}

/// Martingale-problem checks with classical solutions: the free and matched
/// cases must pass and the corrupted control must be detected.
pub fn martingale_suite(cfg: &MartingaleConfig, seed: u64) -> Result<MartingaleSuite> {
    let (grid, sg, noise) = semigroup(cfg.alpha, cfg.n)?;
    let sim = SimulationConfig {
        x0: cfg.x0,
        paths: cfg.paths,
        steps: cfg.steps,
        horizon: 1.0,
        seed,
    };
    sim.validate()?;
    let times = uniform_times(0.0, 1.0, cfg.steps);
    let v = cfg.drift.time_field(grid, &times)?;
    let f = cfg.forcing.time_field(grid, &times)?;
    let vt = table(&cfg.drift, grid, &sim)?;
    let ft = table(&cfg.forcing, grid, &sim)?;
    let zero_terminal = Field::zeros(grid);

    let uf = sg.free_evolution(&cfg.free_terminal.at(grid, 1.0)?, &times)?;
    let free = martingale_test(&sim, &noise, &ModeTable::zero(), &uf, &ModeTable::zero(), &cfg.pairs, &Functional::ALL)?;

    let u = classical_solve(&[v], &f, &zero_terminal, &sg)?;
    let matched = martingale_test(&sim, &noise, &vt, &u, &ft, &cfg.pairs, &Functional::ALL)?;

    let u0 = classical_solve(&[TimeField::zeros(times.clone(), grid)?], &f, &zero_terminal, &sg)?;
    let corrupted = martingale_test(&sim, &noise, &vt, &u0, &ft, &cfg.pairs, &Functional::ALL)?;
    Ok(MartingaleSuite {
        free,
        matched,
        corrupted,
        corrupt_min_z: cfg.corrupt_min_z,
    })
}

impl Outcome for MartingaleSuite {
    fn checks(&self) -> Vec<Check> {
        vec![
            Check::at_most("free_max_z", self.free.max_z, PASS_SE),
            Check::at_most("matched_max_z", self.matched.max_z, PASS_SE),
            Check::at_least("corrupted_max_z", self.corrupted.max_z, self.corrupt_min_z),
        ]
    }

    fn tables(&self) -> Vec<Table> {
        let mut t = Table::new("martingale", &["case", "r", "t", "functional", "estimate", "se", "z"]);
        for (case, rep) in [("free", &self.free), ("matched", &self.matched), ("corrupted", &self.corrupted)] {
            for r in &rep.rows {
                t.push(vec![
                    case.into(),
                    r.r.into(),
                    r.t.into(),
                    r.functional.as_str().into(),
                    r.estimate.into(),
                    r.se.into(),
                    r.z.into(),
                ]);
            }
        }
        vec![t]
    }
}

// ---------------------------------------------------------------- moment scaling

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MomentConfig {
    pub alpha: f64,
    pub grid_n: usize,
    pub xi_seed: u64,
    /// Mollification levels of the white-noise drift.
    pub levels: Vec<usize>,
    pub eps: f64,
    /// Defaults to the midpoint of the rough window at `beta = -1/2 - eps`.
    pub theta: Option<f64>,
    pub x0: f64,
    pub paths: usize,
    pub steps: usize,
    pub horizon: f64,
    /// Lags in Euler steps.
    pub lags: Vec<usize>,
    pub rhos: Vec<u32>,
    /// Largest allowed max - min of the slopes across levels, per moment.
    pub max_spread: f64,
}

impl Default for MomentConfig {
    fn default() -> Self {
        Self {
            alpha: 1.9,
            grid_n: 256,
            xi_seed: 11,
            levels: vec![16, 32, 64],
            eps: 0.05,
            theta: None,
            x0: 0.0,
            paths: 2000,
            steps: 1024,
            horizon: 1.0 / 32.0,
            lags: vec![8, 16, 32, 64, 128, 256],
            rhos: vec![2, 4],
            max_spread: 0.3,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentLevel {
    pub n: usize,
    pub scaling: Vec<MomentScaling>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentSuite {
    pub theta: f64,
    pub levels: Vec<MomentLevel>,
    /// `(rho, max - min of the slopes across levels)`.
    pub spread: Vec<(u32, f64)>,
    #[serde(skip)]
    max_spread: f64,
}

/// Moments of the drift integral along Euler paths with mollified white-noise
/// drifts, one log-log slope per level and moment.
pub fn moment_suite(cfg: &MomentConfig, seed: u64) -> Result<MomentSuite> {
    let (grid, _, noise) = semigroup(cfg.alpha, cfg.grid_n)?;
    let theta = match cfg.theta {
        Some(t) => t,
        None => rough_window(cfg.alpha, -0.5 - cfg.eps).midpoint(),
    };
    let sim = SimulationConfig {
        x0: cfg.x0,
        paths: cfg.paths,
        steps: cfg.steps,
        horizon: cfg.horizon,
        seed,
    };
    let xi = sample_white_noise(cfg.xi_seed, cfg.levels.iter().copied().max().unwrap_or(0), false);
    let levels = cfg
        .levels
        .iter()
        .map(|&n| {
            let d = ModeTable::constant(&xi.truncate(n).to_field(grid)?, n)?;
            let scaling = cfg
                .rhos
                .iter()
                .map(|&rho| drift_moment_scaling(&sim, &noise, &d, rho, &cfg.lags, theta))
                .collect::<Result<Vec<_>>>()?;
            Ok(MomentLevel { n, scaling })
        })
        .collect::<Result<Vec<_>>>()?;
    let spread = cfg
        .rhos
        .iter()
        .enumerate()
        .map(|(i, &rho)| {
            let s: Vec<f64> = levels.iter().map(|l| l.scaling[i].slope).collect();
            let (lo, hi) = s.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
            (rho, if s.iter().all(|x| x.is_finite()) { hi - lo } else { f64::INFINITY })
        })
        .collect();
    Ok(MomentSuite {
        theta,
        levels,
        spread,
        max_spread: cfg.max_spread,
    })
}

impl Outcome for MomentSuite {
    fn checks(&self) -> Vec<Check> {
        let mut c = Vec::new();
        for l in &self.levels {
            for s in &l.scaling {
                c.push(Check::at_least(&format!("slope_n{}_rho{}", l.n, s.rho), s.slope, s.threshold));
            }
        }
        for &(rho, s) in &self.spread {
            c.push(Check::at_most(&format!("slope_spread_rho{rho}"), s, self.max_spread));
        }
        c
    }

    fn tables(&self) -> Vec<Table> {
        let mut t = Table::new("moments", &["n", "rho", "lag", "moment", "se"]);
        for l in &self.levels {
            for s in &l.scaling {
                for r in &s.rows {
                    t.push(vec![l.n.into(), (s.rho as usize).into(), r.lag.into(), r.moment.into(), r.se.into()]);
                }
            }
        }
        vec![t]
    }
}

// ---------------------------------------------------------------- simulate

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DriftSpec {
    Zero,
    Smooth { terms: SmoothDrift },
    /// Real white noise truncated at `|k| <= n`.
    WhiteNoise { n: usize, xi_seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulateConfig {
    pub alpha: f64,
    pub grid_n: usize,
    pub x0: f64,
    pub paths: usize,
    pub steps: usize,
    pub horizon: f64,
    pub drift: DriftSpec,
    /// Times reported; must lie on the Euler grid.
    pub record: Vec<f64>,
    /// Number of paths whose recorded positions go into a table.
    pub dump_paths: usize,
    pub se: f64,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        Self {
            alpha: 1.9,
            grid_n: 128,
            x0: 0.0,
            paths: 10_000,
            steps: 512,
            horizon: 1.0,
            drift: DriftSpec::Zero,
            record: vec![0.25, 0.5, 1.0],
            dump_paths: 0,
            se: 3.0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MarginalSummary {
    pub t: f64,
    /// `E cos(2 pi X_t)`.
    pub cos_moment: f64,
    pub cos_se: f64,
    /// `cos(2 pi x0) exp(-t psi(1))` when the drift is zero.
    pub free_value: Option<f64>,
    /// Mean of `X_t mod 1`.
    pub wrapped_mean: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SimulateReport {
    pub h: f64,
    pub marginals: Vec<MarginalSummary>,
    pub finite: bool,
    #[serde(skip)]
    paths: Vec<Vec<f64>>,
    #[serde(skip)]
    times: Vec<f64>,
    #[serde(skip)]
    se: f64,
}

/// Euler paths of `dX = V dt + dL` with recorded marginal summaries. With zero
/// drift the first Fourier moment is checked against its closed form.
pub fn simulate(cfg: &SimulateConfig, seed: u64) -> Result<SimulateReport> {
    let (grid, sg, noise) = semigroup(cfg.alpha, cfg.grid_n)?;
    let sim = SimulationConfig {
        x0: cfg.x0,
        paths: cfg.paths,
        steps: cfg.steps,
        horizon: cfg.horizon,
        seed,
    };
    sim.validate()?;
    let drift = match &cfg.drift {
        DriftSpec::Zero => ModeTable::zero(),
        DriftSpec::Smooth { terms } => table(terms, grid, &sim)?,
        DriftSpec::WhiteNoise { n, xi_seed } => {
            ModeTable::constant(&sample_white_noise(*xi_seed, *n, false).to_field(grid)?, *n)?
        }
    };
    let steps = cfg.record.iter().map(|&t| sim.step_of(t)).collect::<Result<Vec<_>>>()?;
    if steps.is_empty() {
        return Err(param("record", "at least one time"));
    }
    let ens = euler_maruyama(&sim, &noise, &drift, &steps)?;
    let c1 = sg.symbol().psi(&[1.0]);
    let tau = std::f64::consts::TAU;
    let marginals = ens
        .times
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let x = ens.column(i);
            let cs: Vec<f64> = x.iter().map(|v| (tau * v).cos()).collect();
            let e = mean_se(&cs);
            MarginalSummary {
                t,
                cos_moment: e.mean,
                cos_se: e.se,
                free_value: matches!(cfg.drift, DriftSpec::Zero).then(|| (tau * cfg.x0).cos() * (-t * c1).exp()),
                wrapped_mean: x.iter().map(|v| v.rem_euclid(1.0)).sum::<f64>() / x.len() as f64,
            }
        })
        .collect();
    Ok(SimulateReport {
        h: sim.h(),
        marginals,
        finite: ens.x.iter().flatten().all(|v| v.is_finite()),
        paths: ens.x.into_iter().take(cfg.dump_paths).collect(),
        times: ens.times,
        se: cfg.se,
    })
}

impl Outcome for SimulateReport {
    fn checks(&self) -> Vec<Check> {
        let mut c = vec![Check::holds("positions_finite", self.finite)];
        for m in &self.marginals {
            if let Some(v) = m.free_value {
                let z = if m.cos_se > 0.0 { (m.cos_moment - v).abs() / m.cos_se } else { 0.0 };
                c.push(Check::at_most(&format!("free_cos_moment_z_t{}", m.t), z, self.se));
            }
        }
        c
    }

    fn tables(&self) -> Vec<Table> {
        let mut m = Table::new("marginals", &["t", "cos_moment", "cos_se", "wrapped_mean"]);
        for r in &self.marginals {
            m.push(vec![r.t.into(), r.cos_moment.into(), r.cos_se.into(), r.wrapped_mean.into()]);
        }
        let mut out = vec![m];
        if !self.paths.is_empty() {
            let mut p = Table::new("paths", &["path", "t", "x"]);
            for (i, row) in self.paths.iter().enumerate() {
                for (t, x) in self.times.iter().zip(row) {
                    p.push(vec![i.into(), (*t).into(), (*x).into()]);
                }
            }
            out.push(p);
        }
        out
    }
}

// ---------------------------------------------------------------- brox-demo

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BroxConfig {
    pub alpha: f64,
    pub bundle: BroxBundle,
}

impl Default for BroxConfig {
    fn default() -> Self {
        Self {
            alpha: 1.9,
            bundle: BroxBundle::default(),
        }
    }
}

pub fn brox(cfg: &BroxConfig, seed: u64) -> Result<BroxReport> {
    brox_demo(seed, cfg.alpha, &cfg.bundle)
}

impl Outcome for BroxReport {
    fn checks(&self) -> Vec<Check> {
        let mut c = self.checks.clone();
        c.push(Check::holds("marginals_decreasing_in_n", self.marginals.decreasing));
        c
    }

    fn tables(&self) -> Vec<Table> {
        let mut m = Table::new("martingale", &["n", "r", "t", "functional", "estimate", "se", "z", "pass"]);
        for l in &self.levels {
            for r in &l.martingale.rows {
                m.push(vec![
                    l.n.into(),
                    r.r.into(),
                    r.t.into(),
                    r.functional.as_str().into(),
                    r.estimate.into(),
                    r.se.into(),
                    r.z.into(),
                    r.pass.into(),
                ]);
            }
        }
        let mut k = Table::new("marginals", &["n", "n_next", "t", "ks_distance", "p_value"]);
        for r in &self.marginals.rows {
            k.push(vec![r.n.into(), r.n_next.into(), r.t.into(), r.distance.into(), r.p_value.into()]);
        }
        vec![m, k]
    }
}

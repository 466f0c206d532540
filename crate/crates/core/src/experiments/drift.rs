use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Outcome;
use crate::enhanced_drift::{
    chaos_block_increment, chaos_kernel, chaos_variance_oracle, lift_white_noise, sample_white_noise,
    wick_expectation,
};
use crate::error::{param, Result};
use crate::report::{Check, Table};
use crate::semigroup::{Semigroup, StableSymbol};
use crate::spectral::{sup_besov, uniform_times, DyadicPartition, FourierGrid};
use crate::stats::{inversions, loglog_slope, mean_se, Estimate};

fn setup(alpha: f64, n: usize) -> Result<(Semigroup, DyadicPartition)> {
    let grid = FourierGrid::one_d(n)?;
    Ok((
        Semigroup::new(StableSymbol::fractional_laplacian(alpha)?, grid)?,
        DyadicPartition::new(grid)?,
    ))
}

/// Environment seed `i` of a sweep started at `seed`.
fn env_seed(seed: u64, i: u64) -> u64 {
    seed.wrapping_mul(1_000_003).wrapping_add(i)
}

// ---------------------------------------------------------------- chaos oracle

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChaosConfig {
    pub alpha: f64,
    pub s: f64,
    pub t: f64,
    pub horizon: f64,
    /// Truncation of the exact Wick comparison (every block).
    pub wick_n: usize,
    pub wick_tol: f64,
    /// Truncation, block and sample count of the Monte Carlo comparison.
    pub mc_n: usize,
    pub mc_block: i32,
    pub mc_seeds: usize,
    pub mc_se: f64,
}

impl Default for ChaosConfig {
    fn default() -> Self {
        Self {
            alpha: 1.9,
            s: 0.5,
            t: 0.75,
            horizon: 1.0,
            wick_n: 4,
            wick_tol: 1e-10,
            mc_n: 32,
            mc_block: 3,
            mc_seeds: 10_000,
            mc_se: 3.0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WickRow {
    pub j: i32,
    pub oracle: f64,
    pub wick: f64,
    /// `|oracle - wick| / max(1, wick)`.
    pub error: f64,
    /// Second-chaos part against twice the kernel's squared norm.
    pub chaos2: f64,
    pub chaos2_bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChaosReport {
    pub wick: Vec<WickRow>,
    pub oracle: f64,
    pub monte_carlo: Estimate,
    pub z: f64,
    #[serde(skip)]
    cfg: ChaosConfig,
}

fn grid_for(n: usize) -> usize {
    (4 * n + 4).next_power_of_two()
}

/// Variance oracle of `Delta_j((rho_t - rho_s) * xi^n (.) xi^n)(0)` against
/// exact Wick enumeration at small `n` and a Monte Carlo over environments.
pub fn chaos_oracle(cfg: &ChaosConfig, seed: u64) -> Result<ChaosReport> {
    if !(cfg.s <= cfg.t && cfg.t <= cfg.horizon) {
        return Err(param("t", "need s <= t <= horizon"));
    }
    if cfg.mc_seeds < 2 {
        return Err(param("mc_seeds", "at least 2"));
    }
    let (sg, part) = setup(cfg.alpha, grid_for(cfg.wick_n))?;
    let mut wick = Vec::new();
    for j in part.block_indices() {
        let kern = chaos_kernel(&sg, &part, j, cfg.s, cfg.t, cfg.wick_n, cfg.horizon)?;
        let oracle = chaos_variance_oracle(&sg, &part, j, cfg.s, cfg.t, cfg.wick_n, cfg.horizon)?;
        let w = wick_expectation(&kern);
        let n = cfg.wick_n as i64;
        let mean: Complex64 = (-n..=n).map(|k| kern.k[((k + n) * (2 * n + 1) + (n - k)) as usize]).sum();
        wick.push(WickRow {
            j,
            oracle,
            wick: w,
            error: (oracle - w).abs() / w.max(1.0),
            chaos2: oracle - mean.norm_sqr(),
            chaos2_bound: 2.0 * kern.l2_sq(),
        });
    }

    let (sg, part) = setup(cfg.alpha, grid_for(cfg.mc_n))?;
    let oracle = chaos_variance_oracle(&sg, &part, cfg.mc_block, cfg.s, cfg.t, cfg.mc_n, cfg.horizon)?;
    let samples = (0..cfg.mc_seeds as u64)
        .into_par_iter()
        .map(|i| {
            let xi = sample_white_noise(env_seed(seed, i), cfg.mc_n, false);
            Ok(chaos_block_increment(&xi, &sg, &part, cfg.mc_block, cfg.s, cfg.t, cfg.horizon)?.norm_sqr())
        })
        .collect::<Result<Vec<f64>>>()?;
    let monte_carlo = mean_se(&samples);
    Ok(ChaosReport {
        wick,
        oracle,
        z: monte_carlo.z(oracle),
        monte_carlo,
        cfg: cfg.clone(),
    })
}

impl Outcome for ChaosReport {
    fn checks(&self) -> Vec<Check> {
        let worst = self.wick.iter().map(|r| r.error).fold(0.0, f64::max);
        let bound = self.wick.iter().all(|r| r.chaos2 <= r.chaos2_bound * (1.0 + 1e-12));
        vec![
            Check::at_most("oracle_vs_wick", worst, self.cfg.wick_tol),
            Check::holds("second_chaos_within_twice_kernel_norm", bound),
            Check::at_most("oracle_vs_monte_carlo_z", self.z, self.cfg.mc_se),
        ]
    }

    fn tables(&self) -> Vec<Table> {
        let mut t = Table::new("wick", &["j", "oracle", "wick", "error", "chaos2", "chaos2_bound"]);
        for r in &self.wick {
            t.push(vec![
                (r.j as f64).into(),
                r.oracle.into(),
                r.wick.into(),
                r.error.into(),
                r.chaos2.into(),
                r.chaos2_bound.into(),
            ]);
        }
        vec![t]
    }
}

// ---------------------------------------------------------------- Cauchy decay of the lift

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CauchyConfig {
    pub alpha: f64,
    pub levels: Vec<usize>,
    pub seeds: usize,
    pub eps: f64,
    /// The norm is taken at `alpha - 2 - margin`.
    pub margin: f64,
    pub time_nodes: usize,
    pub allowed_inversions: usize,
    pub pass_fraction: f64,
}

impl Default for CauchyConfig {
    fn default() -> Self {
        Self {
            alpha: 1.9,
            levels: vec![8, 16, 32, 64, 128],
            seeds: 20,
            eps: 0.05,
            margin: 0.05,
            time_nodes: 8,
            allowed_inversions: 1,
            pass_fraction: 0.9,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CauchyRow {
    pub seed: u64,
    /// `||V2^{n_{i+1}} - V2^{n_i}||_{C C^vartheta}` over consecutive levels.
    pub distances: Vec<f64>,
    pub inversions: usize,
    /// Log-log slope of the distances against `n`.
    pub rate: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CauchyReport {
    pub vartheta: f64,
    pub levels: Vec<usize>,
    pub rows: Vec<CauchyRow>,
    pub fraction_decreasing: f64,
    pub pass_fraction: f64,
}

/// Differences of the white-noise lift between consecutive truncation levels,
/// measured in `C C^{alpha - 2 - margin}`, per environment.
pub fn cauchy_decay(cfg: &CauchyConfig, seed: u64) -> Result<CauchyReport> {
    if cfg.levels.len() < 2 || cfg.levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(param("levels", "at least two increasing levels"));
    }
    if cfg.time_nodes < 2 {
        return Err(param("time_nodes", "at least 2"));
    }
    let top = *cfg.levels.last().unwrap();
    let (sg, part) = setup(cfg.alpha, grid_for(top))?;
    let times = uniform_times(0.0, 1.0, cfg.time_nodes - 1);
    let vartheta = cfg.alpha - 2.0 - cfg.margin;
    let rows = (0..cfg.seeds as u64)
        .into_par_iter()
        .map(|i| {
            let s = env_seed(seed, i);
            let xi = sample_white_noise(s, top, false);
            let v2 = cfg
                .levels
                .iter()
                .map(|&n| {
                    let d = lift_white_noise(&xi.truncate(n), &sg, &part, &times, cfg.eps)?;
                    Ok(d.v2.expect("lifted").remove(0).remove(0))
                })
                .collect::<Result<Vec<_>>>()?;
            let distances = v2
                .windows(2)
                .map(|w| sup_besov(&w[1].sub(&w[0])?, vartheta, &part))
                .collect::<Result<Vec<f64>>>()?;
            let ns: Vec<f64> = cfg.levels[..distances.len()].iter().map(|&n| n as f64).collect();
            Ok(CauchyRow {
                seed: s,
                inversions: inversions(&distances),
                rate: loglog_slope(&ns, &distances),
                distances,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let ok = rows.iter().filter(|r| r.inversions <= cfg.allowed_inversions).count();
    Ok(CauchyReport {
        vartheta,
        levels: cfg.levels.clone(),
        fraction_decreasing: ok as f64 / rows.len().max(1) as f64,
        rows,
        pass_fraction: cfg.pass_fraction,
    })
}

impl Outcome for CauchyReport {
    fn checks(&self) -> Vec<Check> {
        vec![Check::at_least("fraction_of_seeds_decreasing", self.fraction_decreasing, self.pass_fraction)]
    }

    fn tables(&self) -> Vec<Table> {
        let mut t = Table::new("cauchy", &["seed", "n", "n_next", "distance"]);
        for r in &self.rows {
            for (i, d) in r.distances.iter().enumerate() {
                t.push(vec![
                    (r.seed as usize).into(),
                    self.levels[i].into(),
                    self.levels[i + 1].into(),
                    (*d).into(),
                ]);
            }
        }
        vec![t]
    }
}

// ---------------------------------------------------------------- lift-white-noise

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LiftConfig {
    pub alpha: f64,
    pub n: usize,
    pub m: usize,
    pub xi_n: usize,
    pub eps: f64,
    pub zero_mean: bool,
    /// Environments averaged for the mean of `V2(0)(0)`.
    pub mean_seeds: usize,
    pub mean_se: f64,
}

impl Default for LiftConfig {
    fn default() -> Self {
        Self {
            alpha: 1.9,
            n: 128,
            m: 16,
            xi_n: 32,
            eps: 0.05,
            zero_mean: false,
            mean_seeds: 400,
            mean_se: 3.0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LiftReport {
    pub beta: f64,
    pub v1_norm: f64,
    pub v2_norm: Option<f64>,
    pub v2_regularity: f64,
    pub notes: Vec<String>,
    /// Deterministic mean of `V2(0)(x)`: the pairing sum over `k`.
    pub mean_term: f64,
    pub mean_estimate: Estimate,
    pub mean_z: f64,
    pub mean_se: f64,
    #[serde(skip)]
    samples: Vec<(f64, f64, f64)>,
}

/// Lifts one white-noise environment and checks the mean of the resonant
/// component over environments against the pairing sum.
pub fn lift_probe(cfg: &LiftConfig, seed: u64) -> Result<LiftReport> {
    if cfg.mean_seeds < 2 {
        return Err(param("mean_seeds", "at least 2"));
    }
    let (sg, part) = setup(cfg.alpha, cfg.n)?;
    let times = uniform_times(0.0, 1.0, cfg.m);
    let xi = sample_white_noise(seed, cfg.xi_n, cfg.zero_mean);
    let drift = lift_white_noise(&xi, &sg, &part, &times, cfg.eps)?;
    let v2 = &drift.v2.as_ref().expect("lifted")[0][0];
    let v1s = drift.v1[0].value(0).real_samples(1);
    let v2s = v2.value(0).real_samples(1);
    let samples = v1s
        .iter()
        .zip(&v2s)
        .enumerate()
        .map(|(i, (a, b))| (i as f64 / v1s.len() as f64, *a, *b))
        .collect();

    // E[xi_hat(k) xi_hat(-k)] = 1, so the mean is sum_k rho_hat(k) psi_res(k, -k)
    let horizon = times[times.len() - 1];
    let mut mean_term = Complex64::default();
    for k in -(cfg.xi_n as i64)..=(cfg.xi_n as i64) {
        if k == 0 {
            continue;
        }
        let l = sg.symbol().psi(&[k as f64]);
        let rho = Complex64::new(0.0, 2.0 * std::f64::consts::PI * k as f64 * (-(-horizon * l).exp_m1() / l));
        mean_term += rho * part.resonant_symbol([k, 0], [-k, 0]);
    }
    let vals = (0..cfg.mean_seeds as u64)
        .into_par_iter()
        .map(|i| {
            let x = sample_white_noise(env_seed(seed, i + 1), cfg.xi_n, cfg.zero_mean);
            let d = lift_white_noise(&x, &sg, &part, &[0.0, horizon], cfg.eps)?;
            Ok(d.v2.expect("lifted")[0][0].value(0).eval([0.0, 0.0]).re)
        })
        .collect::<Result<Vec<f64>>>()?;
    let est = mean_se(&vals);
    Ok(LiftReport {
        beta: drift.beta,
        v1_norm: drift.norms.v1,
        v2_norm: drift.norms.v2,
        v2_regularity: 2.0 * drift.beta + cfg.alpha - 1.0,
        notes: drift.notes.clone(),
        mean_term: mean_term.re,
        mean_z: est.z(mean_term.re),
        mean_estimate: est,
        mean_se: cfg.mean_se,
        samples,
    })
}

impl Outcome for LiftReport {
    fn checks(&self) -> Vec<Check> {
        vec![Check::at_most("v2_mean_vs_pairing_sum_z", self.mean_z, self.mean_se)]
    }

    fn tables(&self) -> Vec<Table> {
        let mut t = Table::new("lift", &["x", "v1", "v2_t0"]);
        for (x, a, b) in &self.samples {
            t.push(vec![(*x).into(), (*a).into(), (*b).into()]);
        }
        vec![t]
    }
}

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Outcome;
use crate::error::{param, Result};
use crate::levy::{campbell_moment, coefficient_table, sample_small_jumps, Coefficients, JumpMeasure, StableIncrements};
use crate::report::{Check, Table};
use crate::stats::{ks_two_sample, mean_se, Estimate, KsResult};
use crate::synth::seeded;

// ---------------------------------------------------------------- stable sampler

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StableConfig {
    pub alpha: f64,
    pub c: f64,
    pub dt: f64,
    pub frequencies: Vec<f64>,
    pub samples: usize,
    /// Self-similarity factors `k`: a sum of `k` increments against `k^(1/alpha)` times one.
    pub factors: Vec<usize>,
    pub ks_p: f64,
    pub se: f64,
}

impl Default for StableConfig {
    fn default() -> Self {
        Self {
            alpha: 1.8,
            c: 1.0,
            dt: 0.1,
            frequencies: vec![1.0, 2.0, 5.0],
            samples: 100_000,
            factors: vec![2, 4],
            ks_p: 0.01,
            se: 3.0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CharRow {
    pub z: f64,
    pub exact: f64,
    pub real: Estimate,
    pub imag: Estimate,
    pub z_real: f64,
    pub z_imag: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct StableReport {
    pub characteristic: Vec<CharRow>,
    /// `(k, KS of sum of k increments vs k^(1/alpha) L_dt)`.
    pub self_similarity: Vec<(usize, KsResult)>,
    /// Mean of `sign(L)`.
    pub sign: Estimate,
    pub sign_z: f64,
    #[serde(skip)]
    cfg: StableConfig,
}

const CHUNK: usize = 1000;

/// `samples` draws of `f(rng)` from independent substreams of `(seed, base + chunk)`.
fn draw(seed: u64, base: u64, samples: usize, f: impl Fn(&mut rand_chacha::ChaCha8Rng) -> f64 + Sync) -> Vec<f64> {
    (0..samples.div_ceil(CHUNK))
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut r = seeded(seed, base + c as u64);
            let n = CHUNK.min(samples - c * CHUNK);
            (0..n).map(|_| f(&mut r)).collect::<Vec<_>>()
        })
        .collect()
}

/// Characteristic function at a few frequencies, self-similarity by KS and
/// sign symmetry of the increment sampler.
pub fn stable_check(cfg: &StableConfig, seed: u64) -> Result<StableReport> {
    if cfg.samples < 2 {
        return Err(param("samples", "at least 2"));
    }
    let noise = StableIncrements::new(cfg.alpha, cfg.c)?;
    let base = draw(seed, 0, cfg.samples, |r| noise.sample(cfg.dt, r));
    let two_pi = 2.0 * std::f64::consts::PI;
    let characteristic = cfg
        .frequencies
        .iter()
        .map(|&z| {
            let re: Vec<f64> = base.iter().map(|l| (two_pi * z * l).cos()).collect();
            let im: Vec<f64> = base.iter().map(|l| (two_pi * z * l).sin()).collect();
            let exact = noise.characteristic(cfg.dt, z);
            let (real, imag) = (mean_se(&re), mean_se(&im));
            CharRow {
                z,
                exact,
                z_real: real.z(exact),
                z_imag: imag.z(0.0),
                real,
                imag,
            }
        })
        .collect();
    let self_similarity = cfg
        .factors
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let sums = draw(seed, 1_000_000 * (i as u64 + 1), cfg.samples, |r| {
                (0..k).map(|_| noise.sample(cfg.dt, r)).sum()
            });
            let s = (k as f64).powf(1.0 / cfg.alpha);
            let scaled: Vec<f64> = draw(seed, 1_000_000 * (i as u64 + 1) + 500_000, cfg.samples, |r| {
                s * noise.sample(cfg.dt, r)
            });
            (k, ks_two_sample(&sums, &scaled))
        })
        .collect();
    let signs: Vec<f64> = base.iter().map(|l| l.signum()).collect();
    let sign = mean_se(&signs);
    Ok(StableReport {
        characteristic,
        self_similarity,
        sign_z: sign.z(0.0),
        sign,
        cfg: cfg.clone(),
    })
}

impl Outcome for StableReport {
    fn checks(&self) -> Vec<Check> {
        let mut c = Vec::new();
        for r in &self.characteristic {
            c.push(Check::at_most(&format!("char_real_z_at_{}", r.z), r.z_real, self.cfg.se));
            c.push(Check::at_most(&format!("char_imag_z_at_{}", r.z), r.z_imag, self.cfg.se));
        }
        for (k, ks) in &self.self_similarity {
            c.push(Check::at_least(&format!("self_similarity_ks_p_k{k}"), ks.p, self.cfg.ks_p));
        }
        c.push(Check::at_most("sign_symmetry_z", self.sign_z, self.cfg.se));
        c
    }

    fn tables(&self) -> Vec<Table> {
        let mut t = Table::new("characteristic", &["z", "exact", "mean_cos", "se_cos", "mean_sin", "se_sin"]);
        for r in &self.characteristic {
            t.push(vec![
                r.z.into(),
                r.exact.into(),
                r.real.mean.into(),
                r.real.se.into(),
                r.imag.mean.into(),
                r.imag.se.into(),
            ]);
        }
        vec![t]
    }
}

// ---------------------------------------------------------------- Campbell moments

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CampbellConfig {
    pub k: f64,
    pub alpha: f64,
    /// Upper cutoff `C` of the jump sizes.
    pub c: f64,
    pub delta: f64,
    pub dt: f64,
    pub draws: usize,
    pub max_order: usize,
    /// Points where `Phi^(n)(lambda) = E[S^n e^(lambda S)]` is checked, `S = sum y^2`.
    pub lambdas: Vec<f64>,
    pub se: f64,
}

impl Default for CampbellConfig {
    fn default() -> Self {
        Self {
            k: 1.0,
            alpha: 1.5,
            c: 1.0,
            delta: 1e-4,
            dt: 1e-3,
            draws: 100_000,
            max_order: 3,
            lambdas: vec![0.0, -5.0],
            se: 3.0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CampbellRow {
    pub n: usize,
    pub lambda: f64,
    pub formula: f64,
    pub monte_carlo: Estimate,
    pub z: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CampbellReport {
    /// Orders whose recursion table equals the hand-derived one.
    pub tables_match: Vec<(usize, bool)>,
    pub rows: Vec<CampbellRow>,
    pub expected_count: f64,
    pub mean_count: Estimate,
    #[serde(skip)]
    se: f64,
}

/// Faa di Bruno tables of `exp` written out by hand.
fn hand_table(n: usize) -> Option<Coefficients> {
    match n {
        1 => Some(vec![(vec![1], 1)]),
        2 => Some(vec![(vec![0, 1], 1), (vec![2, 0], 1)]),
        3 => Some(vec![(vec![0, 0, 1], 1), (vec![1, 1, 0], 3), (vec![3, 0, 0], 1)]),
        _ => None,
    }
}

/// Recursion tables against the hand tables, and `Phi^(n)(lambda)` against a
/// Monte Carlo over Poisson jump configurations on `[0, dt]`.
pub fn campbell_check(cfg: &CampbellConfig, seed: u64) -> Result<CampbellReport> {
    if cfg.max_order == 0 || cfg.max_order > 3 {
        return Err(param("max_order", "hand tables cover orders 1..=3"));
    }
    if cfg.draws < 2 {
        return Err(param("draws", "at least 2"));
    }
    let m = JumpMeasure::with_cutoff(cfg.k, cfg.alpha, cfg.c, cfg.delta)?;
    let tables_match = (1..=cfg.max_order)
        .map(|n| Ok((n, Some(coefficient_table(n)?) == hand_table(n))))
        .collect::<Result<Vec<_>>>()?;
    let draws: Vec<(f64, f64)> = (0..cfg.draws as u64)
        .into_par_iter()
        .map(|i| {
            let rec = sample_small_jumps(&m, 0.0, cfg.dt, &mut seeded(seed, i))?;
            Ok((rec.power_sum(2.0), rec.sizes.len() as f64))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for &lambda in &cfg.lambdas {
        for n in 1..=cfg.max_order {
            let x: Vec<f64> = draws.iter().map(|(s, _)| s.powi(n as i32) * (lambda * s).exp()).collect();
            let est = mean_se(&x);
            let formula = campbell_moment(n, lambda, cfg.dt, &m)?;
            rows.push(CampbellRow {
                n,
                lambda,
                formula,
                z: est.z(formula),
                monte_carlo: est,
            });
        }
    }
    let counts: Vec<f64> = draws.iter().map(|d| d.1).collect();
    Ok(CampbellReport {
        tables_match,
        rows,
        expected_count: cfg.dt * m.mass(),
        mean_count: mean_se(&counts),
        se: cfg.se,
    })
}

impl Outcome for CampbellReport {
    fn checks(&self) -> Vec<Check> {
        let mut c: Vec<Check> = self
            .tables_match
            .iter()
            .map(|(n, ok)| Check::holds(&format!("table_order_{n}_matches_hand_table"), *ok))
            .collect();
        for r in &self.rows {
            c.push(Check::at_most(&format!("moment_n{}_lambda{}_z", r.n, r.lambda), r.z, self.se));
        }
        c.push(Check::at_most("jump_count_z", self.mean_count.z(self.expected_count), self.se));
        c
    }

    fn tables(&self) -> Vec<Table> {
        let mut t = Table::new("campbell", &["n", "lambda", "formula", "mc_mean", "mc_se", "z"]);
        for r in &self.rows {
            t.push(vec![
                r.n.into(),
                r.lambda.into(),
                r.formula.into(),
                r.monte_carlo.mean.into(),
                r.monte_carlo.se.into(),
                r.z.into(),
            ]);
        }
        vec![t]
    }
}

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::modes::ModeTable;
use crate::error::{param, Error, Result};
use crate::levy::StableIncrements;
use crate::synth::seeded;

/// Euler scheme parameters. Noise for path `p` comes from the substream
/// `(seed, p)`, so ensembles with the same seed share their increments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub x0: f64,
    pub paths: usize,
    pub steps: usize,
    pub horizon: f64,
    pub seed: u64,
}

impl SimulationConfig {
    pub const MIN_PATHS: usize = 1000;
    pub const MIN_STEPS: usize = 64;

    pub fn validate(&self) -> Result<()> {
        if self.paths < Self::MIN_PATHS {
            return Err(param("paths", format!("{} below the minimum {}", self.paths, Self::MIN_PATHS)));
        }
        if self.steps < Self::MIN_STEPS {
            return Err(param("steps", format!("{} below {} (h <= T/64)", self.steps, Self::MIN_STEPS)));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(param("horizon", "must be positive"));
        }
        if !self.x0.is_finite() {
            return Err(param("x0", "must be finite"));
        }
        Ok(())
    }

    pub fn h(&self) -> f64 {
        self.horizon / self.steps as f64
    }

    pub fn time(&self, k: usize) -> f64 {
        self.horizon * k as f64 / self.steps as f64
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.steps).map(|k| self.time(k)).collect()
    }

    /// Euler step landing exactly on `t`.
    pub fn step_of(&self, t: f64) -> Result<usize> {
        let k = (t / self.h()).round();
        if !(0.0..=self.steps as f64).contains(&k) || (k * self.h() - t).abs() > 1e-9 * self.horizon {
            return Err(Error::InconsistentGrids(format!("time {t} is not on the Euler grid (h = {})", self.h())));
        }
        Ok(k as usize)
    }
}

/// Runs one path, calling `visit(k, x_k, V(t_k, x_k))` for `k = 0 ..= steps`.
/// `X_{k+1} = X_k + V(t_k, X_k) h + dL_k`; returns the final noise sum.
pub fn drive_path(
    cfg: &SimulationConfig,
    noise: &StableIncrements,
    drift: &ModeTable,
    path: usize,
    mut visit: impl FnMut(usize, f64, f64),
) -> f64 {
    let mut rng = seeded(cfg.seed, path as u64);
    let h = cfg.h();
    let mut x = cfg.x0;
    let mut l = 0.0;
    for k in 0..cfg.steps {
        let v = drift.eval(k, x);
        visit(k, x, v);
        let dl = noise.sample(h, &mut rng);
        l += dl;
        x += v * h + dl;
    }
    visit(cfg.steps, x, drift.eval(cfg.steps, x));
    l
}

/// Positions at selected steps, one row per path, in path order.
#[derive(Clone, Debug)]
pub struct Ensemble {
    pub steps: Vec<usize>,
    pub times: Vec<f64>,
    pub x: Vec<Vec<f64>>,
}

impl Ensemble {
    /// Column of positions at the `i`-th recorded step.
    pub fn column(&self, i: usize) -> Vec<f64> {
        self.x.iter().map(|r| r[i]).collect()
    }
}

pub fn euler_maruyama(
    cfg: &SimulationConfig,
    noise: &StableIncrements,
    drift: &ModeTable,
    record: &[usize],
) -> Result<Ensemble> {
    cfg.validate()?;
    check_table(cfg, drift)?;
    if record.iter().any(|&k| k > cfg.steps) {
        return Err(param("record", "step beyond the horizon"));
    }
    let x = (0..cfg.paths)
        .into_par_iter()
        .map(|p| {
            let mut out = vec![0.0; record.len()];
            drive_path(cfg, noise, drift, p, |k, x, _| {
                for (o, &r) in out.iter_mut().zip(record) {
                    if r == k {
                        *o = x;
                    }
                }
            });
            out
        })
        .collect();
    Ok(Ensemble {
        steps: record.to_vec(),
        times: record.iter().map(|&k| cfg.time(k)).collect(),
        x,
    })
}

pub(crate) fn check_table(cfg: &SimulationConfig, t: &ModeTable) -> Result<()> {
    if t.rows() != 1 && t.rows() != cfg.steps + 1 {
        return Err(Error::InconsistentGrids(format!(
            "table has {} rows, Euler grid has {} nodes",
            t.rows(),
            cfg.steps + 1
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SimulationConfig {
        SimulationConfig {
            x0: 0.1,
            paths: 1000,
            steps: 64,
            horizon: 1.0,
            seed: 5,
        }
    }

    #[test]
    fn noise_is_shared_across_drifts() {
        let c = cfg();
        let noise = StableIncrements::new(1.8, 10.0).unwrap();
        let a = drive_path(&c, &noise, &ModeTable::zero(), 17, |_, _, _| {});
        let mut last = 0.0;
        let b = drive_path(&c, &noise, &ModeTable::zero(), 17, |_, x, _| last = x);
        assert_eq!(a.to_bits(), b.to_bits());
        assert!((last - c.x0 - a).abs() < 1e-12);
    }

    #[test]
    fn validation() {
        let mut c = cfg();
        c.paths = 10;
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.steps = 32;
        assert!(c.validate().is_err());
        assert_eq!(cfg().step_of(0.25).unwrap(), 16);
        assert!(cfg().step_of(0.3).is_err());
    }
}

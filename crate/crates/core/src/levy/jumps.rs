use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{param, Result};

/// `mu(dy) = K |y|^{-1-alpha} dy` restricted to `delta <= |y| <= C` (1-D).
/// The inner cutoff makes the mass finite; every closed form here uses the
/// same truncated measure.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JumpMeasure {
    pub k: f64,
    pub alpha: f64,
    pub c: f64,
    pub delta: f64,
}

impl JumpMeasure {
    pub const DEFAULT_DELTA: f64 = 1e-4;

    pub fn new(k: f64, alpha: f64, c: f64) -> Result<Self> {
        Self::with_cutoff(k, alpha, c, Self::DEFAULT_DELTA)
    }

    pub fn with_cutoff(k: f64, alpha: f64, c: f64, delta: f64) -> Result<Self> {
        if !(k > 0.0) {
            return Err(param("K", "intensity must be positive"));
        }
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(param("alpha", format!("{alpha} outside (0,2)")));
        }
        if !(delta > 0.0 && c > delta) {
            return Err(param("C", format!("need C > delta = {delta} > 0, got C = {c}")));
        }
        Ok(Self { k, alpha, c, delta })
    }

    /// `mu({delta <= |y| <= C}) = 2K (delta^-alpha - C^-alpha) / alpha`.
    pub fn mass(&self) -> f64 {
        2.0 * self.k * (self.delta.powf(-self.alpha) - self.c.powf(-self.alpha)) / self.alpha
    }

    /// `int |y|^p mu(dy)` over the truncated support.
    pub fn abs_moment(&self, p: f64) -> f64 {
        let e = p - self.alpha;
        if e.abs() < 1e-12 {
            2.0 * self.k * (self.c / self.delta).ln()
        } else {
            2.0 * self.k * (self.c.powf(e) - self.delta.powf(e)) / e
        }
    }

    /// Jump size by inverse CDF of the normalized `|y|^{-1-alpha}` law, random sign.
    pub fn sample_size<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let a = self.delta.powf(-self.alpha);
        let b = self.c.powf(-self.alpha);
        let u: f64 = rng.random();
        let y = (a - u * (a - b)).powf(-1.0 / self.alpha);
        let y = y.clamp(self.delta, self.c);
        if rng.random::<bool>() {
            y
        } else {
            -y
        }
    }
}

/// Jumps of the truncated Poisson random measure on `(r, t]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JumpRecord {
    pub measure: JumpMeasure,
    pub r: f64,
    pub t: f64,
    /// `(t - r) mu({delta <= |y| <= C})`.
    pub expected_count: f64,
    pub times: Vec<f64>,
    pub sizes: Vec<f64>,
}

impl JumpRecord {
    /// `sum_i |y_i|^p`.
    pub fn power_sum(&self, p: f64) -> f64 {
        self.sizes.iter().map(|y| y.abs().powf(p)).sum()
    }
}

pub fn sample_small_jumps<R: Rng + ?Sized>(measure: &JumpMeasure, r: f64, t: f64, rng: &mut R) -> Result<JumpRecord> {
    if !(t > r) {
        return Err(param("t", format!("need t > r, got r = {r}, t = {t}")));
    }
    let expected_count = (t - r) * measure.mass();
    let n = Poisson::new(expected_count)
        .map_err(|e| param("K", format!("Poisson intensity {expected_count}: {e}")))?
        .sample(rng) as usize;
    let mut times: Vec<f64> = (0..n).map(|_| r + (t - r) * (1.0 - rng.random::<f64>())).collect();
    times.sort_by(f64::total_cmp);
    let sizes = (0..n).map(|_| measure.sample_size(rng)).collect();
    Ok(JumpRecord {
        measure: *measure,
        r,
        t,
        expected_count,
        times,
        sizes,
    })
}

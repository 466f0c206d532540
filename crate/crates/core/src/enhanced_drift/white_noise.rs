use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::EnhancedDrift;
use crate::error::{Error, Result};
use crate::semigroup::Semigroup;
use crate::spectral::{Blocks, DyadicPartition, Field, FourierGrid, TimeField};
use crate::synth::seeded;

/// Truncated periodic white noise `xi^n = sum_{|k| <= n} xi_hat(k) e_k` (d = 1).
///
/// Coefficients are drawn in increasing `k`, so a sample at level `n` is the
/// truncation of any sample with the same seed at a higher level.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WhiteNoiseSample {
    pub n: usize,
    pub seed: u64,
    pub zero_mean: bool,
    /// `xi_hat(k)` for `k = 0 ..= n`; negative frequencies by conjugation.
    pub coeffs: Vec<(f64, f64)>,
}

pub fn sample_white_noise(seed: u64, n: usize, zero_mean: bool) -> WhiteNoiseSample {
    let mut rng = seeded(seed, 0);
    let mut coeffs = Vec::with_capacity(n + 1);
    let c0: f64 = rng.sample(StandardNormal);
    coeffs.push((if zero_mean { 0.0 } else { c0 }, 0.0));
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for _ in 1..=n {
        let a: f64 = rng.sample(StandardNormal);
        let b: f64 = rng.sample(StandardNormal);
        coeffs.push((a * s, b * s));
    }
    WhiteNoiseSample {
        n,
        seed,
        zero_mean,
        coeffs,
    }
}

impl WhiteNoiseSample {
    pub fn coeff(&self, k: i64) -> Complex64 {
        let (re, im) = self.coeffs[k.unsigned_abs() as usize];
        if k >= 0 {
            Complex64::new(re, im)
        } else {
            Complex64::new(re, -im)
        }
    }

    pub fn truncate(&self, n: usize) -> WhiteNoiseSample {
        let n = n.min(self.n);
        WhiteNoiseSample {
            n,
            seed: self.seed,
            zero_mean: self.zero_mean,
            coeffs: self.coeffs[..=n].to_vec(),
        }
    }

    pub fn to_field(&self, grid: FourierGrid) -> Result<Field> {
        if grid.d() != 1 || self.n + 1 > grid.n() / 2 {
            return Err(Error::Precondition(format!(
                "truncation {} needs a 1-d grid with N/2 - 1 >= n (N = {})",
                self.n,
                grid.n()
            )));
        }
        let mut c = vec![Complex64::default(); grid.len()];
        for k in -(self.n as i64)..=(self.n as i64) {
            c[grid.index_of([k, 0]).unwrap()] = self.coeff(k);
        }
        Field::from_coeffs(grid, c, true)
    }
}

/// Rough lift of truncated white noise: `V1 = xi^n` constant in time and
/// `V2(t) = J^T(d xi^n)(t) (.) xi^n`, drift regularity `-1/2 - eps`.
pub fn lift_white_noise(
    xi: &WhiteNoiseSample,
    sg: &Semigroup,
    part: &DyadicPartition,
    times: &[f64],
    eps: f64,
) -> Result<EnhancedDrift> {
    let grid = sg.grid();
    let f = xi.to_field(grid)?;
    let beta = -0.5 - eps;
    let v1 = TimeField::constant(times.to_vec(), &f, beta)?;
    let jd = sg.jt_all(&v1.map(|g| g.derivative(0)))?;
    let bx = Blocks::new(&f, part)?;
    let vals = jd
        .values()
        .iter()
        .map(|a| Blocks::new(a, part)?.resonant(&bx))
        .collect::<Result<Vec<_>>>()?;
    let v2 = TimeField::new(times.to_vec(), vals, 2.0 * beta + sg.alpha() - 1.0)?;
    let mut drift = EnhancedDrift::new(vec![v1], Some(vec![vec![v2]]), beta, sg, part)?;
    if sg.alpha() <= 1.5 {
        drift
            .notes
            .push(format!("alpha = {} <= 3/2: convergence of the lift is not covered", sg.alpha()));
    }
    Ok(drift)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_nested() {
        let a = sample_white_noise(11, 16, false);
        let b = sample_white_noise(11, 16, false);
        assert_eq!(a, b);
        let c = sample_white_noise(11, 8, false);
        assert_eq!(a.truncate(8), c);
        assert_eq!(sample_white_noise(11, 4, true).coeffs[0], (0.0, 0.0));
    }

    #[test]
    fn field_is_real() {
        let g = FourierGrid::one_d(64).unwrap();
        let f = sample_white_noise(2, 31, false).to_field(g).unwrap();
        assert!(f.imag_defect() < 1e-13);
        assert!(sample_white_noise(2, 32, false).to_field(g).is_err());
    }
}

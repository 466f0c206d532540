use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{param, Result};
use crate::spectral::{Field, TimeField};

/// Nonnegative Fourier coefficients of a real 1-D band-limited field at a list
/// of times, evaluated at arbitrary points by Horner's rule in `exp(2 pi i x)`.
#[derive(Clone, Debug)]
pub struct ModeTable {
    n: usize,
    rows: Vec<Vec<Complex64>>,
}

fn row(f: &Field, n: usize) -> Vec<Complex64> {
    (0..=n as i64).map(|k| f.coeff([k, 0])).collect()
}

impl ModeTable {
    fn check(f: &Field, n: usize) -> Result<()> {
        if f.grid().d() != 1 || !f.is_real() {
            return Err(param("drift", "mode tables need a real 1-d field"));
        }
        if n + 1 > f.grid().n() / 2 {
            return Err(param("n", format!("{n} exceeds N/2 - 1 = {}", f.grid().n() / 2 - 1)));
        }
        Ok(())
    }

    /// Time-independent table keeping modes `|k| <= n`.
    pub fn constant(f: &Field, n: usize) -> Result<Self> {
        Self::check(f, n)?;
        Ok(Self { n, rows: vec![row(f, n)] })
    }

    /// Rows at `times`, linear in time between the nodes of `v`.
    pub fn sampled(v: &TimeField, n: usize, times: &[f64]) -> Result<Self> {
        Self::check(v.value(0), n)?;
        let rows = times
            .iter()
            .map(|&t| Ok(row(&v.at(t)?, n)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n, rows })
    }

    pub fn zero() -> Self {
        Self {
            n: 0,
            rows: vec![vec![Complex64::default()]],
        }
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    /// Value at row `i` (clamped for constant tables) and position `x`.
    #[inline]
    pub fn eval(&self, i: usize, x: f64) -> f64 {
        let c = &self.rows[i.min(self.rows.len() - 1)];
        if self.n == 0 {
            return c[0].re;
        }
        let (s, co) = (TAU * x.rem_euclid(1.0)).sin_cos();
        let z = Complex64::new(co, s);
        let mut acc = c[self.n];
        for k in (1..self.n).rev() {
            acc = acc * z + c[k];
        }
        c[0].re + 2.0 * (acc * z).re
    }
}

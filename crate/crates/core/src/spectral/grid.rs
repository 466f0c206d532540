use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform Fourier grid on the unit torus `[0,1)^d`.
///
/// Resolvable frequencies per axis are `-N/2 ..= N/2-1`, stored in FFT order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourierGrid {
    d: usize,
    n: usize,
}

impl FourierGrid {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        if d != 1 && d != 2 {
            return Err(Error::Grid(format!("dimension {d} not in {{1, 2}}")));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::Grid(format!(
                "modes per axis {n} must be a power of two >= 8"
            )));
        }
        Ok(Self { d, n })
    }

    pub fn one_d(n: usize) -> Result<Self> {
        Self::new(1, n)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of coefficients, `N^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Side of the 2x oversampled grid used for products and sup norms.
    pub fn padded_n(&self) -> usize {
        2 * self.n
    }

    pub fn padded_len(&self) -> usize {
        self.padded_n().pow(self.d as u32)
    }

    pub fn freq_1d(i: usize, n: usize) -> i64 {
        if i < n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    fn wrap(k: i64, n: usize) -> usize {
        k.rem_euclid(n as i64) as usize
    }

    /// Integer wavevector of coefficient `idx` (second entry 0 when d = 1).
    pub fn wavevector(&self, idx: usize) -> [i64; 2] {
        match self.d {
            1 => [Self::freq_1d(idx, self.n), 0],
            _ => [
                Self::freq_1d(idx / self.n, self.n),
                Self::freq_1d(idx % self.n, self.n),
            ],
        }
    }

    /// Storage index of wavevector `k`, if resolvable.
    pub fn index_of(&self, k: [i64; 2]) -> Option<usize> {
        let h = (self.n / 2) as i64;
        let ok = |c: i64| -h <= c && c < h;
        match self.d {
            1 => ok(k[0]).then(|| Self::wrap(k[0], self.n)),
            _ => (ok(k[0]) && ok(k[1]))
                .then(|| Self::wrap(k[0], self.n) * self.n + Self::wrap(k[1], self.n)),
        }
    }

    /// Index of the same wavevector on the oversampled grid.
    pub fn padded_index(&self, idx: usize) -> usize {
        let k = self.wavevector(idx);
        let m = self.padded_n();
        match self.d {
            1 => Self::wrap(k[0], m),
            _ => Self::wrap(k[0], m) * m + Self::wrap(k[1], m),
        }
    }

    /// Index of `-k` for the coefficient at `idx` (Nyquist modes map to themselves).
    pub fn neg_index(&self, idx: usize) -> usize {
        let k = self.wavevector(idx);
        match self.d {
            1 => Self::wrap(-k[0], self.n),
            _ => Self::wrap(-k[0], self.n) * self.n + Self::wrap(-k[1], self.n),
        }
    }

    /// True if some component equals `-N/2`, the unpaired frequency.
    pub fn is_nyquist(&self, idx: usize) -> bool {
        let h = -((self.n / 2) as i64);
        let k = self.wavevector(idx);
        k[0] == h || (self.d == 2 && k[1] == h)
    }

    pub fn radius(&self, idx: usize) -> f64 {
        let k = self.wavevector(idx);
        ((k[0] * k[0] + k[1] * k[1]) as f64).sqrt()
    }

    /// Physical sample points of the plain grid, row-major.
    pub fn points(&self) -> Vec<[f64; 2]> {
        let h = 1.0 / self.n as f64;
        (0..self.len())
            .map(|i| match self.d {
                1 => [i as f64 * h, 0.0],
                _ => [(i / self.n) as f64 * h, (i % self.n) as f64 * h],
            })
            .collect()
    }
}

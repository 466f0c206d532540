use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fft::fft_nd;
use super::grid::FourierGrid;
use crate::error::{Error, Result};

/// Periodic distribution on the torus held by its Fourier coefficients.
///
/// Real fields are Hermitian and carry a zero coefficient on every Nyquist
/// frequency (`-N/2` in some component), so their 2x oversampled samples are
/// real. Products and derivatives preserve that convention.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    grid: FourierGrid,
    coeffs: Vec<Complex64>,
    real: bool,
}

impl Field {
    pub fn zeros(grid: FourierGrid) -> Self {
        Self {
            grid,
            coeffs: vec![Complex64::default(); grid.len()],
            real: true,
        }
    }

    pub fn constant(grid: FourierGrid, c: f64) -> Self {
        let mut f = Self::zeros(grid);
        f.coeffs[0] = Complex64::new(c, 0.0);
        f
    }

    /// The complex exponential `e_k(x) = exp(2 pi i k.x)`.
    pub fn mode(grid: FourierGrid, k: [i64; 2]) -> Result<Self> {
        let idx = grid
            .index_of(k)
            .ok_or_else(|| Error::Grid(format!("frequency {k:?} not resolvable")))?;
        let mut f = Self::zeros(grid);
        f.coeffs[idx] = Complex64::new(1.0, 0.0);
        f.real = k == [0, 0];
        Ok(f)
    }

    /// `amp * cos(2 pi k.x)`.
    pub fn cosine(grid: FourierGrid, k: [i64; 2], amp: f64) -> Result<Self> {
        Self::trig(grid, k, Complex64::new(amp, 0.0))
    }

    /// `amp * sin(2 pi k.x)`.
    pub fn sine(grid: FourierGrid, k: [i64; 2], amp: f64) -> Result<Self> {
        Self::trig(grid, k, Complex64::new(0.0, -amp))
    }

    /// Real field `2 Re(c e_k)` (or `Re c` at k = 0).
    fn trig(grid: FourierGrid, k: [i64; 2], c: Complex64) -> Result<Self> {
        let mut f = Self::zeros(grid);
        if k == [0, 0] {
            f.coeffs[0] = Complex64::new(c.re, 0.0);
            return Ok(f);
        }
        let bad = || Error::Grid(format!("frequency {k:?} not resolvable for a real field"));
        let i = grid.index_of(k).ok_or_else(bad)?;
        let j = grid.index_of([-k[0], -k[1]]).ok_or_else(bad)?;
        if grid.is_nyquist(i) || grid.is_nyquist(j) {
            return Err(bad());
        }
        f.coeffs[i] += c * 0.5;
        f.coeffs[j] += c.conj() * 0.5;
        Ok(f)
    }

    /// Wraps raw coefficients. A real flag requires Hermitian symmetry and
    /// vanishing Nyquist coefficients (relative tolerance 1e-12).
    pub fn from_coeffs(grid: FourierGrid, coeffs: Vec<Complex64>, real: bool) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::Grid(format!(
                "expected {} coefficients, got {}",
                grid.len(),
                coeffs.len()
            )));
        }
        let f = Self {
            grid,
            coeffs,
            real,
        };
        if real {
            let scale = f.max_abs_coeff().max(1e-300);
            for idx in 0..grid.len() {
                let c = f.coeffs[idx];
                let bad = if grid.is_nyquist(idx) {
                    c.norm() > 1e-12 * scale
                } else {
                    (c - f.coeffs[grid.neg_index(idx)].conj()).norm() > 1e-12 * scale
                };
                if bad {
                    return Err(Error::Precondition(format!(
                        "coefficients flagged real are not Hermitian at {:?}",
                        grid.wavevector(idx)
                    )));
                }
            }
        }
        Ok(f)
    }

    /// Real field from point values on the plain grid; the Nyquist part is dropped.
    pub fn from_samples(grid: FourierGrid, samples: &[f64]) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::Grid(format!(
                "expected {} samples, got {}",
                grid.len(),
                samples.len()
            )));
        }
        let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        fft_nd(&mut buf, grid.d(), grid.n(), false);
        let s = 1.0 / grid.len() as f64;
        for (idx, c) in buf.iter_mut().enumerate() {
            *c = if grid.is_nyquist(idx) { Complex64::default() } else { *c * s };
        }
        Ok(Self {
            grid,
            coeffs: buf,
            real: true,
        })
    }

    pub fn from_fn(grid: FourierGrid, f: impl Fn([f64; 2]) -> f64) -> Self {
        let s: Vec<f64> = grid.points().into_iter().map(f).collect();
        Self::from_samples(grid, &s).expect("sample count matches grid")
    }

    pub(crate) fn from_padded(grid: FourierGrid, mut buf: Vec<Complex64>, real: bool) -> Self {
        fft_nd(&mut buf, grid.d(), grid.padded_n(), false);
        let s = 1.0 / grid.padded_len() as f64;
        let coeffs = (0..grid.len())
            .map(|idx| {
                if grid.is_nyquist(idx) {
                    Complex64::default()
                } else {
                    buf[grid.padded_index(idx)] * s
                }
            })
            .collect();
        Self { grid, coeffs, real }
    }

    pub fn grid(&self) -> FourierGrid {
        self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn coeff(&self, k: [i64; 2]) -> Complex64 {
        self.grid
            .index_of(k)
            .map(|i| self.coeffs[i])
            .unwrap_or_default()
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub(crate) fn with_real_flag(mut self, real: bool) -> Self {
        self.real = real;
        self
    }

    pub fn check_grid(&self, other: &Field) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// Coefficients multiplied entrywise by `m(idx)`; the real flag is kept,
    /// so `m` must be even in k for real fields.
    pub fn map_multiplier(&self, m: impl Fn(usize) -> Complex64) -> Field {
        Field {
            grid: self.grid,
            coeffs: self.coeffs.iter().enumerate().map(|(i, &c)| c * m(i)).collect(),
            real: self.real,
        }
    }

    /// Point values on the plain (`pad = 1`) or 2x oversampled (`pad = 2`) grid.
    pub fn samples(&self, pad: usize) -> Vec<Complex64> {
        assert!(pad == 1 || pad == 2, "pad must be 1 or 2");
        let g = self.grid;
        if pad == 1 {
            let mut buf = self.coeffs.clone();
            fft_nd(&mut buf, g.d(), g.n(), true);
            return buf;
        }
        let mut buf = vec![Complex64::default(); g.padded_len()];
        for (idx, &c) in self.coeffs.iter().enumerate() {
            buf[g.padded_index(idx)] = c;
        }
        fft_nd(&mut buf, g.d(), g.padded_n(), true);
        buf
    }

    pub fn real_samples(&self, pad: usize) -> Vec<f64> {
        self.samples(pad).into_iter().map(|c| c.re).collect()
    }

    /// Direct Fourier sum at an arbitrary point.
    pub fn eval(&self, x: [f64; 2]) -> Complex64 {
        let mut acc = Complex64::default();
        for (idx, &c) in self.coeffs.iter().enumerate() {
            if c == Complex64::default() {
                continue;
            }
            let k = self.grid.wavevector(idx);
            let ph = 2.0 * PI * (k[0] as f64 * x[0] + k[1] as f64 * x[1]);
            acc += c * Complex64::from_polar(1.0, ph);
        }
        acc
    }

    /// `L^inf` norm approximated by the max over the 2x oversampled grid.
    pub fn sup_norm(&self) -> f64 {
        self.samples(2).iter().fold(0.0f64, |m, c| m.max(c.norm()))
    }

    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()))
    }

    /// Largest `|k|_inf` carrying a coefficient above `tol * max|coeff|`.
    pub fn bandwidth(&self, tol: f64) -> usize {
        let cut = tol * self.max_abs_coeff();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > cut)
            .map(|(i, _)| {
                let k = self.grid.wavevector(i);
                k[0].unsigned_abs().max(k[1].unsigned_abs()) as usize
            })
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, s: f64) -> Field {
        Field {
            grid: self.grid,
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
            real: self.real,
        }
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.axpy(-1.0, other)
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: f64, other: &Field) -> Result<Field> {
        self.check_grid(other)?;
        Ok(Field {
            grid: self.grid,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&x, &y)| x + y * a)
                .collect(),
            real: self.real && other.real,
        })
    }

    /// Spectral derivative along `axis` (multiplier `2 pi i k_axis`, Nyquist dropped).
    pub fn derivative(&self, axis: usize) -> Field {
        let g = self.grid;
        self.map_multiplier(|idx| {
            if g.is_nyquist(idx) {
                Complex64::default()
            } else {
                Complex64::new(0.0, 2.0 * PI * g.wavevector(idx)[axis] as f64)
            }
        })
    }

    pub fn gradient(&self) -> Vec<Field> {
        (0..self.grid.d()).map(|a| self.derivative(a)).collect()
    }

    /// Pointwise product, alias-free via the 2x grid, projected back onto the
    /// resolvable set.
    pub fn multiply(&self, other: &Field) -> Result<Field> {
        self.check_grid(other)?;
        let a = self.samples(2);
        let b = other.samples(2);
        let prod = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        Ok(Field::from_padded(self.grid, prod, self.real && other.real))
    }

    /// Sharp Fourier truncation to `|k|_inf <= n`.
    pub fn truncate(&self, n: usize) -> Field {
        let g = self.grid;
        self.map_multiplier(|idx| {
            let k = g.wavevector(idx);
            if k[0].unsigned_abs() as usize <= n && k[1].unsigned_abs() as usize <= n {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::default()
            }
        })
    }

    /// Max imaginary part of the plain-grid samples relative to the max modulus.
    pub fn imag_defect(&self) -> f64 {
        let s = self.samples(2);
        let m = s.iter().fold(0.0f64, |m, c| m.max(c.norm())).max(1e-300);
        s.iter().fold(0.0f64, |a, c| a.max(c.im.abs())) / m
    }

    pub fn to_record(&self) -> FieldRecord {
        FieldRecord {
            d: self.grid.d(),
            n: self.grid.n(),
            real_flag: self.real,
            coeffs: self.coeffs.iter().flat_map(|c| [c.re, c.im]).collect(),
        }
    }

    pub fn from_record(r: &FieldRecord) -> Result<Field> {
        let grid = FourierGrid::new(r.d, r.n)?;
        if r.coeffs.len() != 2 * grid.len() {
            return Err(Error::Grid("interleaved coefficient length mismatch".into()));
        }
        let coeffs = r
            .coeffs
            .chunks(2)
            .map(|c| Complex64::new(c[0], c[1]))
            .collect();
        Field::from_coeffs(grid, coeffs, r.real_flag)
    }
}

/// Flat serialization schema: interleaved `re, im` pairs in FFT order.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FieldRecord {
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub real_flag: bool,
    pub coeffs: Vec<f64>,
}

use std::f64::consts::PI;

use num_complex::Complex64;

use super::white_noise::WhiteNoiseSample;
use crate::error::{Error, Result};
use crate::semigroup::Semigroup;
use crate::spectral::{Blocks, DyadicPartition, TimeField};

/// Second-chaos kernel `K(k1, k2)` of `Z = Delta_j((rho_t - rho_s) * xi^n (.) xi^n)(0)`,
/// so that `Z = sum K(k1, k2) xi_hat(k1) xi_hat(k2)`.
#[derive(Clone, Debug)]
pub struct ChaosKernel {
    pub n: usize,
    /// Row-major over `k1, k2 in -n ..= n`.
    pub k: Vec<Complex64>,
}

impl ChaosKernel {
    fn at(&self, k1: i64, k2: i64) -> Complex64 {
        let w = 2 * self.n as i64 + 1;
        self.k[((k1 + self.n as i64) * w + (k2 + self.n as i64)) as usize]
    }

    pub fn l2_sq(&self) -> f64 {
        self.k.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Fourier coefficient of `J^T(d .)` at time `r` for a constant-in-time input.
fn rho_hat(sg: &Semigroup, k: i64, r: f64, horizon: f64) -> Complex64 {
    if k == 0 {
        return Complex64::default();
    }
    let l = sg.symbol().psi(&[k as f64]);
    let w = -(-(horizon - r) * l).exp_m1() / l;
    Complex64::new(0.0, 2.0 * PI * k as f64 * w)
}

pub fn chaos_kernel(
    sg: &Semigroup,
    part: &DyadicPartition,
    j: i32,
    s: f64,
    t: f64,
    n: usize,
    horizon: f64,
) -> Result<ChaosKernel> {
    let grid = sg.grid();
    if grid.d() != 1 || 2 * n + 1 > grid.n() / 2 {
        return Err(Error::Precondition(format!(
            "chaos kernel at n = {n} needs a 1-d grid with N/2 - 1 >= 2n"
        )));
    }
    if j < -1 || j > part.jmax() {
        return Err(Error::BlockIndex { j, jmax: part.jmax() });
    }
    let ni = n as i64;
    let mut k = Vec::with_capacity((2 * n + 1).pow(2));
    for k1 in -ni..=ni {
        let a = rho_hat(sg, k1, t, horizon) - rho_hat(sg, k1, s, horizon);
        for k2 in -ni..=ni {
            let w = part.weight_at(j, [k1 + k2, 0]);
            k.push(if w == 0.0 || a == Complex64::default() {
                Complex64::default()
            } else {
                a * w * part.resonant_symbol([k1, 0], [k2, 0])
            });
        }
    }
    Ok(ChaosKernel { n, k })
}

/// `E|Z|^2` from the pairing structure `E[xi_hat(k) xi_hat(l)] = delta_{k,-l}`:
/// squared mean plus the two second-chaos pairings.
pub fn chaos_variance_oracle(
    sg: &Semigroup,
    part: &DyadicPartition,
    j: i32,
    s: f64,
    t: f64,
    n: usize,
    horizon: f64,
) -> Result<f64> {
    let kern = chaos_kernel(sg, part, j, s, t, n, horizon)?;
    let ni = n as i64;
    let mut mean = Complex64::default();
    let mut cross = Complex64::default();
    for k1 in -ni..=ni {
        mean += kern.at(k1, -k1);
        for k2 in -ni..=ni {
            cross += kern.at(k1, k2) * kern.at(k2, k1).conj();
        }
    }
    Ok(mean.norm_sqr() + kern.l2_sq() + cross.re)
}

/// Brute-force `E|Z|^2` over the real Gaussian basis
/// `xi_hat(0) = g_0`, `xi_hat(+-m) = (a_m +- i b_m)/sqrt 2`, with every fourth
/// moment evaluated by counting index multiplicities.
pub fn wick_expectation(kern: &ChaosKernel) -> f64 {
    let n = kern.n as i64;
    let dim = 2 * kern.n + 1;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    // xi_hat(k) = sum_a lin[k][a] g_a
    let lin = |k: i64| -> Vec<(usize, Complex64)> {
        if k == 0 {
            vec![(0, Complex64::new(1.0, 0.0))]
        } else {
            let m = k.unsigned_abs() as usize;
            let sign = if k > 0 { 1.0 } else { -1.0 };
            vec![(2 * m - 1, Complex64::new(s, 0.0)), (2 * m, Complex64::new(0.0, sign * s))]
        }
    };
    let mut q = vec![Complex64::default(); dim * dim];
    for k1 in -n..=n {
        for k2 in -n..=n {
            let c = kern.at(k1, k2);
            if c == Complex64::default() {
                continue;
            }
            for (a, la) in lin(k1) {
                for (b, lb) in lin(k2) {
                    q[a * dim + b] += c * la * lb;
                }
            }
        }
    }
    let moment = |idx: [usize; 4]| -> f64 {
        let mut m = 1.0;
        for a in 0..dim {
            match idx.iter().filter(|&&i| i == a).count() {
                0 => {}
                2 => m *= 1.0,
                4 => m *= 3.0,
                _ => return 0.0,
            }
        }
        m
    };
    let mut acc = Complex64::default();
    for a in 0..dim {
        for b in 0..dim {
            let qab = q[a * dim + b];
            if qab == Complex64::default() {
                continue;
            }
            for c in 0..dim {
                for d in 0..dim {
                    let e = moment([a, b, c, d]);
                    if e != 0.0 {
                        acc += qab * q[c * dim + d].conj() * e;
                    }
                }
            }
        }
    }
    acc.re
}

/// One realization of `Z` computed through the lift machinery: `J^T` by the
/// exponential recursion on the nodes `s < t < T`, resonant product by blocks,
/// then block `j` of the increment evaluated at `x = 0`.
pub fn chaos_block_increment(
    xi: &WhiteNoiseSample,
    sg: &Semigroup,
    part: &DyadicPartition,
    j: i32,
    s: f64,
    t: f64,
    horizon: f64,
) -> Result<Complex64> {
    let f = xi.to_field(sg.grid())?;
    let times = vec![s, t, horizon];
    let jd = sg.jt_all(&TimeField::constant(times, &f.derivative(0), 0.0)?)?;
    let inc = jd.value(1).sub(jd.value(0))?;
    let prod = Blocks::new(&inc, part)?.resonant(&Blocks::new(&f, part)?)?;
    let blk = part.block(&prod, j)?;
    Ok(blk.coeffs().iter().sum())
}

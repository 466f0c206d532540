use num_complex::Complex64;

use super::symbol::StableSymbol;
use crate::error::{param, Error, Result};
use crate::spectral::{Blocks, DyadicPartition, Field, FourierGrid, TimeField};

/// Exponential quadrature weights of one time step for every mode.
///
/// For `v` linear on `[r_a, r_a + h]`:
/// `int_0^h exp(-s l) v(r_a + s) ds = v_a phi1 + (v_b - v_a) phi2`.
#[derive(Clone, Debug)]
struct StepWeights {
    h: f64,
    decay: Vec<f64>,
    phi1: Vec<f64>,
    phi2: Vec<f64>,
}

fn phi12(l: f64, h: f64) -> (f64, f64) {
    let x = l * h;
    if x < 0.5 {
        // (1 - e^-x)/x = sum (-x)^n/(n+1)!, (1 - e^-x (1+x))/x^2 = sum (-x)^n (n+1)/(n+2)!
        let (mut a, mut b) = (0.0, 0.0);
        let mut p = 0.5; // (-x)^n / (n+2)!
        for n in 0..20 {
            let nf = n as f64;
            a += p * (nf + 2.0);
            b += p * (nf + 1.0);
            p *= -x / (nf + 3.0);
        }
        (h * a, h * b)
    } else {
        let e = (-x).exp();
        ((1.0 - e) / l, (1.0 - e * (1.0 + x)) / (l * x))
    }
}

impl StepWeights {
    fn new(psi: &[f64], h: f64) -> Self {
        let mut decay = Vec::with_capacity(psi.len());
        let mut phi1 = Vec::with_capacity(psi.len());
        let mut phi2 = Vec::with_capacity(psi.len());
        for &l in psi {
            let (a, b) = phi12(l, h);
            decay.push((-l * h).exp());
            phi1.push(a);
            phi2.push(b);
        }
        Self {
            h,
            decay,
            phi1,
            phi2,
        }
    }
}

/// Fourier-multiplier toolkit of one stable symbol on one grid: generator,
/// semigroup `P_t`, backward integral `J^T` and the two commutators.
#[derive(Clone, Debug)]
pub struct Semigroup {
    sym: StableSymbol,
    grid: FourierGrid,
    psi: Vec<f64>,
    lower: f64,
}

impl Semigroup {
    pub fn new(sym: StableSymbol, grid: FourierGrid) -> Result<Self> {
        if sym.dim() != grid.d() {
            return Err(param("atoms", "direction dimension differs from the grid dimension"));
        }
        let psi: Vec<f64> = (0..grid.len())
            .map(|i| {
                let k = grid.wavevector(i);
                sym.psi(&[k[0] as f64, k[1] as f64][..grid.d()])
            })
            .collect();
        let alpha = sym.alpha();
        let lower = (1..grid.len())
            .map(|i| psi[i] / grid.radius(i).powf(alpha))
            .fold(f64::INFINITY, f64::min);
        if !(lower > 0.0) {
            return Err(Error::Precondition(
                "symbol is not bounded below by c|k|^alpha on the grid".into(),
            ));
        }
        Ok(Self {
            sym,
            grid,
            psi,
            lower,
        })
    }

    pub fn symbol(&self) -> &StableSymbol {
        &self.sym
    }

    pub fn alpha(&self) -> f64 {
        self.sym.alpha()
    }

    pub fn grid(&self) -> FourierGrid {
        self.grid
    }

    pub fn psi_table(&self) -> &[f64] {
        &self.psi
    }

    /// Realized `min_k psi(k) / |k|^alpha` over the nonzero grid frequencies.
    pub fn lower_constant(&self) -> f64 {
        self.lower
    }

    fn check(&self, u: &Field) -> Result<()> {
        if u.grid() == self.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// `L u`, multiplier `psi(k)`; the generator of the process is `-L`.
    pub fn apply_generator(&self, u: &Field) -> Result<Field> {
        self.check(u)?;
        Ok(u.map_multiplier(|i| self.psi[i].into()))
    }

    /// `P_t u`, multiplier `exp(-t psi(k))`.
    pub fn apply(&self, t: f64, u: &Field) -> Result<Field> {
        if t < 0.0 {
            return Err(param("t", format!("{t} must be nonnegative")));
        }
        self.check(u)?;
        if t == 0.0 {
            return Ok(u.clone());
        }
        Ok(u.map_multiplier(|i| (-t * self.psi[i]).exp().into()))
    }

    /// `t -> P_{T-t} u_T` on the given nodes, `T` the last node.
    pub fn free_evolution(&self, terminal: &Field, times: &[f64]) -> Result<TimeField> {
        let t_end = *times.last().ok_or_else(|| Error::Precondition("empty time grid".into()))?;
        let values = times
            .iter()
            .map(|&t| self.apply(t_end - t, terminal))
            .collect::<Result<_>>()?;
        TimeField::new(times.to_vec(), values, 0.0)
    }

    /// `J^T v` at every node of `v`, anchored at its last node `T`, with `v`
    /// linear in time between nodes and each mode integrated exactly.
    pub fn jt_all(&self, v: &TimeField) -> Result<TimeField> {
        self.check(v.value(0))?;
        let t = v.times();
        let m = t.len();
        let mut out = vec![Field::zeros(self.grid); m];
        let mut acc = vec![Complex64::default(); self.grid.len()];
        let mut w: Option<StepWeights> = None;
        for i in (0..m - 1).rev() {
            let h = t[i + 1] - t[i];
            if w.as_ref().map_or(true, |w| w.h != h) {
                w = Some(StepWeights::new(&self.psi, h));
            }
            let w = w.as_ref().unwrap();
            let (va, vb) = (v.value(i).coeffs(), v.value(i + 1).coeffs());
            for k in 0..acc.len() {
                acc[k] = acc[k] * w.decay[k] + va[k] * w.phi1[k] + (vb[k] - va[k]) * w.phi2[k];
            }
            let real = v.value(i).is_real() && v.value(i + 1).is_real();
            out[i] = Field::from_coeffs(self.grid, acc.clone(), false)?.with_real_flag(real);
        }
        out[m - 1] = Field::zeros(self.grid).with_real_flag(v.value(m - 1).is_real());
        TimeField::new(t.to_vec(), out, v.theta() + self.alpha())
    }

    /// `J^T v(t)` at an arbitrary `t` in the span of the grid.
    pub fn jt_apply(&self, v: &TimeField, t: f64) -> Result<Field> {
        let (i, w) = v.locate(t)?;
        let all = self.jt_all(v)?;
        if w == 0.0 {
            return Ok(all.value(i).clone());
        }
        if w == 1.0 {
            return Ok(all.value(i + 1).clone());
        }
        let times = v.times();
        let h = times[i + 1] - t;
        let vt = v.at(t)?;
        let vb = v.value(i + 1);
        let jb = all.value(i + 1);
        let coeffs = (0..self.grid.len())
            .map(|k| {
                let l = self.psi[k];
                let (p1, p2) = phi12(l, h);
                jb.coeffs()[k] * (-l * h).exp() + vt.coeffs()[k] * p1 + (vb.coeffs()[k] - vt.coeffs()[k]) * p2
            })
            .collect();
        Ok(Field::from_coeffs(self.grid, coeffs, false)?.with_real_flag(vt.is_real() && vb.is_real()))
    }

    /// `J^T(g < h) - g < J^T h` on the common grid.
    pub fn commutator_jt(&self, g: &TimeField, h: &TimeField, part: &DyadicPartition) -> Result<TimeField> {
        g.check_times(h)?;
        let gb: Vec<Blocks> = g.values().iter().map(|f| Blocks::new(f, part)).collect::<Result<_>>()?;
        let mut para = Vec::with_capacity(g.len());
        for (b, hv) in gb.iter().zip(h.values()) {
            para.push(b.less(&Blocks::new(hv, part)?)?);
        }
        let para = TimeField::new(g.times().to_vec(), para, 0.0)?;
        let j_para = self.jt_all(&para)?;
        let jh = self.jt_all(h)?;
        let mut out = Vec::with_capacity(g.len());
        for ((b, jp), jhv) in gb.iter().zip(j_para.values()).zip(jh.values()) {
            out.push(jp.sub(&b.less(&Blocks::new(jhv, part)?)?)?);
        }
        TimeField::new(g.times().to_vec(), out, 0.0)
    }

    /// `P_t(u < v) - u < P_t v`.
    pub fn commutator_semigroup(&self, t: f64, u: &Field, v: &Field, part: &DyadicPartition) -> Result<Field> {
        let bu = Blocks::new(u, part)?;
        let a = self.apply(t, &bu.less(&Blocks::new(v, part)?)?)?;
        let b = bu.less(&Blocks::new(&self.apply(t, v)?, part)?)?;
        a.sub(&b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_branch_matches_closed_form() {
        for &x in &[1e-8, 1e-3, 0.1, 0.49, 0.5, 0.51] {
            let (a, b) = phi12(x, 1.0);
            let e = (-x).exp();
            let a0 = -(-x).exp_m1() / x;
            let b0 = (1.0 - e * (1.0 + x)) / (x * x);
            assert!((a - a0).abs() < 1e-13, "x={x}");
            if x > 1e-3 {
                assert!((b - b0).abs() < 1e-9, "x={x}");
            }
            assert!((b - (0.5 - x / 3.0)).abs() < x * x, "x={x}");
        }
        let (a, b) = phi12(0.0, 0.25);
        assert_eq!((a, b), (0.25, 0.125));
    }
}

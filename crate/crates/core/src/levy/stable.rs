use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{param, Result};
use crate::semigroup::StableSymbol;

/// Standard symmetric stable variable, `E exp(i u X) = exp(-|u|^alpha)`,
/// by Chambers-Mallows-Stuck. `alpha = 2` is `N(0, 2)`.
pub fn standard_symmetric_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    if alpha == 2.0 {
        let z: f64 = StandardNormal.sample(rng);
        return std::f64::consts::SQRT_2 * z;
    }
    // open interval (-pi/2, pi/2)
    let v = loop {
        let v = PI * (rng.random::<f64>() - 0.5);
        if v.abs() < FRAC_PI_2 {
            break v;
        }
    };
    let w: f64 = Exp1.sample(rng);
    if alpha == 1.0 {
        return v.tan();
    }
    (alpha * v).sin() / v.cos().powf(1.0 / alpha) * (((1.0 - alpha) * v).cos() / w).powf((1.0 - alpha) / alpha)
}

/// Increments `L_{t+dt} - L_t` of the 1-D process with
/// `E exp(2 pi i z L_dt) = exp(-dt c |z|^alpha)`, where `psi(z) = c |z|^alpha`.
#[derive(Clone, Copy, Debug)]
pub struct StableIncrements {
    alpha: f64,
    c: f64,
}

impl StableIncrements {
    pub fn new(alpha: f64, c: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha <= 2.0) {
            return Err(param("alpha", format!("{alpha} outside the admissible interval (1,2]")));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(param("c", format!("{c} must be positive")));
        }
        Ok(Self { alpha, c })
    }

    /// Sampler matching a 1-D symbol, whose scale is `psi(1)`.
    pub fn from_symbol(sym: &StableSymbol) -> Result<Self> {
        if sym.dim() != 1 {
            return Err(param("sym", "path sampling is 1-D"));
        }
        Self::new(sym.alpha(), sym.scale_1d())
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn scale(&self, dt: f64) -> f64 {
        (self.c * dt).powf(1.0 / self.alpha) / (2.0 * PI)
    }

    pub fn sample<R: Rng + ?Sized>(&self, dt: f64, rng: &mut R) -> f64 {
        self.scale(dt) * standard_symmetric_stable(self.alpha, rng)
    }

    /// `exp(-dt c |z|^alpha)`.
    pub fn characteristic(&self, dt: f64, z: f64) -> f64 {
        (-dt * self.c * z.abs().powf(self.alpha)).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::seeded;

    #[test]
    fn gaussian_branch_variance() {
        let s = StableIncrements::new(2.0, 3.0).unwrap();
        let mut rng = seeded(1, 0);
        let n = 200_000;
        let v: f64 = (0..n).map(|_| s.sample(0.5, &mut rng).powi(2)).sum::<f64>() / n as f64;
        let target = 3.0 * 0.5 / (2.0 * PI * PI);
        assert!((v / target - 1.0).abs() < 0.02);
    }

    #[test]
    fn cms_at_two_is_gaussian_scale() {
        // at alpha = 2 the CMS formula reduces to 2 sin(V) sqrt(W), also N(0, 2)
        let mut rng = seeded(2, 0);
        let n = 100_000;
        let v: f64 = (0..n)
            .map(|_| standard_symmetric_stable(1.999999, &mut rng).powi(2).min(1e6))
            .sum::<f64>()
            / n as f64;
        assert!((v - 2.0).abs() < 0.1, "{v}");
    }

    #[test]
    fn rejects_alpha_outside_range() {
        assert!(StableIncrements::new(1.0, 1.0).is_err());
        assert!(StableIncrements::new(2.5, 1.0).is_err());
    }
}

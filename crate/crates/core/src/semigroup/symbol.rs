use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{param, Result};

/// One atom of the spectral measure: a unit direction with positive weight.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub dir: Vec<f64>,
    pub weight: f64,
}

/// Symbol `psi(z) = sum_i w_i |<z, xi_i>|^alpha` of a symmetric stable
/// generator with finitely many atoms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StableSymbol {
    alpha: f64,
    atoms: Vec<Atom>,
}

impl StableSymbol {
    pub fn new(alpha: f64, atoms: Vec<Atom>) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(param("alpha", format!("{alpha} must lie in (0, 2]")));
        }
        let Some(first) = atoms.first() else {
            return Err(param("atoms", "at least one atom required"));
        };
        let d = first.dir.len();
        if d != 1 && d != 2 {
            return Err(param("atoms", "directions must have dimension 1 or 2"));
        }
        for (i, a) in atoms.iter().enumerate() {
            if a.dir.len() != d {
                return Err(param(&format!("atoms[{i}].dir"), "dimension mismatch"));
            }
            let norm = a.dir.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-9 {
                return Err(param(&format!("atoms[{i}].dir"), "must be a unit vector"));
            }
            if !(a.weight > 0.0 && a.weight.is_finite()) {
                return Err(param(&format!("atoms[{i}].weight"), "must be positive"));
            }
            let mirrored = atoms.iter().any(|b| {
                (b.weight - a.weight).abs() <= 1e-12 * a.weight
                    && b.dir.iter().zip(&a.dir).all(|(x, y)| (x + y).abs() <= 1e-12)
            });
            if !mirrored {
                return Err(param(
                    &format!("atoms[{i}]"),
                    "measure must be symmetric: missing the mirrored atom with equal weight",
                ));
            }
        }
        let spans = match d {
            1 => true,
            _ => atoms.iter().any(|a| {
                atoms
                    .iter()
                    .any(|b| (a.dir[0] * b.dir[1] - a.dir[1] * b.dir[0]).abs() > 1e-9)
            }),
        };
        if !spans {
            return Err(param("atoms", "directions must span R^d"));
        }
        Ok(Self { alpha, atoms })
    }

    /// `psi(k) = |2 pi k|^alpha` in d = 1 (atoms at +-1 with weight `(2 pi)^alpha / 2`).
    pub fn fractional_laplacian(alpha: f64) -> Result<Self> {
        let w = (2.0 * PI).powf(alpha) / 2.0;
        Self::new(
            alpha,
            vec![
                Atom { dir: vec![1.0], weight: w },
                Atom { dir: vec![-1.0], weight: w },
            ],
        )
    }

    /// Axis atoms in d = 2: `psi(k) = |2 pi k_1|^alpha + |2 pi k_2|^alpha`.
    pub fn axis_2d(alpha: f64) -> Result<Self> {
        let w = (2.0 * PI).powf(alpha) / 2.0;
        let atoms = [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]
            .into_iter()
            .map(|d| Atom { dir: d.to_vec(), weight: w })
            .collect();
        Self::new(alpha, atoms)
    }

    /// Equi-angular approximation of the rotation-invariant measure in d = 2
    /// with `2m` atoms, normalised so that `psi(e_1) = (2 pi)^alpha`. The
    /// directions are `pi (i + 1/2) / m`, a midpoint rule in the angle.
    pub fn isotropic_2d(alpha: f64, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(param("m", "need at least 2 directions per half circle"));
        }
        let angles: Vec<f64> = (0..2 * m).map(|i| PI * (i as f64 + 0.5) / m as f64).collect();
        let s: f64 = angles.iter().map(|a| a.cos().abs().powf(alpha)).sum();
        let w = (2.0 * PI).powf(alpha) / s;
        let atoms = angles
            .into_iter()
            .map(|a| Atom { dir: vec![a.cos(), a.sin()], weight: w })
            .collect();
        Self::new(alpha, atoms)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn dim(&self) -> usize {
        self.atoms[0].dir.len()
    }

    pub fn psi(&self, k: &[f64]) -> f64 {
        self.atoms
            .iter()
            .map(|a| {
                let dot: f64 = a.dir.iter().zip(k).map(|(x, y)| x * y).sum();
                a.weight * dot.abs().powf(self.alpha)
            })
            .sum()
    }

    /// `c` in `psi(z) = c |z|^alpha` when d = 1.
    pub fn scale_1d(&self) -> f64 {
        self.psi(&[1.0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_atoms() {
        let s = StableSymbol::new(
            1.5,
            vec![
                Atom { dir: vec![1.0], weight: 0.5 },
                Atom { dir: vec![-1.0], weight: 0.5 },
            ],
        )
        .unwrap();
        assert!((s.psi(&[2.0]) - 2.0f64.powf(1.5)).abs() < 1e-15);
        assert_eq!(s.psi(&[0.0]), 0.0);
    }

    #[test]
    fn fractional_laplacian_normalisation() {
        let s = StableSymbol::fractional_laplacian(1.7).unwrap();
        for k in 1..5 {
            let want = (2.0 * PI * k as f64).powf(1.7);
            assert!((s.psi(&[k as f64]) - want).abs() < 1e-12 * want);
        }
    }

    #[test]
    fn validation() {
        assert!(StableSymbol::fractional_laplacian(2.5).is_err());
        assert!(StableSymbol::fractional_laplacian(0.0).is_err());
        let lopsided = StableSymbol::new(1.5, vec![Atom { dir: vec![1.0], weight: 1.0 }]);
        assert!(lopsided.is_err());
        let line = StableSymbol::new(
            1.5,
            vec![
                Atom { dir: vec![1.0, 0.0], weight: 1.0 },
                Atom { dir: vec![-1.0, 0.0], weight: 1.0 },
            ],
        );
        assert!(line.is_err());
        assert!(StableSymbol::isotropic_2d(1.5, 8).is_ok());
    }

    #[test]
    fn isotropic_is_nearly_radial() {
        let s = StableSymbol::isotropic_2d(1.8, 32).unwrap();
        let a = s.psi(&[1.0, 0.0]);
        let b = s.psi(&[0.6, 0.8]);
        assert!((a / b - 1.0).abs() < 1e-3);
    }
}

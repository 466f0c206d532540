use num_complex::Complex64;

use super::fft::fft_nd;
use super::field::Field;
use super::grid::FourierGrid;
use super::partition::DyadicPartition;
use crate::error::{Error, Result};

/// Oversampled physical values of every Littlewood-Paley block of one field.
///
/// Building this once and reusing it is what makes repeated paraproducts with
/// a fixed factor cheap.
#[derive(Clone, Debug)]
pub struct Blocks {
    grid: FourierGrid,
    real: bool,
    blocks: Vec<Vec<Complex64>>,
    nonzero: Vec<bool>,
}

impl Blocks {
    pub fn new(u: &Field, part: &DyadicPartition) -> Result<Self> {
        let grid = u.grid();
        if grid != part.grid() {
            return Err(Error::GridMismatch);
        }
        let mut blocks = Vec::with_capacity(part.jmax() as usize + 2);
        let mut nonzero = Vec::with_capacity(blocks.capacity());
        for j in part.block_indices() {
            let w = part.weights(j)?;
            let mut buf = vec![Complex64::default(); grid.padded_len()];
            let mut any = false;
            for (idx, &c) in u.coeffs().iter().enumerate() {
                if w[idx] != 0.0 && c != Complex64::default() {
                    buf[grid.padded_index(idx)] = c * w[idx];
                    any = true;
                }
            }
            if any {
                fft_nd(&mut buf, grid.d(), grid.padded_n(), true);
            }
            blocks.push(buf);
            nonzero.push(any);
        }
        Ok(Self {
            grid,
            real: u.is_real(),
            blocks,
            nonzero,
        })
    }

    pub fn grid(&self) -> FourierGrid {
        self.grid
    }

    /// `||Delta_j u||_inf` on the oversampled grid, indexed by `j + 1`.
    pub fn sups(&self) -> Vec<f64> {
        self.blocks
            .iter()
            .zip(&self.nonzero)
            .map(|(b, &nz)| {
                if nz {
                    b.iter().fold(0.0f64, |m, c| m.max(c.norm()))
                } else {
                    0.0
                }
            })
            .collect()
    }

    fn check(&self, other: &Blocks) -> Result<()> {
        if self.grid == other.grid && self.blocks.len() == other.blocks.len() {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    fn finish(&self, acc: Vec<Complex64>, other: &Blocks) -> Field {
        Field::from_padded(self.grid, acc, self.real && other.real)
    }

    /// `self < other = sum_j S_{j-1} self * Delta_j other`, `S_{j-1} = sum_{i <= j-2} Delta_i`.
    pub fn less(&self, other: &Blocks) -> Result<Field> {
        self.check(other)?;
        let len = self.grid.padded_len();
        let mut acc = vec![Complex64::default(); len];
        let mut low = vec![Complex64::default(); len];
        let mut low_nz = false;
        for b in 0..self.blocks.len() {
            // block index j = b - 1, so S_{j-1} gains Delta_{j-2} = blocks[b - 2]
            if b >= 2 && self.nonzero[b - 2] {
                for (l, x) in low.iter_mut().zip(&self.blocks[b - 2]) {
                    *l += x;
                }
                low_nz = true;
            }
            if low_nz && other.nonzero[b] {
                for ((a, l), y) in acc.iter_mut().zip(&low).zip(&other.blocks[b]) {
                    *a += l * y;
                }
            }
        }
        Ok(self.finish(acc, other))
    }

    /// `sum_{|i-j| <= 1} Delta_i self * Delta_j other`.
    pub fn resonant(&self, other: &Blocks) -> Result<Field> {
        self.check(other)?;
        let nb = self.blocks.len();
        let mut acc = vec![Complex64::default(); self.grid.padded_len()];
        for j in 0..nb {
            if !other.nonzero[j] {
                continue;
            }
            for i in j.saturating_sub(1)..(j + 2).min(nb) {
                if self.nonzero[i] {
                    for ((a, x), y) in acc.iter_mut().zip(&self.blocks[i]).zip(&other.blocks[j]) {
                        *a += x * y;
                    }
                }
            }
        }
        Ok(self.finish(acc, other))
    }

    pub fn greater(&self, other: &Blocks) -> Result<Field> {
        other.less(self)
    }
}

/// Bony decomposition of a product.
#[derive(Clone, Debug)]
pub struct Paraproducts {
    pub less: Field,
    pub resonant: Field,
    pub greater: Field,
}

impl Paraproducts {
    pub fn sum(&self) -> Field {
        self.less
            .add(&self.resonant)
            .and_then(|s| s.add(&self.greater))
            .expect("parts share a grid")
    }
}

pub fn paraproducts(u: &Field, v: &Field, part: &DyadicPartition) -> Result<Paraproducts> {
    u.check_grid(v)?;
    let bu = Blocks::new(u, part)?;
    let bv = Blocks::new(v, part)?;
    Ok(Paraproducts {
        less: bu.less(&bv)?,
        resonant: bu.resonant(&bv)?,
        greater: bu.greater(&bv)?,
    })
}

/// `u < v`.
pub fn para_less(u: &Field, v: &Field, part: &DyadicPartition) -> Result<Field> {
    u.check_grid(v)?;
    Blocks::new(u, part)?.less(&Blocks::new(v, part)?)
}

/// `u (.) v`.
pub fn resonant(u: &Field, v: &Field, part: &DyadicPartition) -> Result<Field> {
    u.check_grid(v)?;
    Blocks::new(u, part)?.resonant(&Blocks::new(v, part)?)
}

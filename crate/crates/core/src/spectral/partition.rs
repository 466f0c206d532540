use std::f64::consts::PI;

use serde::Serialize;

use super::field::Field;
use super::grid::FourierGrid;
use crate::error::{Error, Result};

/// Cumulative cutoff `S(r)`: 1 on `[0, a]`, 0 beyond `2a`, raised cosine between.
pub fn cumulative_ramp(r: f64, a: f64) -> f64 {
    if r <= a {
        1.0
    } else if r >= 2.0 * a {
        0.0
    } else {
        0.5 * (1.0 + (PI * (r - a) / a).cos())
    }
}

/// `S_j(r) = cumulative_ramp(r, 2^j)` for `j >= -1`.
pub fn cumulative(j: i32, r: f64) -> f64 {
    cumulative_ramp(r, 2f64.powi(j))
}

/// Radial profile of `p_j` for an unbounded block index (no top absorption).
pub fn profile(j: i32, r: f64) -> f64 {
    if j == -1 {
        cumulative(-1, r)
    } else {
        cumulative(j, r) - cumulative(j - 1, r)
    }
}

/// Dyadic partition of unity on a Fourier grid, blocks `j = -1 ..= jmax`.
///
/// `p_j` rises on `[2^(j-1), 2^j]` and falls on `[2^j, 2^(j+1)]`; the last block
/// takes everything above `2^(jmax-1)` so that the weights sum to one on the
/// whole grid.
#[derive(Clone, Debug, Serialize)]
pub struct DyadicPartition {
    #[serde(skip)]
    grid: FourierGrid,
    jmax: i32,
    weights: Vec<Vec<f64>>,
}

impl DyadicPartition {
    pub fn new(grid: FourierGrid) -> Result<Self> {
        let jmax = grid.n().trailing_zeros() as i32 - 1;
        if jmax < 1 {
            return Err(Error::Grid("grid cannot host blocks -1, 0, 1".into()));
        }
        let radii: Vec<f64> = (0..grid.len()).map(|i| grid.radius(i)).collect();
        let weights = (-1..=jmax)
            .map(|j| {
                radii
                    .iter()
                    .map(|&r| {
                        if j == jmax {
                            1.0 - cumulative(jmax - 1, r)
                        } else {
                            profile(j, r)
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            grid,
            jmax,
            weights,
        })
    }

    pub fn grid(&self) -> FourierGrid {
        self.grid
    }

    pub fn jmax(&self) -> i32 {
        self.jmax
    }

    pub fn block_indices(&self) -> std::ops::RangeInclusive<i32> {
        -1..=self.jmax
    }

    fn check(&self, j: i32) -> Result<usize> {
        if j < -1 || j > self.jmax {
            Err(Error::BlockIndex { j, jmax: self.jmax })
        } else {
            Ok((j + 1) as usize)
        }
    }

    pub fn weights(&self, j: i32) -> Result<&[f64]> {
        Ok(&self.weights[self.check(j)?])
    }

    pub fn weight(&self, j: i32, idx: usize) -> f64 {
        self.weights[(j + 1) as usize][idx]
    }

    /// Weight of block `j` at an arbitrary integer wavevector within the grid.
    pub fn weight_at(&self, j: i32, k: [i64; 2]) -> f64 {
        match self.grid.index_of(k) {
            Some(idx) if (-1..=self.jmax).contains(&j) => self.weight(j, idx),
            _ => 0.0,
        }
    }

    /// `Delta_j u`.
    pub fn block(&self, u: &Field, j: i32) -> Result<Field> {
        if u.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        let w = &self.weights[self.check(j)?];
        Ok(u.map_multiplier(|i| w[i].into()))
    }

    /// Resonant-pair symbol `sum_{|l1-l2|<=1} p_l1(k1) p_l2(k2)`.
    pub fn resonant_symbol(&self, k1: [i64; 2], k2: [i64; 2]) -> f64 {
        let (Some(a), Some(b)) = (self.grid.index_of(k1), self.grid.index_of(k2)) else {
            return 0.0;
        };
        let mut s = 0.0;
        for l1 in -1..=self.jmax {
            let w1 = self.weight(l1, a);
            if w1 == 0.0 {
                continue;
            }
            for l2 in (l1 - 1).max(-1)..=(l1 + 1).min(self.jmax) {
                s += w1 * self.weight(l2, b);
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_partition_exact() {
        for grid in [FourierGrid::one_d(256).unwrap(), FourierGrid::new(2, 32).unwrap()] {
            let p = DyadicPartition::new(grid).unwrap();
            for idx in 0..grid.len() {
                let s: f64 = p.block_indices().map(|j| p.weight(j, idx)).sum();
                assert_eq!(s, 1.0, "k = {:?}", grid.wavevector(idx));
            }
        }
    }

    #[test]
    fn jmax_and_low_blocks() {
        let grid = FourierGrid::one_d(256).unwrap();
        let p = DyadicPartition::new(grid).unwrap();
        assert_eq!(p.jmax(), 7);
        assert_eq!(p.weight_at(-1, [0, 0]), 1.0);
        assert_eq!(p.weight_at(0, [1, 0]), 1.0);
        assert_eq!(p.weight_at(0, [-1, 0]), 1.0);
        for j in 1..=7 {
            for k in -1..=1 {
                assert_eq!(p.weight_at(j, [k, 0]), 0.0);
            }
        }
        for j in 0..7 {
            assert_eq!(p.weight_at(j, [1 << j, 0]), 1.0);
        }
    }

    #[test]
    fn separated_blocks_disjoint() {
        let grid = FourierGrid::new(2, 64).unwrap();
        let p = DyadicPartition::new(grid).unwrap();
        for i in p.block_indices() {
            for j in p.block_indices() {
                if (i - j).abs() > 1 {
                    for idx in 0..grid.len() {
                        assert_eq!(p.weight(i, idx) * p.weight(j, idx), 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn tiny_grid_rejected() {
        let grid = FourierGrid::one_d(8).unwrap();
        assert_eq!(DyadicPartition::new(grid).unwrap().jmax(), 2);
        assert!(matches!(
            DyadicPartition::new(grid).unwrap().weights(3),
            Err(Error::BlockIndex { .. })
        ));
    }
}

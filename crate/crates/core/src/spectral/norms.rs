use super::field::Field;
use super::paraproduct::Blocks;
use super::partition::DyadicPartition;
use super::time_field::TimeField;
use crate::error::{Error, Result};

/// `sup_j 2^(j theta) ||Delta_j u||_inf`, sup norms on the 2x oversampled grid.
pub fn besov_norm(u: &Field, theta: f64, part: &DyadicPartition) -> Result<f64> {
    Ok(besov_from_blocks(&Blocks::new(u, part)?, theta))
}

pub fn besov_from_blocks(b: &Blocks, theta: f64) -> f64 {
    b.sups()
        .iter()
        .enumerate()
        .map(|(i, s)| 2f64.powf((i as f64 - 1.0) * theta) * s)
        .fold(0.0, f64::max)
}

/// Per-block sup norms `||Delta_j u||_inf`, index `j + 1`.
pub fn block_sups(u: &Field, part: &DyadicPartition) -> Result<Vec<f64>> {
    Ok(Blocks::new(u, part)?.sups())
}

/// Holder part and sup part of the `C^rho_T L^inf` norm on the time grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HolderParts {
    pub holder: f64,
    pub sup: f64,
}

impl HolderParts {
    pub fn total(&self) -> f64 {
        self.holder + self.sup
    }
}

pub fn holder_parts(u: &TimeField, rho: f64) -> Result<HolderParts> {
    if u.len() < 2 {
        return Err(Error::Precondition(
            "time Holder norm needs at least 2 time points".into(),
        ));
    }
    let samples: Vec<_> = u.values().iter().map(|f| f.samples(2)).collect();
    let sup = samples
        .iter()
        .flat_map(|s| s.iter())
        .fold(0.0f64, |m, c| m.max(c.norm()));
    let t = u.times();
    let mut holder = 0.0f64;
    for j in 1..t.len() {
        for i in 0..j {
            let d = samples[j]
                .iter()
                .zip(&samples[i])
                .fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
            if d > 0.0 {
                holder = holder.max(d / (t[j] - t[i]).powf(rho));
            }
        }
    }
    Ok(HolderParts { holder, sup })
}

/// Discrete `C^rho_T L^inf` norm: Holder quotient over grid pairs plus `sup_t ||u(t)||_inf`.
pub fn time_holder_seminorm(u: &TimeField, rho: f64) -> Result<f64> {
    Ok(holder_parts(u, rho)?.total())
}

/// `sup_t ||u(t)||_theta` over the time grid (the `C_T C^theta` norm).
pub fn sup_besov(u: &TimeField, theta: f64, part: &DyadicPartition) -> Result<f64> {
    let mut m = 0.0f64;
    for f in u.values() {
        m = m.max(besov_norm(f, theta, part)?);
    }
    Ok(m)
}

use serde::Serialize;

use crate::error::Result;
use crate::spectral::{holder_parts, sup_besov, DyadicPartition, TimeField};

/// Components of the paracontrolled norm
/// `||u||_{C C^theta} + ||u||_{C^{theta/alpha} L^inf} + ||u'||_{C C^{theta-1}} + ||u#||_{C C^{2 theta - 1}}`.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct DNormParts {
    pub u_space: f64,
    pub u_time: f64,
    pub uprime: f64,
    pub usharp: f64,
}

impl DNormParts {
    pub fn total(&self) -> f64 {
        self.u_space + self.u_time + self.uprime + self.usharp
    }
}

pub fn d_norm(
    u: &TimeField,
    uprime: &[TimeField],
    usharp: &TimeField,
    theta: f64,
    alpha: f64,
    part: &DyadicPartition,
) -> Result<DNormParts> {
    let mut up = 0.0f64;
    for c in uprime {
        up = up.max(sup_besov(c, theta - 1.0, part)?);
    }
    Ok(DNormParts {
        u_space: sup_besov(u, theta, part)?,
        u_time: holder_parts(u, theta / alpha)?.total(),
        uprime: up,
        usharp: sup_besov(usharp, 2.0 * theta - 1.0, part)?,
    })
}

/// `||w||_{C C^theta} + ||w||_{C^{theta/alpha} L^inf}`, the solution-map norm.
pub fn lipschitz_numerator(w: &TimeField, theta: f64, alpha: f64, part: &DyadicPartition) -> Result<f64> {
    Ok(sup_besov(w, theta, part)? + holder_parts(w, theta / alpha)?.total())
}

/// Discrete `C^{(theta-1)/alpha} L^inf` norm of `grad u` (max over components).
pub fn embedding_seminorm(u: &TimeField, theta: f64, alpha: f64) -> Result<f64> {
    let mut m = 0.0f64;
    for axis in 0..u.grid().d() {
        let g = u.map(|f| f.derivative(axis));
        m = m.max(holder_parts(&g, (theta - 1.0) / alpha)?.total());
    }
    Ok(m)
}

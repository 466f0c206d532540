//! Enhanced drifts `(V1, V2)`: smooth lifts, periodic white noise and its
//! rough lift, and the closed-form chaos variance of the lift's blocks.

mod chaos;
mod white_noise;

pub use chaos::{chaos_block_increment, chaos_kernel, chaos_variance_oracle, wick_expectation, ChaosKernel};
pub use white_noise::{lift_white_noise, sample_white_noise, WhiteNoiseSample};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::semigroup::Semigroup;
use crate::spectral::{sup_besov, Blocks, DyadicPartition, FourierGrid, TimeField};

/// Cached Besov norms of the two components.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DriftNorms {
    /// `sup_t ||V1(t)||_beta`, max over components.
    pub v1: f64,
    /// `sup_t ||V2(t)||_{2 beta + alpha - 1}`, max over components.
    pub v2: Option<f64>,
}

/// Drift `V1` (d components) with optional resonant data `V2` (d x d).
#[derive(Clone, Debug)]
pub struct EnhancedDrift {
    pub v1: Vec<TimeField>,
    pub v2: Option<Vec<Vec<TimeField>>>,
    pub beta: f64,
    pub alpha: f64,
    pub norms: DriftNorms,
    pub notes: Vec<String>,
}

/// Lower end of the admissible drift regularity, `(2 - 2 alpha) / 3`.
pub fn beta_floor(alpha: f64) -> f64 {
    (2.0 - 2.0 * alpha) / 3.0
}

/// Young threshold `(1 - alpha) / 2`: above it no `V2` is needed.
pub fn young_threshold(alpha: f64) -> f64 {
    (1.0 - alpha) / 2.0
}

impl EnhancedDrift {
    pub fn new(
        v1: Vec<TimeField>,
        v2: Option<Vec<Vec<TimeField>>>,
        beta: f64,
        sg: &Semigroup,
        part: &DyadicPartition,
    ) -> Result<Self> {
        let alpha = sg.alpha();
        let d = sg.grid().d();
        if v1.len() != d {
            return Err(Error::Precondition(format!("V1 needs {d} components")));
        }
        for c in &v1[1..] {
            v1[0].check_times(c)?;
        }
        if v1[0].grid() != sg.grid() {
            return Err(Error::GridMismatch);
        }
        if !(beta > beta_floor(alpha)) {
            return Err(Error::Param {
                field: "beta".into(),
                msg: format!("{beta} must exceed (2 - 2 alpha)/3 = {}", beta_floor(alpha)),
            });
        }
        if beta <= young_threshold(alpha) && v2.is_none() {
            return Err(Error::Precondition(format!(
                "beta = {beta} <= (1 - alpha)/2 needs the resonant component V2"
            )));
        }
        if let Some(v2) = &v2 {
            if v2.len() != d || v2.iter().any(|r| r.len() != d) {
                return Err(Error::Precondition(format!("V2 needs {d} x {d} components")));
            }
            for c in v2.iter().flatten() {
                v1[0].check_times(c)?;
            }
        }
        let mut n1 = 0.0f64;
        for c in &v1 {
            n1 = n1.max(sup_besov(c, beta, part)?);
        }
        let n2 = match &v2 {
            Some(v2) => {
                let mut m = 0.0f64;
                for c in v2.iter().flatten() {
                    m = m.max(sup_besov(c, 2.0 * beta + alpha - 1.0, part)?);
                }
                Some(m)
            }
            None => None,
        };
        Ok(Self {
            v1,
            v2,
            beta,
            alpha,
            norms: DriftNorms { v1: n1, v2: n2 },
            notes: Vec::new(),
        })
    }

    pub fn times(&self) -> &[f64] {
        self.v1[0].times()
    }

    pub fn grid(&self) -> FourierGrid {
        self.v1[0].grid()
    }

    pub fn d(&self) -> usize {
        self.v1.len()
    }

    pub fn horizon(&self) -> f64 {
        self.v1[0].t_end()
    }

    /// Drops `V2` (valid input to the Young solver only above the threshold).
    pub fn without_v2(&self) -> Self {
        let mut s = self.clone();
        s.v2 = None;
        s.norms.v2 = None;
        s
    }
}

/// `K(eta) = (eta, (J^T(d_j eta^i) (.) eta^j)_{i,j})` for a smooth vector field.
pub fn lift_smooth(eta: &[TimeField], beta: f64, sg: &Semigroup, part: &DyadicPartition) -> Result<EnhancedDrift> {
    let d = eta.len();
    let times = eta
        .first()
        .ok_or_else(|| Error::Precondition("empty drift".into()))?
        .times()
        .to_vec();
    let eta_blocks: Vec<Vec<Blocks>> = eta
        .iter()
        .map(|c| c.values().iter().map(|f| Blocks::new(f, part)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let mut v2 = Vec::with_capacity(d);
    for ei in eta {
        let mut row = Vec::with_capacity(d);
        for j in 0..d {
            let jd = sg.jt_all(&ei.map(|f| f.derivative(j)))?;
            let vals = jd
                .values()
                .iter()
                .zip(&eta_blocks[j])
                .map(|(a, b)| Blocks::new(a, part)?.resonant(b))
                .collect::<Result<Vec<_>>>()?;
            row.push(TimeField::new(times.clone(), vals, 2.0 * beta + sg.alpha() - 1.0)?);
        }
        v2.push(row);
    }
    EnhancedDrift::new(eta.to_vec(), Some(v2), beta, sg, part)
}

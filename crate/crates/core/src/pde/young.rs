use super::fixed_point::{solve_by_splitting, Diagnostics, MildMap, SolverOptions};
use super::{resolve_theta, young_window, BackwardData};
use crate::enhanced_drift::{young_threshold, EnhancedDrift};
use crate::error::{Error, Result};
use crate::semigroup::Semigroup;
use crate::spectral::{sup_besov, DyadicPartition, Field, TimeField};

#[derive(Clone, Debug)]
pub struct YoungSolution {
    pub u: TimeField,
    pub theta: f64,
    pub diagnostics: Diagnostics,
}

/// `sum_j d_j u V^j` as a plain (alias-free) spectral product.
pub fn drift_product(u: &Field, v: &[&Field]) -> Result<Field> {
    let mut acc = Field::zeros(u.grid());
    for (j, vj) in v.iter().enumerate() {
        acc = acc.add(&u.derivative(j).multiply(vj)?)?;
    }
    Ok(acc)
}

/// `P_{t_b - t} u_b + J^{t_b}(g)(t)` on nodes `a ..= b`.
pub(crate) fn mild_step(sg: &Semigroup, times: &[f64], a: usize, b: usize, terminal: &Field, g: Vec<Field>) -> Result<TimeField> {
    let ts = times[a..=b].to_vec();
    let jg = sg.jt_all(&TimeField::new(ts.clone(), g, 0.0)?)?;
    let vals = ts
        .iter()
        .zip(jg.values())
        .map(|(&t, j)| sg.apply(times[b] - t, terminal)?.add(j))
        .collect::<Result<Vec<_>>>()?;
    TimeField::new(ts, vals, 0.0)
}

struct YoungMap<'a> {
    sg: &'a Semigroup,
    part: &'a DyadicPartition,
    drift: &'a EnhancedDrift,
    f: TimeField,
    theta: f64,
}

impl MildMap for YoungMap<'_> {
    fn times(&self) -> &[f64] {
        self.drift.times()
    }

    fn initial(&self, a: usize, b: usize, terminal: &Field) -> Result<TimeField> {
        let g = (a..=b).map(|k| self.f.value(k).scale(-1.0)).collect();
        mild_step(self.sg, self.times(), a, b, terminal, g)
    }

    fn apply(&self, a: usize, b: usize, u: &TimeField, terminal: &Field) -> Result<TimeField> {
        let g = (a..=b)
            .map(|k| {
                let v: Vec<&Field> = self.drift.v1.iter().map(|c| c.value(k)).collect();
                drift_product(u.value(k - a), &v)?.sub(self.f.value(k))
            })
            .collect::<Result<Vec<_>>>()?;
        mild_step(self.sg, self.times(), a, b, terminal, g)
    }

    fn residual(&self, _a: usize, diff: &TimeField, new: &TimeField) -> Result<f64> {
        let d = sup_besov(diff, self.theta, self.part)?;
        if d == 0.0 {
            return Ok(0.0);
        }
        Ok(d / sup_besov(new, self.theta, self.part)?.max(1e-300))
    }
}

/// Fixed point of `u = P_{T-t} u_T + J^T(grad u . V - f)` for drifts above the
/// Young threshold, by Picard iteration with interval splitting.
pub fn solve_young(
    drift: &EnhancedDrift,
    data: &BackwardData,
    sg: &Semigroup,
    part: &DyadicPartition,
    opts: &SolverOptions,
) -> Result<YoungSolution> {
    let alpha = sg.alpha();
    if drift.beta <= young_threshold(alpha) {
        return Err(Error::Precondition(format!(
            "Young regime needs beta > (1 - alpha)/2 = {}, got {}",
            young_threshold(alpha),
            drift.beta
        )));
    }
    let theta = resolve_theta(data, young_window(alpha, drift.beta))?;
    let map = YoungMap {
        sg,
        part,
        drift,
        f: data.forcing_field(drift)?,
        theta,
    };
    let (u, mut diagnostics) = solve_by_splitting(&map, &data.terminal, opts)?;
    diagnostics.theta = theta;
    Ok(YoungSolution {
        u: u.with_theta(theta),
        theta,
        diagnostics,
    })
}

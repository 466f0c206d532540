use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::euler::{check_table, drive_path, SimulationConfig};
use super::modes::ModeTable;
use crate::error::{param, Result};
use crate::levy::StableIncrements;
use crate::spectral::TimeField;
use crate::stats::batch_means;

pub const MARTINGALE_BATCHES: usize = 50;
pub const PASS_SE: f64 = 3.0;

/// Bounded cylinder functionals of the path up to time `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Functional {
    One,
    TanhXr,
    CosXHalfR,
}

impl Functional {
    pub const ALL: [Functional; 3] = [Functional::One, Functional::TanhXr, Functional::CosXHalfR];

    pub fn name(&self) -> &'static str {
        match self {
            Functional::One => "1",
            Functional::TanhXr => "tanh(X_r)",
            Functional::CosXHalfR => "cos(2 pi X_{r/2})",
        }
    }

    fn eval(&self, x_half: f64, x_r: f64) -> f64 {
        match self {
            Functional::One => 1.0,
            Functional::TanhXr => x_r.tanh(),
            Functional::CosXHalfR => (std::f64::consts::TAU * x_half).cos(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MartingaleRow {
    pub r: f64,
    pub t: f64,
    pub functional: String,
    pub estimate: f64,
    pub se: f64,
    pub z: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MartingaleReport {
    pub paths: usize,
    pub steps: usize,
    pub batches: usize,
    pub threshold_se: f64,
    pub rows: Vec<MartingaleRow>,
    pub max_z: f64,
    pub pass: bool,
}

/// Estimates `E[(M_t - M_r) F]` for
/// `M_t = u(t, X_t) - u(0, x) - int_0^t f(s, X_s) ds`, the integral by the
/// trapezoid rule on the Euler grid. Every row passes when `|estimate| <= 3 SE`.
pub fn martingale_test(
    cfg: &SimulationConfig,
    noise: &StableIncrements,
    drift: &ModeTable,
    u: &TimeField,
    f: &ModeTable,
    pairs: &[(f64, f64)],
    functionals: &[Functional],
) -> Result<MartingaleReport> {
    cfg.validate()?;
    check_table(cfg, drift)?;
    check_table(cfg, f)?;
    if pairs.is_empty() || functionals.is_empty() {
        return Err(param("pairs", "need at least one pair and one functional"));
    }
    // every (r/2, r, t) as Euler steps; u is evaluated at r and t only
    let mut idx = Vec::new();
    for &(r, t) in pairs {
        if !(0.0 <= r && r < t && t <= cfg.horizon) {
            return Err(param("pairs", format!("need 0 <= r < t <= T, got ({r}, {t})")));
        }
        idx.push((cfg.step_of(0.5 * r)?, cfg.step_of(r)?, cfg.step_of(t)?));
    }
    let mut ev_times: Vec<f64> = pairs.iter().flat_map(|&(r, t)| [r, t]).collect();
    ev_times.sort_by(f64::total_cmp);
    ev_times.dedup();
    let nu = u.grid().n() / 2 - 1;
    let ut = ModeTable::sampled(u, nu, &ev_times)?;
    let row_of = |t: f64| ev_times.iter().position(|&s| s == t).unwrap();
    let h = cfg.h();
    let samples: Vec<Vec<f64>> = (0..cfg.paths)
        .into_par_iter()
        .map(|p| {
            let mut x = vec![0.0; cfg.steps + 1];
            let mut integral = vec![0.0; cfg.steps + 1];
            let mut prev = 0.0;
            drive_path(cfg, noise, drift, p, |k, xk, _| {
                let fk = f.eval(k, xk);
                x[k] = xk;
                if k > 0 {
                    integral[k] = integral[k - 1] + 0.5 * h * (prev + fk);
                }
                prev = fk;
            });
            let mut out = Vec::with_capacity(pairs.len() * functionals.len());
            for (&(r, t), &(kh, kr, kt)) in pairs.iter().zip(&idx) {
                let dm = ut.eval(row_of(t), x[kt]) - ut.eval(row_of(r), x[kr]) - (integral[kt] - integral[kr]);
                for fnl in functionals {
                    out.push(dm * fnl.eval(x[kh], x[kr]));
                }
            }
            out
        })
        .collect();
    let mut rows = Vec::new();
    let mut col = 0;
    for &(r, t) in pairs {
        for fnl in functionals {
            let s: Vec<f64> = samples.iter().map(|v| v[col]).collect();
            col += 1;
            let est = batch_means(&s, MARTINGALE_BATCHES);
            let z = est.z(0.0);
            rows.push(MartingaleRow {
                r,
                t,
                functional: fnl.name().to_string(),
                estimate: est.mean,
                se: est.se,
                z,
                pass: z <= PASS_SE,
            });
        }
    }
    let max_z = rows.iter().map(|r| r.z).fold(0.0f64, f64::max);
    Ok(MartingaleReport {
        paths: cfg.paths,
        steps: cfg.steps,
        batches: MARTINGALE_BATCHES,
        threshold_se: PASS_SE,
        pass: rows.iter().all(|r| r.pass),
        rows,
        max_z,
    })
}

use rayon::prelude::*;
use serde::Serialize;

use super::euler::{check_table, drive_path, SimulationConfig};
use super::modes::ModeTable;
use crate::error::{param, Result};
use crate::levy::StableIncrements;
use crate::stats::{batch_means, loglog_slope};

/// Lags must span at least this many decades.
pub const MIN_DECADES: f64 = 1.5;
/// Allowed shortfall of the fitted slope below `theta rho / alpha`.
pub const SLOPE_SLACK: f64 = 0.15;

#[derive(Clone, Debug, Serialize)]
pub struct MomentRow {
    pub lag: f64,
    pub moment: f64,
    pub se: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentScaling {
    pub rho: u32,
    pub theta: f64,
    pub alpha: f64,
    pub rows: Vec<MomentRow>,
    pub slope: f64,
    /// `theta rho / alpha - 0.15`.
    pub threshold: f64,
    pub pass: bool,
}

/// `E|int_r^t V(s, X_s) ds|^rho` against `t - r`, the integral read off the
/// Euler drift sum over non-overlapping windows of each lag, and the log-log
/// slope of the moments.
pub fn drift_moment_scaling(
    cfg: &SimulationConfig,
    noise: &StableIncrements,
    drift: &ModeTable,
    rho: u32,
    lags: &[usize],
    theta: f64,
) -> Result<MomentScaling> {
    cfg.validate()?;
    check_table(cfg, drift)?;
    if rho != 2 && rho != 4 {
        return Err(param("rho", format!("{rho} not in {{2, 4}}")));
    }
    let lo = lags.iter().copied().min().unwrap_or(0);
    let hi = lags.iter().copied().max().unwrap_or(0);
    if lo == 0 || hi > cfg.steps || ((hi as f64) / (lo as f64)).log10() < MIN_DECADES - 1e-2 {
        return Err(param(
            "lags",
            format!("need nonzero lags within the grid spanning {MIN_DECADES} decades, got {lo}..{hi}"),
        ));
    }
    let h = cfg.h();
    let per_path: Vec<Vec<f64>> = (0..cfg.paths)
        .into_par_iter()
        .map(|p| {
            let mut d = vec![0.0; cfg.steps + 1];
            drive_path(cfg, noise, drift, p, |k, _, v| {
                if k < cfg.steps {
                    d[k + 1] = d[k] + v * h;
                }
            });
            lags.iter()
                .map(|&l| {
                    let w = cfg.steps / l;
                    (0..w).map(|i| (d[(i + 1) * l] - d[i * l]).abs().powi(rho as i32)).sum::<f64>() / w as f64
                })
                .collect()
        })
        .collect();
    let rows: Vec<MomentRow> = lags
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            let s: Vec<f64> = per_path.iter().map(|v| v[i]).collect();
            let e = batch_means(&s, super::martingale::MARTINGALE_BATCHES);
            MomentRow {
                lag: l as f64 * h,
                moment: e.mean,
                se: e.se,
            }
        })
        .collect();
    let x: Vec<f64> = rows.iter().map(|r| r.lag).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.moment).collect();
    let alpha = noise.alpha();
    let threshold = theta * rho as f64 / alpha - SLOPE_SLACK;
    let slope = if y.iter().all(|&m| m > 0.0) { loglog_slope(&x, &y) } else { f64::NAN };
    Ok(MomentScaling {
        rho,
        theta,
        alpha,
        rows,
        slope,
        threshold,
        pass: slope >= threshold,
    })
}

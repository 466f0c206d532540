use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectral::{Field, TimeField};

#[derive(Clone, Debug, Serialize)]
pub struct SolverOptions {
    /// Relative residual at which the Picard iteration stops.
    pub tol: f64,
    pub max_splits: usize,
    pub max_iter: usize,
    /// Iterations used to estimate the contraction factor.
    pub probe_iters: usize,
    /// An estimated factor at or above this counts as non-contraction.
    pub contraction_threshold: f64,
    pub relaxations: Vec<f64>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_splits: 12,
            max_iter: 200,
            probe_iters: 8,
            contraction_threshold: 0.9,
            relaxations: vec![1.0, 0.5],
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IntervalReport {
    pub start: f64,
    pub end: f64,
    pub iterations: usize,
    pub relaxation: f64,
    pub contraction_factor: f64,
    pub residual: f64,
    /// `C^{2 theta - 1}` norm of the remainder handed to the next interval.
    pub handoff_sharp_norm: Option<f64>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Diagnostics {
    pub theta: f64,
    pub splits: usize,
    /// Final interval length.
    pub tbar: f64,
    pub intervals: Vec<IntervalReport>,
    /// Failed attempts: (interval length, relaxation, realized factor).
    pub rejected: Vec<(f64, f64, f64)>,
    pub kappa1: Option<f64>,
    pub kappa2: Option<f64>,
    pub tbar_kappa1: Option<f64>,
    pub tbar_kappa2: Option<f64>,
    pub max_residual: f64,
}

/// A mild-form map on node intervals `[a, b]` with fixed terminal value at `b`.
pub(crate) trait MildMap {
    fn times(&self) -> &[f64];
    fn initial(&self, a: usize, b: usize, terminal: &Field) -> Result<TimeField>;
    fn apply(&self, a: usize, b: usize, u: &TimeField, terminal: &Field) -> Result<TimeField>;
    /// Relative size of `diff` measured against `new`.
    fn residual(&self, a: usize, diff: &TimeField, new: &TimeField) -> Result<f64>;
    /// Norm of the remainder handed to the next interval, if meaningful.
    fn handoff(&self, _a: usize, _value: &Field) -> Result<Option<f64>> {
        Ok(None)
    }
}

enum Attempt {
    Converged(TimeField, IntervalReport),
    Rejected(f64),
}

fn picard(map: &impl MildMap, a: usize, b: usize, terminal: &Field, omega: f64, opts: &SolverOptions) -> Result<Attempt> {
    let t = map.times();
    let mut u = map.initial(a, b, terminal)?;
    let mut res: Vec<f64> = Vec::new();
    for it in 1..=opts.max_iter {
        let phi = map.apply(a, b, &u, terminal)?;
        let new = if omega == 1.0 { phi } else { u.scale(1.0 - omega).axpy(omega, &phi)? };
        let r = map.residual(a, &new.sub(&u)?, &new)?;
        u = new;
        if !r.is_finite() {
            return Ok(Attempt::Rejected(f64::INFINITY));
        }
        res.push(r);
        let factor = contraction_estimate(&res);
        if r <= opts.tol {
            return Ok(Attempt::Converged(
                u,
                IntervalReport {
                    start: t[a],
                    end: t[b],
                    iterations: it,
                    relaxation: omega,
                    contraction_factor: factor,
                    residual: r,
                    handoff_sharp_norm: None,
                },
            ));
        }
        if res.len() >= opts.probe_iters && factor >= opts.contraction_threshold {
            return Ok(Attempt::Rejected(factor));
        }
    }
    Ok(Attempt::Rejected(contraction_estimate(&res)))
}

/// Geometric mean of successive residual ratios over the last probe window.
fn contraction_estimate(res: &[f64]) -> f64 {
    let pos: Vec<f64> = res.iter().copied().filter(|r| *r > 0.0).collect();
    if pos.len() < 2 {
        return 0.0;
    }
    let w = &pos[pos.len().saturating_sub(8)..];
    (w[w.len() - 1] / w[0]).powf(1.0 / (w.len() - 1) as f64)
}

/// Picard iteration on consecutive intervals `[T - k Tbar, T - (k-1) Tbar]`,
/// halving `Tbar` whenever the iteration fails to contract.
pub(crate) fn solve_by_splitting(
    map: &impl MildMap,
    terminal: &Field,
    opts: &SolverOptions,
) -> Result<(TimeField, Diagnostics)> {
    let t = map.times();
    let m = t.len() - 1;
    let mut values: Vec<Option<Field>> = vec![None; m + 1];
    values[m] = Some(terminal.clone());
    let mut diag = Diagnostics::default();
    let mut len = m;
    let mut b = m;
    let mut term = terminal.clone();
    let mut factors = Vec::new();
    while b > 0 {
        let a = b.saturating_sub(len);
        let mut done = None;
        for &omega in &opts.relaxations {
            match picard(map, a, b, &term, omega, opts)? {
                Attempt::Converged(u, rep) => {
                    done = Some((u, rep));
                    break;
                }
                Attempt::Rejected(f) => {
                    factors.push(f);
                    diag.rejected.push((t[b] - t[a], omega, f));
                }
            }
        }
        match done {
            Some((u, mut rep)) => {
                for (k, v) in u.values().iter().enumerate() {
                    values[a + k] = Some(v.clone());
                }
                term = u.value(0).clone();
                if a > 0 {
                    rep.handoff_sharp_norm = map.handoff(a, &term)?;
                }
                diag.max_residual = diag.max_residual.max(rep.residual);
                diag.intervals.push(rep);
                b = a;
            }
            None => {
                if diag.splits >= opts.max_splits || len == 1 {
                    return Err(Error::NonContraction {
                        splits: diag.splits,
                        factors,
                    });
                }
                len = len.div_ceil(2);
                diag.splits += 1;
            }
        }
    }
    diag.tbar = (t[m] - t[0]) * len as f64 / m as f64;
    let vals = values.into_iter().map(|v| v.expect("every node solved")).collect();
    Ok((TimeField::new(t.to_vec(), vals, 0.0)?, diag))
}

use serde::Serialize;

use super::euler::{euler_maruyama, SimulationConfig};
use super::modes::ModeTable;
use crate::error::{param, Result};
use crate::levy::StableIncrements;
use crate::stats::{inversions, ks_two_sample};

#[derive(Clone, Debug, Serialize)]
pub struct KsRow {
    pub n: usize,
    pub n_next: usize,
    pub t: f64,
    pub distance: f64,
    pub p_value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MarginalTable {
    pub rows: Vec<KsRow>,
    /// `(t, inversions of the distance sequence in n)`.
    pub inversions: Vec<(f64, usize)>,
    /// At most one inversion at every `t`.
    pub decreasing: bool,
}

/// KS distances between the time-`t` marginals of consecutive mollification
/// levels, all driven by the same noise.
pub fn marginal_convergence(
    cfg: &SimulationConfig,
    noise: &StableIncrements,
    levels: &[(usize, ModeTable)],
    times: &[f64],
) -> Result<MarginalTable> {
    if levels.len() < 2 {
        return Err(param("levels", "need at least two mollification levels"));
    }
    let steps = times.iter().map(|&t| cfg.step_of(t)).collect::<Result<Vec<_>>>()?;
    let ens = levels
        .iter()
        .map(|(_, d)| euler_maruyama(cfg, noise, d, &steps))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    let mut inv = Vec::new();
    for (i, &t) in times.iter().enumerate() {
        let mut ds = Vec::new();
        for w in 0..levels.len() - 1 {
            let ks = ks_two_sample(&ens[w].column(i), &ens[w + 1].column(i));
            ds.push(ks.d);
            rows.push(KsRow {
                n: levels[w].0,
                n_next: levels[w + 1].0,
                t,
                distance: ks.d,
                p_value: ks.p,
            });
        }
        inv.push((t, inversions(&ds)));
    }
    Ok(MarginalTable {
        decreasing: inv.iter().all(|&(_, c)| c <= 1),
        rows,
        inversions: inv,
    })
}

//! Euler simulation of `dX = V(t, X) dt + dL` on the torus with band-limited
//! drifts, Monte Carlo checks of the martingale problem, and the Brox pipeline.

mod brox;
mod euler;
mod marginal;
mod martingale;
mod moments;
mod modes;

pub use brox::{brox_demo, check_brox_alpha, BroxBundle, BroxLevel, BroxReport, BroxSolve};
pub use euler::{drive_path, euler_maruyama, Ensemble, SimulationConfig};
pub use marginal::{marginal_convergence, KsRow, MarginalTable};
pub use martingale::{martingale_test, Functional, MartingaleReport, MartingaleRow, MARTINGALE_BATCHES, PASS_SE};
pub use moments::{drift_moment_scaling, MomentRow, MomentScaling, MIN_DECADES, SLOPE_SLACK};
pub use modes::ModeTable;

use crate::error::{param, Result};
use crate::spectral::TimeField;

/// Sharp Fourier truncation `|k| <= n` of every time slice.
pub fn mollify_drift(v: &TimeField, n: usize) -> Result<TimeField> {
    if n + 1 > v.grid().n() / 2 {
        return Err(param("n", format!("{n} exceeds N/2 - 1 = {}", v.grid().n() / 2 - 1)));
    }
    Ok(v.map(|f| f.truncate(n)))
}

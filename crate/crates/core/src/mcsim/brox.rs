use serde::{Deserialize, Serialize};

use super::euler::SimulationConfig;
use super::marginal::{marginal_convergence, MarginalTable};
use super::martingale::{martingale_test, Functional, MartingaleReport};
use super::modes::ModeTable;
use crate::enhanced_drift::{lift_white_noise, sample_white_noise};
use crate::error::{param, Result};
use crate::levy::StableIncrements;
use crate::pde::{solve_rough, BackwardData, Diagnostics, Forcing, SolverOptions};
use crate::report::Check;
use crate::semigroup::{Semigroup, StableSymbol};
use crate::spectral::{uniform_times, DyadicPartition, Field, FourierGrid};

/// Resolutions of one Brox run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BroxBundle {
    /// Spatial modes per axis of the solver grid.
    pub grid_n: usize,
    /// Time steps of the solver grid on `[0, 1]`.
    pub time_steps: usize,
    /// White-noise truncation used for the lift and the solve.
    pub lift_n: usize,
    /// Mollification levels of the simulated drift, increasing.
    pub levels: Vec<usize>,
    pub paths: usize,
    pub euler_steps: usize,
    pub x0: f64,
    pub eps: f64,
    pub zero_mean: bool,
    pub pairs: Vec<(f64, f64)>,
}

impl Default for BroxBundle {
    fn default() -> Self {
        Self {
            grid_n: 128,
            time_steps: 128,
            lift_n: 32,
            levels: vec![8, 16, 32],
            paths: 20_000,
            euler_steps: 2048,
            x0: 0.0,
            eps: 0.05,
            zero_mean: false,
            pairs: vec![(0.25, 0.5), (0.5, 1.0), (0.25, 1.0)],
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BroxSolve {
    pub beta: f64,
    pub theta: f64,
    pub v1_norm: f64,
    pub v2_norm: Option<f64>,
    pub notes: Vec<String>,
    pub reconstruction_residual: f64,
    pub global_residual: f64,
    pub diagnostics: Diagnostics,
}

#[derive(Clone, Debug, Serialize)]
pub struct BroxLevel {
    pub n: usize,
    pub martingale: MartingaleReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct BroxReport {
    pub seed: u64,
    pub alpha: f64,
    pub bundle: BroxBundle,
    pub solve: BroxSolve,
    pub levels: Vec<BroxLevel>,
    pub marginals: MarginalTable,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// Admissible stability indices `(7/4, 2]`.
pub fn check_brox_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 1.75 && alpha <= 2.0) {
        return Err(param(
            "alpha",
            format!("{alpha} outside (7/4, 2], where the quenched martingale problem is well posed"),
        ));
    }
    Ok(())
}

/// Quenched pipeline: sample `xi`, lift it, solve `G u = xi` with `u_T = 0`
/// in the paracontrolled regime, then test the martingale property of that
/// `u` along Euler paths driven by the mollified `xi^n`, and compare marginals
/// across `n`.
pub fn brox_demo(seed: u64, alpha: f64, b: &BroxBundle) -> Result<BroxReport> {
    check_brox_alpha(alpha)?;
    if b.levels.is_empty() || b.levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(param("bundle.levels", "must be nonempty and increasing"));
    }
    if *b.levels.last().unwrap() > b.lift_n {
        return Err(param("bundle.levels", "levels cannot exceed lift_n"));
    }
    let grid = FourierGrid::one_d(b.grid_n)?;
    let sg = Semigroup::new(StableSymbol::fractional_laplacian(alpha)?, grid)?;
    let part = DyadicPartition::new(grid)?;
    let times = uniform_times(0.0, 1.0, b.time_steps);
    let xi = sample_white_noise(seed, b.lift_n, b.zero_mean);
    let drift = lift_white_noise(&xi, &sg, &part, &times, b.eps)?;
    let data = BackwardData {
        f: Forcing::DriftComponent(0),
        terminal: Field::zeros(grid),
        theta: None,
        terminal_regularity: f64::INFINITY,
    };
    let sol = solve_rough(&drift, &data, &sg, &part, &SolverOptions::default())?;
    let solve = BroxSolve {
        beta: drift.beta,
        theta: sol.theta,
        v1_norm: drift.norms.v1,
        v2_norm: drift.norms.v2,
        notes: drift.notes.clone(),
        reconstruction_residual: sol.reconstruction_residual,
        global_residual: sol.global_residual,
        diagnostics: sol.diagnostics.clone(),
    };

    let cfg = SimulationConfig {
        x0: b.x0,
        paths: b.paths,
        steps: b.euler_steps,
        horizon: 1.0,
        seed,
    };
    let noise = StableIncrements::from_symbol(sg.symbol())?;
    let f = ModeTable::constant(&xi.to_field(grid)?, b.lift_n)?;
    let tables = b
        .levels
        .iter()
        .map(|&n| Ok((n, ModeTable::constant(&xi.truncate(n).to_field(grid)?, n)?)))
        .collect::<Result<Vec<_>>>()?;
    let levels = tables
        .iter()
        .map(|(n, d)| {
            Ok(BroxLevel {
                n: *n,
                martingale: martingale_test(&cfg, &noise, d, &sol.u, &f, &b.pairs, &Functional::ALL)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let marginals = if tables.len() >= 2 {
        marginal_convergence(&cfg, &noise, &tables, &[0.25, 0.5, 1.0])?
    } else {
        MarginalTable {
            rows: Vec::new(),
            inversions: Vec::new(),
            decreasing: true,
        }
    };

    let finest = &levels.last().unwrap().martingale;
    let checks = vec![
        Check::at_most("reconstruction_residual", sol.reconstruction_residual, 1e-8),
        Check::at_most("fixed_point_residual", sol.global_residual, 1e-6),
        Check::at_most("martingale_max_z_finest_level", finest.max_z, finest.threshold_se),
    ];
    let pass = checks.iter().all(|c| c.pass);
    Ok(BroxReport {
        seed,
        alpha,
        bundle: b.clone(),
        solve,
        levels,
        marginals,
        checks,
        pass,
    })
}

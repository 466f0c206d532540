//! Quantitative harnesses behind the CLI commands and the acceptance suite.
//!
//! Every harness takes a serde config (all fields defaulted) plus a seed and
//! returns a report carrying its checks, each with realized value and
//! tolerance, and plot-ready tables.

mod drift;
mod levy;
mod pde;
mod sim;
mod spectral;

pub use self::drift::{
    cauchy_decay, chaos_oracle, lift_probe, CauchyConfig, CauchyReport, ChaosConfig, ChaosReport, LiftConfig,
    LiftReport,
};
pub use self::levy::{campbell_check, stable_check, CampbellConfig, CampbellReport, StableConfig, StableReport};
pub use self::pde::{
    lipschitz_probe, pde_consistency, solve_rough_probe, solve_young_probe, LipschitzConfig, LipschitzReport,
    ForcingKind, PdeConfig, PdeReport, RoughConfig, RoughReport, RoughSource, SmoothDrift, TrigTerm, YoungConfig,
    YoungReport,
};
pub use self::sim::{
    brox, martingale_suite, moment_suite, simulate, BroxConfig, DriftSpec, MartingaleConfig, MartingaleSuite, MomentConfig, MomentSuite,
    SimulateConfig, SimulateReport,
};
pub use self::spectral::{
    bony_check, commutator_probe, paraproduct_probe, schauder_probe, BonyConfig, BonyReport, CommutatorConfig,
    CommutatorReport, ParaproductConfig, ParaproductReport, SchauderConfig, SchauderReport,
};

use serde::Serialize;

use crate::report::{Check, Table};

/// A finished harness run.
pub trait Outcome: Serialize {
    fn checks(&self) -> Vec<Check>;

    fn tables(&self) -> Vec<Table> {
        Vec::new()
    }

    fn pass(&self) -> bool {
        self.checks().iter().all(|c| c.pass)
    }
}

/// Largest member of a refinement family relative to its first (coarsest)
/// member. Bounded means at most [`GROWTH_LIMIT`].
pub fn growth(family: &[f64]) -> f64 {
    match family.first() {
        Some(&c) if c > 0.0 && family.iter().all(|x| x.is_finite()) => {
            family.iter().fold(0.0f64, |m, &x| m.max(x)) / c
        }
        _ => f64::INFINITY,
    }
}

pub const GROWTH_LIMIT: f64 = 2.0;

/// `t_hi 2^(-alpha k / per)` for `k < periods * per`: an integer number of
/// dyadic periods of a lacunary test function under the `alpha`-scaling.
pub(crate) fn log_periodic_times(t_hi: f64, alpha: f64, periods: usize, per: usize) -> Vec<f64> {
    (0..periods * per)
        .map(|k| t_hi * 2f64.powf(-alpha * k as f64 / per as f64))
        .collect()
}

pub(crate) fn decades(x: &[f64]) -> f64 {
    let (lo, hi) = x
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
    (hi / lo).log10()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn growth_rule() {
        assert_eq!(growth(&[2.0, 1.0, 3.0]), 1.5);
        assert!(growth(&[]).is_infinite());
        assert!(growth(&[0.0, 1.0]).is_infinite());
        assert!(growth(&[1.0, f64::NAN]).is_infinite());
    }

    #[test]
    fn period_grid_spans_the_requested_range() {
        let t = log_periodic_times(1.0, 2.0, 3, 4);
        assert_eq!(t.len(), 12);
        assert!((decades(&t) - (2f64.powf(2.0 * 11.0 / 4.0)).log10()).abs() < 1e-12);
    }
}

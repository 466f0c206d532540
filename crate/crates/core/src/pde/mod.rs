//! Mild solutions of the backward Kolmogorov equation
//! `d_t u = psi(D) u - V.grad u + f`, `u(T) = u_T`, in the Young regime, the
//! paracontrolled regime, and by classical time stepping for smooth data.

mod classical;
mod fixed_point;
mod norms;
mod rough;
mod young;

pub use classical::classical_solve;
pub use fixed_point::{Diagnostics, IntervalReport, SolverOptions};
pub use norms::{d_norm, embedding_seminorm, lipschitz_numerator, DNormParts};
pub use rough::{rough_product, solve_rough, ParacontrolledSolution, RoughContext};
pub use young::{drift_product, solve_young, YoungSolution};

use serde::Serialize;

use crate::enhanced_drift::EnhancedDrift;
use crate::error::{Error, Result};
use crate::spectral::{Field, TimeField};

/// Right-hand side of `G^V u = f`.
#[derive(Clone, Debug)]
pub enum Forcing {
    Field(TimeField),
    /// `f = V1^j`, the case whose paracontrolled derivative is `grad u - e_j`.
    DriftComponent(usize),
}

/// Data of one backward problem on the drift's time grid.
#[derive(Clone, Debug)]
pub struct BackwardData {
    pub f: Forcing,
    pub terminal: Field,
    /// Target regularity; the window midpoint when absent.
    pub theta: Option<f64>,
    /// Declared regularity of `u_T`, checked against `2 theta - 1` in the rough regime.
    pub terminal_regularity: f64,
}

impl BackwardData {
    /// Smooth forcing and a smooth (`C^3`-tagged) terminal condition.
    pub fn smooth(f: TimeField, terminal: Field) -> Self {
        Self {
            f: Forcing::Field(f),
            terminal,
            theta: None,
            terminal_regularity: 3.0,
        }
    }

    pub(crate) fn forcing_field(&self, drift: &EnhancedDrift) -> Result<TimeField> {
        match &self.f {
            Forcing::Field(f) => {
                if f.times() != drift.times() {
                    return Err(Error::InconsistentGrids("forcing and drift time grids differ".into()));
                }
                Ok(f.clone())
            }
            Forcing::DriftComponent(j) => drift
                .v1
                .get(*j)
                .cloned()
                .ok_or_else(|| Error::Precondition(format!("drift has no component {j}"))),
        }
    }

    pub(crate) fn shift(&self) -> Option<usize> {
        match self.f {
            Forcing::DriftComponent(j) => Some(j),
            Forcing::Field(_) => None,
        }
    }
}

/// Admissible regularity window `(lo, hi)` for the solution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

impl Window {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.lo < theta && theta < self.hi
    }
}

/// `theta in (1 - beta, beta + alpha)`.
pub fn young_window(alpha: f64, beta: f64) -> Window {
    Window {
        lo: 1.0 - beta,
        hi: beta + alpha,
    }
}

/// `theta in ((2 - beta)/2, beta + alpha)`.
pub fn rough_window(alpha: f64, beta: f64) -> Window {
    Window {
        lo: (2.0 - beta) / 2.0,
        hi: beta + alpha,
    }
}

pub(crate) fn resolve_theta(data: &BackwardData, w: Window) -> Result<f64> {
    let theta = data.theta.unwrap_or_else(|| w.midpoint());
    if !w.contains(theta) {
        return Err(Error::Param {
            field: "theta".into(),
            msg: format!("{theta} outside the admissible window ({}, {})", w.lo, w.hi),
        });
    }
    Ok(theta)
}

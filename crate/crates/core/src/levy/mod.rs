//! Symmetric alpha-stable increments matching `exp(-t psi)`, truncated
//! small-jump Poisson sampling, and Campbell moments of `sum |y|^2`.

mod campbell;
mod jumps;
mod stable;

pub use campbell::{bell_coefficient, campbell_moment, coefficient_table, jump_moment, mgf, Coefficients, MAX_ORDER};
pub use jumps::{sample_small_jumps, JumpMeasure, JumpRecord};
pub use stable::{standard_symmetric_stable, StableIncrements};

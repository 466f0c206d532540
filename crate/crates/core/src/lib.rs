//! Spectral paracontrolled calculus on the torus, stable-driven SDE simulation
//! with distributional drift, and the experiment drivers built on top of them.
//!
//! Fourier convention: `u(x) = sum_k u_hat(k) exp(2 pi i k.x)` on the unit torus,
//! coefficients stored in FFT order.

pub mod enhanced_drift;
pub mod experiments;
pub mod error;
pub mod levy;
pub mod mcsim;
pub mod pde;
pub mod report;
pub mod semigroup;
pub mod spectral;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};

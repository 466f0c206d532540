//! Stable symbols and the Fourier multipliers built from them.

mod operator;
mod symbol;

pub use operator::Semigroup;
pub use symbol::{Atom, StableSymbol};

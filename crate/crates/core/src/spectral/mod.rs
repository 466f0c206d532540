//! Fourier grids, Littlewood-Paley blocks, Besov norms and Bony paraproducts.

mod fft;
mod field;
mod grid;
mod norms;
mod paraproduct;
mod partition;
mod time_field;

pub use field::{Field, FieldRecord};
pub use grid::FourierGrid;
pub use norms::{
    besov_from_blocks, besov_norm, block_sups, holder_parts, sup_besov, time_holder_seminorm,
    HolderParts,
};
pub use paraproduct::{para_less, paraproducts, resonant, Blocks, Paraproducts};
pub use partition::{cumulative, cumulative_ramp, profile, DyadicPartition};
pub use time_field::{uniform_times, TimeField};

/// `Delta_j u`.
pub fn lp_block(u: &Field, j: i32, part: &DyadicPartition) -> crate::Result<Field> {
    part.block(u, j)
}

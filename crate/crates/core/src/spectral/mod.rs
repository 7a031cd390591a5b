//! Frequency grids and the tapered DFT of irregularly sampled data.

mod dft;
mod grid;

pub use dft::{density_periodogram, leave_one_out_dft, tapered_periodogram, weighted_dft, TaperedDftField, REANCHOR};
pub use grid::FrequencyGrid;

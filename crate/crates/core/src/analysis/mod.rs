//! Spectra, sector reduction and topological invariants of a built model.

pub mod sector;
pub mod spectrum;
pub mod topology;

pub use sector::{reduce_sector, sector_spectrum_formula, Classification, SectorReport};
pub use spectrum::{analytic_spectrum, numeric_spectrum, supercharge_orbit, SpectrumReport};
pub use topology::{sector_invariants, topological_invariants, TopologyReport};

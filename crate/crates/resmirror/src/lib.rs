//! Exact evaluation of two-point intersection numbers on moduli of polynomial maps by
//! iterated residues over ordered partitions, together with mirror maps, mirror
//! transforms, virtual structure constants and j-function coefficients.

pub mod cache;
pub mod checks;
pub mod cli;
pub mod error;
pub mod exact;
pub mod geometries;
pub mod partitions;
pub mod residue;
pub mod series;
pub mod vsc;

pub use error::{Error, Result};

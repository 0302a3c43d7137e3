//! Bond percolation on the square lattice: regions and seeded configurations,
//! path and flow primitives, extremal crossings and circuits, arm events, and
//! shielded detours with their topological validators.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod lattice;
pub mod paths;
pub mod geometry;
pub mod crossings;
pub mod arms;
pub mod detours;

pub use error::{Error, Result};

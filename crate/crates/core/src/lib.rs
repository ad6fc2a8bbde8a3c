//! Finite-dimensional quantum formalism with composite-system structure,
//! an executable no-signaling verifier, reconstructions of historical
//! superluminal-signaling proposals with their rebuttals, and a GRW
//! spontaneous-localization simulator.
//!
//! The crate is `no_std` and needs only `alloc`. Everything is dense and
//! double precision; the global comparison tolerance is [`TOLERANCE`].
//! Subsystem indices in public APIs are 0-based; reports and docs label
//! them 1-based (particle 1 = index 0).

#![no_std]
// `!(x > 0.0)` rejects NaN along with the out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod grw;
pub mod linalg;
pub mod measurement;
pub mod nosignal;
pub mod protocols;
pub mod random;
pub mod state;

pub use error::{Error, Result};
pub use linalg::{c64, embed, kron, partial_trace, Complex64, ComplexMatrix, DimList};
pub use state::{DensityOperator, QuantumState, SchmidtDecomposition};

/// Global comparison tolerance for all predicates and invariants.
pub const TOLERANCE: f64 = 1e-10;

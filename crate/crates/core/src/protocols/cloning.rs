//! The no-cloning argument: a unitary copier that works on `|V⟩` and
//! `|H⟩` acts on superpositions by linearity, and so cannot copy them.
//!
//! Here `|R⟩ = (|V⟩ + |H⟩)/√2`, the equal superposition written in the
//! cloning argument.

use alloc::vec;

use crate::error::{bail, Result};
use crate::linalg::{c64, inner, DimList};
use crate::state::QuantumState;

/// Largest number of copies expanded into a dense state.
pub const COPY_CAP: usize = 20;

/// `|⟨φ|ψ⟩| − |⟨φ|ψ⟩|²`. Unitary cloning of both states forces
/// `⟨φ|ψ⟩ = ⟨φ|ψ⟩²`, so a positive value rules out an exact cloner for
/// the pair.
pub fn cloning_residual(phi: &QuantumState, psi: &QuantumState) -> Result<f64> {
    if phi.dim() != psi.dim() {
        bail!(
            Dimension,
            "states of dimension {} and {}",
            phi.dim(),
            psi.dim()
        );
    }
    let s = phi.overlap(psi).norm();
    Ok(s - s * s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearityExtension {
    /// `a|V⟩^⊗M + b|H⟩^⊗M`.
    pub state: QuantumState,
    /// `|⟨s^⊗M | output⟩|²` against the copies the nonlinear device promises.
    pub fidelity_to_magic: f64,
}

/// Output of the copier fixed on `{V, H}` for the input `a|V⟩ + b|H⟩`,
/// with `copies` output photons.
pub fn linearity_extension(input: &QuantumState, copies: usize) -> Result<LinearityExtension> {
    if input.dim() != 2 {
        bail!(Dimension, "the copier acts on a single polarization qubit");
    }
    if copies == 0 {
        bail!(Dimension, "at least one output photon");
    }
    if copies > COPY_CAP {
        bail!(
            SizeLimit,
            "{copies} copies exceed the dense cap of {COPY_CAP}"
        );
    }
    let [a, b] = [input.amplitudes()[0], input.amplitudes()[1]];
    let d = 1usize << copies;
    let mut amps = vec![c64(0.0, 0.0); d];
    amps[0] += a;
    amps[d - 1] += b;
    let state = QuantumState::new(amps, DimList::uniform(2, copies))?;
    let mut magic = vec![c64(1.0, 0.0)];
    for _ in 0..copies {
        magic = crate::linalg::kron_vec(&magic, input.amplitudes());
    }
    let fidelity_to_magic = inner(&magic, state.amplitudes()).norm_sqr();
    Ok(LinearityExtension {
        state,
        fidelity_to_magic,
    })
}

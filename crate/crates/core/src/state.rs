//! Pure states, density operators, Born-rule probabilities, the Schmidt
//! decomposition and reduced states.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{bail, Result};
use crate::linalg::{
    decomp, inner, kron, kron_vec, norm, partial_trace, require_hermitian, ComplexMatrix, DimList,
};
use crate::TOLERANCE;

/// Norm deviation beyond which a state vector is rejected instead of accepted.
pub const NORM_REJECT: f64 = 1e-8;

/// Normalized state vector over a composite space.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amplitudes: Vec<Complex64>,
    dims: DimList,
}

impl QuantumState {
    /// Wraps amplitudes that are already normalized (within 1e-8).
    pub fn new(amplitudes: Vec<Complex64>, dims: DimList) -> Result<Self> {
        if amplitudes.len() != dims.total() {
            bail!(
                Dimension,
                "{} amplitudes for a space of dimension {}",
                amplitudes.len(),
                dims.total()
            );
        }
        let n = norm(&amplitudes);
        if (n - 1.0).abs() > NORM_REJECT {
            bail!(Contract, "state norm is {n}, expected 1");
        }
        Ok(Self { amplitudes, dims })
    }

    /// Single-factor state.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dims = DimList::new([amplitudes.len()])?;
        Self::new(amplitudes, dims)
    }

    /// Normalizes explicitly; fails only for the zero vector.
    pub fn normalize(amplitudes: Vec<Complex64>, dims: DimList) -> Result<Self> {
        let n = norm(&amplitudes);
        if n <= f64::MIN_POSITIVE {
            bail!(Contract, "cannot normalize the zero vector");
        }
        let amplitudes = amplitudes.into_iter().map(|z| z / n).collect();
        Self::new(amplitudes, dims)
    }

    /// `|e_index⟩` in a space with the given factors.
    pub fn basis(dims: DimList, index: usize) -> Result<Self> {
        if index >= dims.total() {
            bail!(
                Dimension,
                "basis index {index} out of range {}",
                dims.total()
            );
        }
        let amplitudes = crate::linalg::basis_vector(dims.total(), index);
        Ok(Self { amplitudes, dims })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dims(&self) -> &DimList {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// `|self⟩ ⊗ |other⟩`; factor lists are concatenated.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.dims().to_vec();
        dims.extend_from_slice(other.dims.dims());
        Self {
            amplitudes: kron_vec(&self.amplitudes, &other.amplitudes),
            dims: DimList::new(dims).expect("concatenated dims are positive"),
        }
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &Self) -> Complex64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    /// `|Ψ⟩⟨Ψ|`.
    pub fn density(&self) -> DensityOperator {
        DensityOperator {
            matrix: ComplexMatrix::outer(&self.amplitudes, &self.amplitudes),
            dims: self.dims.clone(),
        }
    }

    /// Applies a unitary on the full space.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<Self> {
        if !u.is_unitary(TOLERANCE) || u.rows() != self.dim() {
            bail!(
                Contract,
                "evolution operator is not a unitary on this space"
            );
        }
        Self::new(u.apply(&self.amplitudes), self.dims.clone())
    }
}

/// Statistical operator: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    dims: DimList,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix, dims: DimList) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != dims.total() {
            bail!(
                Dimension,
                "{}x{} operator for subsystem dimensions {:?}",
                matrix.rows(),
                matrix.cols(),
                dims.dims()
            );
        }
        require_hermitian(&matrix, "density operator")?;
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TOLERANCE || tr.im.abs() > TOLERANCE {
            bail!(Contract, "density operator trace is {tr}, expected 1");
        }
        if !matrix.is_positive_semidefinite(TOLERANCE) {
            bail!(Contract, "density operator has a negative eigenvalue");
        }
        Ok(Self { matrix, dims })
    }

    /// For results of trace- and positivity-preserving maps: scrubs
    /// anti-Hermitian round-off and skips the spectral check.
    pub(crate) fn from_channel_output(matrix: ComplexMatrix, dims: DimList) -> Self {
        debug_assert!(matrix.rows() == dims.total());
        Self {
            matrix: matrix.hermitian_part(),
            dims,
        }
    }

    /// Maximally mixed state `I/d`.
    pub fn maximally_mixed(dims: DimList) -> Self {
        let d = dims.total();
        Self {
            matrix: ComplexMatrix::identity(d).scale_real(1.0 / d as f64),
            dims,
        }
    }

    /// Convex combination `Σ wᵢ ρᵢ`; weights must be nonnegative and sum to 1.
    pub fn mixture(parts: &[(f64, DensityOperator)]) -> Result<Self> {
        let Some((_, first)) = parts.first() else {
            bail!(Contract, "empty mixture");
        };
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if parts.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > TOLERANCE {
            bail!(Contract, "mixture weights must be nonnegative and sum to 1");
        }
        let mut acc = ComplexMatrix::zeros(first.dim(), first.dim());
        for (w, rho) in parts {
            if rho.dims != first.dims {
                bail!(Dimension, "mixture components live on different spaces");
            }
            acc = &acc + &rho.matrix.scale_real(*w);
        }
        Ok(Self::from_channel_output(acc, first.dims.clone()))
    }

    /// `ρ₁ ⊗ ρ₂`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.dims().to_vec();
        dims.extend_from_slice(other.dims.dims());
        Self {
            matrix: kron(&self.matrix, &other.matrix),
            dims: DimList::new(dims).expect("concatenated dims are positive"),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &DimList {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.matrix.matmul(&self.matrix).trace().re
    }

    /// Unitary evolution on the full space, `UρU†`.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<Self> {
        if !u.is_unitary(TOLERANCE) || u.rows() != self.dim() {
            bail!(
                Contract,
                "evolution operator is not a unitary on this space"
            );
        }
        Ok(Self::from_channel_output(
            self.matrix.conjugate_by(u),
            self.dims.clone(),
        ))
    }

    /// Reduced state on `keep` (0-based factor indices).
    pub fn reduced(&self, keep: &[usize]) -> Result<Self> {
        reduced_state(self, keep)
    }
}

/// Either kind of state, for functions that accept both.
#[derive(Debug, Clone, Copy)]
pub enum StateRef<'a> {
    Pure(&'a QuantumState),
    Mixed(&'a DensityOperator),
}

impl<'a> From<&'a QuantumState> for StateRef<'a> {
    fn from(s: &'a QuantumState) -> Self {
        StateRef::Pure(s)
    }
}

impl<'a> From<&'a DensityOperator> for StateRef<'a> {
    fn from(r: &'a DensityOperator) -> Self {
        StateRef::Mixed(r)
    }
}

/// Born probability `Tr[Pρ]`; a pure state is routed through `|Ψ⟩⟨Ψ|`.
pub fn born_probability<'a>(
    state: impl Into<StateRef<'a>>,
    projector: &ComplexMatrix,
) -> Result<f64> {
    if !projector.is_projector(TOLERANCE) {
        bail!(
            Contract,
            "Born probability needs an idempotent Hermitian projector"
        );
    }
    let rho = match state.into() {
        StateRef::Pure(s) => s.density(),
        StateRef::Mixed(r) => r.clone(),
    };
    if projector.rows() != rho.dim() {
        bail!(
            Dimension,
            "projector of size {} on a space of dimension {}",
            projector.rows(),
            rho.dim()
        );
    }
    let p = projector.matmul(&rho.matrix).trace().re;
    Ok(p.clamp(0.0, 1.0))
}

/// `⟨Ω⟩ = Tr[Ωρ]` for Hermitian `Ω`.
pub fn expectation(observable: &ComplexMatrix, rho: &DensityOperator) -> Result<f64> {
    require_hermitian(observable, "observable")?;
    if observable.rows() != rho.dim() {
        bail!(
            Dimension,
            "observable of size {} on a space of dimension {}",
            observable.rows(),
            rho.dim()
        );
    }
    let v = observable.matmul(&rho.matrix).trace();
    // Hermitian × Hermitian has real trace; the residue is round-off
    debug_assert!(v.im.abs() <= TOLERANCE * (1.0 + observable.frobenius_norm()));
    Ok(v.re)
}

/// Reduced statistical operator on the kept factors.
pub fn reduced_state(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    let kept = rho.dims.normalize_selection(keep)?;
    let m = partial_trace(&rho.matrix, &rho.dims, &kept)?;
    Ok(DensityOperator::from_channel_output(
        m,
        rho.dims.subset(&kept),
    ))
}

/// Trace distance `½ Σ|λᵢ(ρ - σ)|`.
pub fn trace_distance(a: &DensityOperator, b: &DensityOperator) -> Result<f64> {
    if a.dims != b.dims {
        bail!(
            Dimension,
            "trace distance between states on different spaces"
        );
    }
    Ok(0.5 * decomp::hermitian_trace_norm(&(&a.matrix - &b.matrix).hermitian_part())?)
}

/// Biorthonormal expansion `|ψ⟩ = Σ pᵢ |φᵢ⟩ ⊗ |γᵢ⟩`, `Σ pᵢ² = 1`.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    /// Nonnegative, descending. Zero coefficients are dropped.
    pub coefficients: Vec<f64>,
    pub left_basis: Vec<Vec<Complex64>>,
    pub right_basis: Vec<Vec<Complex64>>,
}

/// Coefficients at or below this are treated as absent.
const SCHMIDT_CUTOFF: f64 = 1e-12;

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// `Σ pᵢ |φᵢ⟩⊗|γᵢ⟩` as a flat vector.
    pub fn reconstruct(&self) -> Vec<Complex64> {
        let d = self.left_basis[0].len() * self.right_basis[0].len();
        let mut out = alloc::vec![Complex64::new(0.0, 0.0); d];
        for ((p, l), r) in self
            .coefficients
            .iter()
            .zip(&self.left_basis)
            .zip(&self.right_basis)
        {
            for (o, z) in out.iter_mut().zip(kron_vec(l, r)) {
                *o += z * p;
            }
        }
        out
    }
}

/// Schmidt decomposition of a two-factor pure state via SVD of the
/// reshaped amplitude matrix.
pub fn schmidt_decompose(state: &QuantumState) -> Result<SchmidtDecomposition> {
    if state.dims.len() != 2 {
        bail!(
            Dimension,
            "Schmidt decomposition needs exactly 2 factors, got {}",
            state.dims.len()
        );
    }
    let (d1, d2) = (state.dims.factor(0), state.dims.factor(1));
    let m = ComplexMatrix::from_fn(d1, d2, |i, a| state.amplitudes[i * d2 + a]);
    let dec = decomp::svd(&m);
    let mut coefficients = Vec::new();
    let mut left_basis = Vec::new();
    let mut right_basis = Vec::new();
    for (k, &s) in dec.singular_values.iter().enumerate() {
        if s <= SCHMIDT_CUTOFF {
            continue;
        }
        coefficients.push(s);
        left_basis.push(dec.u.column(k));
        right_basis.push((0..d2).map(|a| dec.v_adjoint[(k, a)]).collect());
    }
    Ok(SchmidtDecomposition {
        coefficients,
        left_basis,
        right_basis,
    })
}

/// Frequently used states. Spin labels: index 0 = ↑ (or V), 1 = ↓ (or H).
pub mod named {
    use super::*;
    use crate::linalg::c64;
    use core::f64::consts::FRAC_1_SQRT_2;

    pub fn qubit(a: Complex64, b: Complex64) -> Result<QuantumState> {
        QuantumState::from_amplitudes(alloc::vec![a, b])
    }

    pub fn up() -> QuantumState {
        qubit(c64(1.0, 0.0), c64(0.0, 0.0)).unwrap()
    }

    pub fn down() -> QuantumState {
        qubit(c64(0.0, 0.0), c64(1.0, 0.0)).unwrap()
    }

    pub fn plus() -> QuantumState {
        qubit(c64(FRAC_1_SQRT_2, 0.0), c64(FRAC_1_SQRT_2, 0.0)).unwrap()
    }

    pub fn minus() -> QuantumState {
        qubit(c64(FRAC_1_SQRT_2, 0.0), c64(-FRAC_1_SQRT_2, 0.0)).unwrap()
    }

    /// `(|↑↓⟩ − |↓↑⟩)/√2`.
    pub fn singlet() -> QuantumState {
        let h = FRAC_1_SQRT_2;
        QuantumState::new(
            alloc::vec![c64(0.0, 0.0), c64(h, 0.0), c64(-h, 0.0), c64(0.0, 0.0)],
            DimList::uniform(2, 2),
        )
        .unwrap()
    }
}

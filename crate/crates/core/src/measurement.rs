//! Projective measurements (selective and nonselective), Kraus operations,
//! the von Neumann ideal measurement interaction and the
//! Wigner–Araki–Yanase constraints on it.
//!
//! Kraus channels use the convention `ρ → Σ Aᵢ† ρ Aᵢ` with `Σ Aᵢ Aᵢ† = I`.
//! Channels written the more common way (`Σ K ρ K†`, `Σ K†K = I`) enter
//! through [`KrausChannel::from_standard`].

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{bail, Result};
use crate::linalg::{c64, decomp, embed, inner, kron, require_hermitian, ComplexMatrix, DimList};
use crate::random;
use crate::state::DensityOperator;
use crate::TOLERANCE;

/// Selective outcomes below this probability cannot be conditioned on.
pub const IMPOSSIBLE_OUTCOME: f64 = 1e-12;

/// Complete family of mutually orthogonal projectors.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementFamily {
    projectors: Vec<ComplexMatrix>,
    labels: Vec<String>,
}

impl MeasurementFamily {
    pub fn new(projectors: Vec<ComplexMatrix>, labels: Vec<String>) -> Result<Self> {
        if projectors.is_empty() {
            bail!(
                Contract,
                "a measurement family needs at least one projector"
            );
        }
        if labels.len() != projectors.len() {
            bail!(
                Dimension,
                "{} labels for {} projectors",
                labels.len(),
                projectors.len()
            );
        }
        let n = projectors[0].rows();
        let mut sum = ComplexMatrix::zeros(n, n);
        for (i, p) in projectors.iter().enumerate() {
            if !p.is_square() || p.rows() != n {
                bail!(Dimension, "projector {i} has a different size");
            }
            if !p.is_projector(TOLERANCE) {
                bail!(
                    Contract,
                    "element {i} is not an idempotent Hermitian projector"
                );
            }
            for (j, q) in projectors.iter().enumerate().skip(i + 1) {
                if p.matmul(q).max_abs_diff(&ComplexMatrix::zeros(n, n)) > TOLERANCE {
                    bail!(Contract, "projectors {i} and {j} are not orthogonal");
                }
            }
            sum = &sum + p;
        }
        if !sum.approx_eq(&ComplexMatrix::identity(n), TOLERANCE) {
            bail!(Contract, "projectors do not resolve the identity");
        }
        Ok(Self { projectors, labels })
    }

    /// Labels outcomes `"0"`, `"1"`, ….
    pub fn unlabeled(projectors: Vec<ComplexMatrix>) -> Result<Self> {
        let labels = (0..projectors.len()).map(|i| format!("{i}")).collect();
        Self::new(projectors, labels)
    }

    /// Rank-one projectors onto an orthonormal basis.
    pub fn from_basis(vectors: &[Vec<Complex64>], labels: &[&str]) -> Result<Self> {
        let projectors = vectors
            .iter()
            .map(|v| ComplexMatrix::projector_onto(v))
            .collect();
        Self::new(
            projectors,
            labels.iter().map(|s| String::from(*s)).collect(),
        )
    }

    /// Computational-basis measurement on an `n`-level system.
    pub fn computational(n: usize) -> Self {
        let vectors: Vec<_> = (0..n).map(|i| crate::linalg::basis_vector(n, i)).collect();
        let labels: Vec<String> = (0..n).map(|i| format!("{i}")).collect();
        let projectors = vectors.iter().map(|v| ComplexMatrix::outer(v, v)).collect();
        Self { projectors, labels }
    }

    /// The single-outcome family `{I}`.
    pub fn trivial(n: usize) -> Self {
        Self {
            projectors: alloc::vec![ComplexMatrix::identity(n)],
            labels: alloc::vec![String::from("all")],
        }
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].rows()
    }
}

/// Trace-preserving operation set `{Aᵢ}` with `Σ Aᵢ Aᵢ† = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    operators: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let Some(first) = operators.first() else {
            bail!(Contract, "a Kraus channel needs at least one operator");
        };
        let n = first.rows();
        let mut sum = ComplexMatrix::zeros(n, n);
        for (i, a) in operators.iter().enumerate() {
            if !a.is_square() || a.rows() != n {
                bail!(Dimension, "Kraus operator {i} has a different size");
            }
            sum = &sum + &a.matmul(&a.adjoint());
        }
        if !sum.approx_eq(&ComplexMatrix::identity(n), TOLERANCE) {
            bail!(Contract, "Kraus operators do not satisfy Σ AA† = I");
        }
        Ok(Self { operators })
    }

    /// Adapter from the `ρ → Σ KρK†`, `Σ K†K = I` convention (`Aᵢ = Kᵢ†`).
    pub fn from_standard(operators: Vec<ComplexMatrix>) -> Result<Self> {
        Self::new(operators.iter().map(ComplexMatrix::adjoint).collect())
    }

    /// Projective family as a channel (`Pᵢ† = Pᵢ`, `PᵢPᵢ† = Pᵢ`).
    pub fn from_family(family: &MeasurementFamily) -> Self {
        Self {
            operators: family.projectors().to_vec(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            operators: alloc::vec![ComplexMatrix::identity(n)],
        }
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn dim(&self) -> usize {
        self.operators[0].rows()
    }
}

fn lift(op: &ComplexMatrix, rho: &DensityOperator, target: usize) -> Result<ComplexMatrix> {
    embed(op, rho.dims(), target)
}

/// `Σₖ Pₖ ρ Pₖ` with the family acting on factor `target`.
pub fn measure_nonselective(
    rho: &DensityOperator,
    family: &MeasurementFamily,
    target: usize,
) -> Result<DensityOperator> {
    let mut acc = ComplexMatrix::zeros(rho.dim(), rho.dim());
    for p in family.projectors() {
        let big = lift(p, rho, target)?;
        acc = &acc + &big.matmul(rho.matrix()).matmul(&big);
    }
    Ok(DensityOperator::from_channel_output(
        acc,
        rho.dims().clone(),
    ))
}

/// Conditions on one projector outcome on factor `target`.
///
/// Returns `(Tr[Pρ], PρP / Tr[Pρ])`.
pub fn measure_selective(
    rho: &DensityOperator,
    projector: &ComplexMatrix,
    target: usize,
) -> Result<(f64, DensityOperator)> {
    if !projector.is_projector(TOLERANCE) {
        bail!(
            Contract,
            "selective measurement needs an idempotent Hermitian projector"
        );
    }
    let big = lift(projector, rho, target)?;
    let unnorm = big.matmul(rho.matrix()).matmul(&big);
    let p = unnorm.trace().re;
    if p < IMPOSSIBLE_OUTCOME {
        return Err(crate::Error::ImpossibleOutcome(p.max(0.0)));
    }
    Ok((
        p.min(1.0),
        DensityOperator::from_channel_output(unnorm.scale_real(1.0 / p), rho.dims().clone()),
    ))
}

/// `Σᵢ Aᵢ† ρ Aᵢ` with the channel acting on factor `target`.
pub fn apply_kraus(
    rho: &DensityOperator,
    channel: &KrausChannel,
    target: usize,
) -> Result<DensityOperator> {
    let mut acc = ComplexMatrix::zeros(rho.dim(), rho.dim());
    for a in channel.operators() {
        let big = lift(a, rho, target)?;
        acc = &acc + &big.adjoint().matmul(rho.matrix()).matmul(&big);
    }
    Ok(DensityOperator::from_channel_output(
        acc,
        rho.dims().clone(),
    ))
}

/// `U ρ U†` with `U` acting on factor `target`.
pub fn apply_local_unitary(
    rho: &DensityOperator,
    u: &ComplexMatrix,
    target: usize,
) -> Result<DensityOperator> {
    if !u.is_unitary(TOLERANCE) {
        bail!(Contract, "local evolution operator is not unitary");
    }
    let big = lift(u, rho, target)?;
    Ok(DensityOperator::from_channel_output(
        rho.matrix().conjugate_by(&big),
        rho.dims().clone(),
    ))
}

/// System ⊗ apparatus layout for the ideal measurement interaction
/// `|φᵢ⟩⊗|m₀⟩ → |φᵢ⟩⊗|mᵢ⟩`. The system basis `|φᵢ⟩` is the
/// computational one; apparatus states are apparatus basis indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VonNeumannSetup {
    pub system_dim: usize,
    pub apparatus_dim: usize,
    pub ready_index: usize,
    pub pointer_indices: Vec<usize>,
}

impl VonNeumannSetup {
    /// Ready state 0, pointers 1..=n.
    pub fn standard(system_dim: usize) -> Self {
        Self {
            system_dim,
            apparatus_dim: system_dim + 1,
            ready_index: 0,
            pointer_indices: (1..=system_dim).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.system_dim == 0 {
            bail!(Dimension, "system dimension must be positive");
        }
        if self.apparatus_dim < self.system_dim + 1 {
            bail!(
                Dimension,
                "apparatus dimension {} cannot hold a ready state and {} pointers",
                self.apparatus_dim,
                self.system_dim
            );
        }
        if self.pointer_indices.len() != self.system_dim {
            bail!(
                Dimension,
                "{} pointer states for a {}-level system",
                self.pointer_indices.len(),
                self.system_dim
            );
        }
        let mut seen = alloc::vec![false; self.apparatus_dim];
        for &idx in core::iter::once(&self.ready_index).chain(&self.pointer_indices) {
            if idx >= self.apparatus_dim {
                bail!(Dimension, "apparatus index {idx} out of range");
            }
            if seen[idx] {
                bail!(
                    Contract,
                    "apparatus index {idx} used twice among ready and pointer states"
                );
            }
            seen[idx] = true;
        }
        Ok(())
    }

    pub fn dims(&self) -> DimList {
        DimList::new([self.system_dim, self.apparatus_dim]).expect("validated dims")
    }
}

/// Permutation unitary realizing the ideal measurement interaction.
///
/// On system branch `i` it swaps apparatus states `ready ↔ pointerᵢ` and
/// fixes every other apparatus state.
pub fn vn_ideal_unitary(setup: &VonNeumannSetup) -> Result<ComplexMatrix> {
    setup.validate()?;
    let da = setup.apparatus_dim;
    let n = setup.system_dim * da;
    let mut u = ComplexMatrix::zeros(n, n);
    for i in 0..setup.system_dim {
        let pointer = setup.pointer_indices[i];
        for a in 0..da {
            let image = if a == setup.ready_index {
                pointer
            } else if a == pointer {
                setup.ready_index
            } else {
                a
            };
            u[(i * da + image, i * da + a)] = c64(1.0, 0.0);
        }
    }
    Ok(u)
}

/// Inputs for the conservation-law obstruction to ideal measurement.
#[derive(Debug, Clone)]
pub struct WaySetup {
    /// Σ, the system observable to be measured.
    pub system_observable: ComplexMatrix,
    /// γ⁽ˢ⁾, system part of the additive conserved quantity.
    pub system_charge: ComplexMatrix,
    /// γ⁽ᴬ⁾, apparatus part of the conserved quantity.
    pub apparatus_charge: ComplexMatrix,
    /// ⟨m₀|L²|m₀⟩ of the apparatus, units ħ².
    pub apparatus_l2_mean: f64,
}

impl WaySetup {
    /// `Γ = γ⁽ˢ⁾⊗I + I⊗γ⁽ᴬ⁾`.
    pub fn total_charge(&self) -> ComplexMatrix {
        let ds = self.system_charge.rows();
        let da = self.apparatus_charge.rows();
        &kron(&self.system_charge, &ComplexMatrix::identity(da))
            + &kron(&ComplexMatrix::identity(ds), &self.apparatus_charge)
    }
}

/// Eigen gap below which an observable counts as degenerate.
const DEGENERACY_GAP: f64 = 1e-8;

/// Eigenbasis of a nondegenerate Hermitian observable, ascending eigenvalues.
pub fn nondegenerate_eigenbasis(
    observable: &ComplexMatrix,
) -> Result<(Vec<f64>, Vec<Vec<Complex64>>)> {
    require_hermitian(observable, "observable")?;
    let (vals, vecs) = decomp::eigh(observable)?;
    if vals.windows(2).any(|w| w[1] - w[0] < DEGENERACY_GAP) {
        bail!(Unsupported, "observable has a degenerate spectrum");
    }
    let basis = (0..vals.len()).map(|c| vecs.column(c)).collect();
    Ok((vals, basis))
}

/// `maxᵢ≠ⱼ |⟨φᵢ|γ⁽ˢ⁾|φⱼ⟩|` over the eigenbasis of Σ; zero iff an exact
/// ideal interaction is compatible with conservation of Γ.
pub fn way_obstruction(setup: &WaySetup) -> Result<f64> {
    require_hermitian(&setup.system_charge, "system charge")?;
    require_hermitian(&setup.apparatus_charge, "apparatus charge")?;
    if setup.system_charge.rows() != setup.system_observable.rows() {
        bail!(
            Dimension,
            "system observable and charge act on different spaces"
        );
    }
    let (_, basis) = nondegenerate_eigenbasis(&setup.system_observable)?;
    let mut worst: f64 = 0.0;
    for (i, phi) in basis.iter().enumerate() {
        let g_phi = setup.system_charge.apply(phi);
        for (j, psi) in basis.iter().enumerate() {
            if i != j {
                worst = worst.max(inner(psi, &g_phi).norm());
            }
        }
    }
    Ok(worst)
}

/// Lower bound on the squared distortion of a spin-½ component
/// measurement: `h²/(32π²⟨L²⟩) = 1/(8⟨L²⟩)` with ħ = 1.
pub fn way_distortion_bound(l2_mean: f64) -> Result<f64> {
    if !(l2_mean > 0.0) {
        bail!(Contract, "apparatus ⟨L²⟩ must be positive, got {l2_mean}");
    }
    Ok(1.0 / (8.0 * l2_mean))
}

/// Squared distortion of a two-outcome measurement interaction `u`.
///
/// For each eigenvector `φᵢ` of the measured observable, `u|φᵢ,m₀⟩` is
/// compared with the ideal image `|φᵢ⟩⊗|mᵢ⟩`; the residual is the squared
/// norm of the component orthogonal to that image. The pointer pair
/// `(m₁, m₂)` is chosen orthonormal and optimal, and the two residuals are
/// averaged.
pub fn pointer_distortion(
    u: &ComplexMatrix,
    eigenbasis: &[Vec<Complex64>],
    ready: &[Complex64],
) -> Result<f64> {
    if eigenbasis.len() != 2 {
        bail!(
            Unsupported,
            "pointer distortion is implemented for two-outcome systems"
        );
    }
    let ds = eigenbasis[0].len();
    let da = ready.len();
    if u.rows() != ds * da || !u.is_square() {
        bail!(
            Dimension,
            "interaction is not an operator on system ⊗ apparatus"
        );
    }
    // apparatus components v_i = (⟨φᵢ| ⊗ I) U |φᵢ, m₀⟩
    let v: Vec<Vec<Complex64>> = eigenbasis
        .iter()
        .map(|phi| {
            let out = u.apply(&crate::linalg::kron_vec(phi, ready));
            (0..da)
                .map(|a| (0..ds).map(|s| phi[s].conj() * out[s * da + a]).sum())
                .collect()
        })
        .collect();
    let a = inner(&v[0], &v[0]).re;
    let b = inner(&v[1], &v[1]).re;
    let c = inner(&v[0], &v[1]).norm_sqr();
    // max over orthonormal (m1, m2) of |⟨m1|v1⟩|² + |⟨m2|v2⟩|², attained in span{v1, v2}
    let captured = 0.5 * ((a + b) + libm::sqrt(((a + b) * (a + b) - 4.0 * c).max(0.0)));
    Ok((1.0 - 0.5 * captured).max(0.0))
}

/// Spin-j operators `(Lx, Ly, Lz)` in the basis `m = j, j−1, …, −j`,
/// where `two_j = 2j`.
pub fn spin_operators(two_j: usize) -> [ComplexMatrix; 3] {
    let d = two_j + 1;
    let j = two_j as f64 / 2.0;
    let m = |k: usize| j - k as f64;
    let mut raise = ComplexMatrix::zeros(d, d);
    for k in 1..d {
        // L+ |m(k)⟩ = sqrt(j(j+1) - m(m+1)) |m(k)+1⟩, and m(k-1) = m(k)+1
        let mk = m(k);
        raise[(k - 1, k)] = c64(libm::sqrt(j * (j + 1.0) - mk * (mk + 1.0)), 0.0);
    }
    let lower = raise.adjoint();
    let lx = (&raise + &lower).scale_real(0.5);
    let ly = (&raise - &lower).scale(c64(0.0, -0.5));
    let lz = ComplexMatrix::from_real_diagonal(&(0..d).map(m).collect::<Vec<_>>());
    [lx, ly, lz]
}

/// Random unitary commuting with `gamma`: a random Hermitian generator is
/// pinched onto the eigenspaces of `gamma` and exponentiated.
pub fn conserving_unitary<R: Rng + ?Sized>(
    gamma: &ComplexMatrix,
    scale: f64,
    rng: &mut R,
) -> Result<ComplexMatrix> {
    let (vals, vecs) = decomp::eigh(gamma)?;
    let n = vals.len();
    let h = random::random_hermitian(n, rng);
    // generator in Γ's eigenbasis, blocks outside equal eigenvalues zeroed
    let h_eig = h.conjugate_by(&vecs.adjoint());
    let pinched = ComplexMatrix::from_fn(n, n, |r, c| {
        if (vals[r] - vals[c]).abs() < DEGENERACY_GAP {
            h_eig[(r, c)]
        } else {
            c64(0.0, 0.0)
        }
    });
    decomp::exp_i_hermitian(&pinched.conjugate_by(&vecs), scale)
}

/// One sampled trial of the distortion bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WayTrial {
    /// Twice the apparatus spin.
    pub two_j: usize,
    pub distortion: f64,
    pub bound: f64,
    /// Norm of `[U, Γ]`, confirming conservation.
    pub commutator_norm: f64,
}

/// Samples a spin-j apparatus (`2 ≤ 2j+1 ≤ max_apparatus_dim`) with a
/// randomly oriented charge `γ⁽ᴬ⁾ = V Lz V†`, a Haar ready state and a
/// random Γ-conserving interaction, for the measurement of σx on a spin-½
/// system with conserved `Sz + γ⁽ᴬ⁾`.
pub fn sample_way_trial<R: Rng + ?Sized>(
    max_apparatus_dim: usize,
    rng: &mut R,
) -> Result<WayTrial> {
    if max_apparatus_dim < 2 {
        bail!(Dimension, "apparatus needs at least two levels");
    }
    let two_j = rng.random_range(1..max_apparatus_dim);
    let d = two_j + 1;
    let [_, _, lz] = spin_operators(two_j);
    let orient = random::haar_unitary(d, rng);
    let gamma_a = lz.conjugate_by(&orient).hermitian_part();
    let j = two_j as f64 / 2.0;
    let setup = WaySetup {
        system_observable: crate::linalg::pauli::x(),
        system_charge: crate::linalg::pauli::z().scale_real(0.5),
        apparatus_charge: gamma_a,
        apparatus_l2_mean: j * (j + 1.0),
    };
    let gamma = setup.total_charge();
    let u = conserving_unitary(&gamma, core::f64::consts::PI, rng)?;
    let ready = random::random_state(DimList::single(d), rng);
    let (_, basis) = nondegenerate_eigenbasis(&setup.system_observable)?;
    let distortion = pointer_distortion(&u, &basis, ready.amplitudes())?;
    Ok(WayTrial {
        two_j,
        distortion,
        bound: way_distortion_bound(setup.apparatus_l2_mean)?,
        commutator_norm: u.commutator(&gamma).frobenius_norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;
    use crate::state::named;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn qubit_density(m: [[f64; 2]; 2]) -> DensityOperator {
        DensityOperator::new(
            ComplexMatrix::from_real_rows(&[&m[0], &m[1]]),
            DimList::single(2),
        )
        .unwrap()
    }

    #[test]
    fn family_validation() {
        let p0 = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        let p1 = ComplexMatrix::from_real_diagonal(&[0.0, 1.0]);
        assert!(MeasurementFamily::unlabeled(alloc::vec![p0.clone(), p1.clone()]).is_ok());
        assert!(matches!(
            MeasurementFamily::unlabeled(alloc::vec![p0.clone()]),
            Err(crate::Error::Contract(_))
        ));
        assert!(MeasurementFamily::unlabeled(alloc::vec![p0.clone(), p0.clone()]).is_err());
        assert!(MeasurementFamily::unlabeled(alloc::vec![pauli::x()]).is_err());
    }

    #[test]
    fn nonselective_examples() {
        let plus = named::plus().density();
        let z = MeasurementFamily::computational(2);
        let out = measure_nonselective(&plus, &z, 0).unwrap();
        assert!(out
            .matrix()
            .approx_eq(&ComplexMatrix::identity(2).scale_real(0.5), 1e-15));
        let same = measure_nonselective(&plus, &MeasurementFamily::trivial(2), 0).unwrap();
        assert!(same.matrix().approx_eq(plus.matrix(), 1e-15));

        // singlet, z on particle 2: ½|↑↓⟩⟨↑↓| + ½|↓↑⟩⟨↓↑| = diag(0, ½, ½, 0)
        let s = named::singlet().density();
        let out = measure_nonselective(&s, &z, 1).unwrap();
        let expect = ComplexMatrix::from_real_diagonal(&[0.0, 0.5, 0.5, 0.0]);
        assert!(out.matrix().approx_eq(&expect, 1e-15));
    }

    #[test]
    fn selective_examples() {
        let s = named::singlet().density();
        let up = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        let (p, post) = measure_selective(&s, &up, 1).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        let down_up = ComplexMatrix::from_real_diagonal(&[0.0, 0.0, 1.0, 0.0]);
        assert!(post.matrix().approx_eq(&down_up, 1e-15));

        let (p, post) = measure_selective(&s, &ComplexMatrix::identity(2), 0).unwrap();
        assert!((p - 1.0).abs() < 1e-15 && post.matrix().approx_eq(s.matrix(), 1e-15));

        let up_state = named::up().density();
        let down = ComplexMatrix::from_real_diagonal(&[0.0, 1.0]);
        assert!(matches!(
            measure_selective(&up_state, &down, 0),
            Err(crate::Error::ImpossibleOutcome(_))
        ));
        assert!(matches!(
            measure_selective(&up_state, &pauli::x(), 0),
            Err(crate::Error::Contract(_))
        ));
    }

    #[test]
    fn kraus_examples() {
        let rho = qubit_density([[1.0, 0.0], [0.0, 0.0]]);
        let p: f64 = 0.3;
        let ch = KrausChannel::new(alloc::vec![
            ComplexMatrix::identity(2).scale_real(libm::sqrt(1.0 - p)),
            pauli::x().scale_real(libm::sqrt(p)),
        ])
        .unwrap();
        let out = apply_kraus(&rho, &ch, 0).unwrap();
        assert!(out
            .matrix()
            .approx_eq(&ComplexMatrix::from_real_diagonal(&[0.7, 0.3]), 1e-15));

        let same = apply_kraus(&rho, &KrausChannel::identity(2), 0).unwrap();
        assert!(same.matrix().approx_eq(rho.matrix(), 1e-15));

        let plus = named::plus().density();
        let fam = MeasurementFamily::computational(2);
        let via_kraus = apply_kraus(&plus, &KrausChannel::from_family(&fam), 0).unwrap();
        let via_meas = measure_nonselective(&plus, &fam, 0).unwrap();
        assert!(via_kraus.matrix().approx_eq(via_meas.matrix(), 1e-15));

        assert!(matches!(
            KrausChannel::new(alloc::vec![pauli::x().scale_real(0.5)]),
            Err(crate::Error::Contract(_))
        ));
    }

    #[test]
    fn standard_convention_adapter() {
        // amplitude damping, K0 = [[1,0],[0,√(1-g)]], K1 = [[0,√g],[0,0]]
        let g: f64 = 0.4;
        let k0 = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, libm::sqrt(1.0 - g)]]);
        let k1 = ComplexMatrix::from_real_rows(&[&[0.0, libm::sqrt(g)], &[0.0, 0.0]]);
        assert!(KrausChannel::new(alloc::vec![k0.clone(), k1.clone()]).is_err());
        let ch = KrausChannel::from_standard(alloc::vec![k0, k1]).unwrap();
        let excited = qubit_density([[0.0, 0.0], [0.0, 1.0]]);
        let out = apply_kraus(&excited, &ch, 0).unwrap();
        assert!(out
            .matrix()
            .approx_eq(&ComplexMatrix::from_real_diagonal(&[g, 1.0 - g]), 1e-15));
    }

    #[test]
    fn von_neumann_examples() {
        let setup = VonNeumannSetup::standard(2);
        let u = vn_ideal_unitary(&setup).unwrap();
        assert!(u.is_unitary(TOLERANCE));
        // |φ₁⟩⊗|m₀⟩ → |φ₁⟩⊗|m₁⟩ ; index = i*3 + a
        let out = u.apply(&crate::linalg::basis_vector(6, 0));
        assert_eq!(out, crate::linalg::basis_vector(6, 1));
        let h = FRAC_1_SQRT_2;
        let mut input = alloc::vec![c64(0.0, 0.0); 6];
        input[0] = c64(h, 0.0);
        input[3] = c64(0.0, h);
        let out = crate::state::QuantumState::new(u.apply(&input), setup.dims()).unwrap();
        assert!((out.amplitudes()[1] - c64(h, 0.0)).norm() < 1e-15);
        assert!((out.amplitudes()[5] - c64(0.0, h)).norm() < 1e-15);
        let dec = crate::state::schmidt_decompose(&out).unwrap();
        assert_eq!(dec.rank(), 2);

        let small = VonNeumannSetup {
            apparatus_dim: 2,
            ..VonNeumannSetup::standard(2)
        };
        assert!(matches!(
            vn_ideal_unitary(&small),
            Err(crate::Error::Dimension(_))
        ));
        let clash = VonNeumannSetup {
            pointer_indices: alloc::vec![0, 2],
            ..VonNeumannSetup::standard(2)
        };
        assert!(vn_ideal_unitary(&clash).is_err());
    }

    fn way(sigma: ComplexMatrix, gamma: ComplexMatrix) -> WaySetup {
        WaySetup {
            system_observable: sigma,
            system_charge: gamma,
            apparatus_charge: ComplexMatrix::from_real_diagonal(&[1.0, 0.0, -1.0]),
            apparatus_l2_mean: 2.0,
        }
    }

    #[test]
    fn obstruction_examples() {
        assert!(way_obstruction(&way(pauli::z(), pauli::z())).unwrap() < 1e-15);
        assert!((way_obstruction(&way(pauli::x(), pauli::z())).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(
            way_obstruction(&way(ComplexMatrix::identity(2), pauli::z())),
            Err(crate::Error::Unsupported(_))
        ));
    }

    #[test]
    fn obstruction_matches_closed_form_eigenbasis() {
        // Σ = σz + 0.1σx: eigenvectors (cos θ/2, ±sin θ/2) with tan θ = 0.1;
        // ⟨φ₊|σz|φ₋⟩ = sin θ
        let sigma = &pauli::z() + &pauli::x().scale_real(0.1);
        let theta = libm::atan2(0.1, 1.0);
        let got = way_obstruction(&way(sigma, pauli::z())).unwrap();
        assert!((got - libm::sin(theta)).abs() < 1e-12);
        assert!(got > 0.0);
    }

    #[test]
    fn distortion_bound_examples() {
        assert!((way_distortion_bound(0.125).unwrap() - 1.0).abs() < 1e-15);
        assert!((way_distortion_bound(2.0).unwrap() - 0.0625).abs() < 1e-15);
        assert!(way_distortion_bound(1e12).unwrap() < 1e-12);
        assert!(way_distortion_bound(0.0).is_err());
        assert!(way_distortion_bound(-1.0).is_err());
    }

    #[test]
    fn spin_algebra() {
        for two_j in 1..=6 {
            let [lx, ly, lz] = spin_operators(two_j);
            let comm = lx.commutator(&ly);
            assert!(comm.approx_eq(&lz.scale(c64(0.0, 1.0)), 1e-12));
            let j = two_j as f64 / 2.0;
            let casimir = &(&lx.matmul(&lx) + &ly.matmul(&ly)) + &lz.matmul(&lz);
            let d = two_j + 1;
            assert!(casimir.approx_eq(&ComplexMatrix::identity(d).scale_real(j * (j + 1.0)), 1e-12));
        }
    }

    #[test]
    fn identity_interaction_has_half_distortion() {
        let (_, basis) = nondegenerate_eigenbasis(&pauli::x()).unwrap();
        let ready = named::up();
        let d =
            pointer_distortion(&ComplexMatrix::identity(4), &basis, ready.amplitudes()).unwrap();
        assert!((d - 0.5).abs() < 1e-12);
    }

    #[test]
    fn ideal_interaction_has_no_distortion() {
        // system basis = σx eigenbasis, so conjugate the permutation by H ⊗ I
        let setup = VonNeumannSetup::standard(2);
        let u = vn_ideal_unitary(&setup).unwrap();
        let h = ComplexMatrix::from_real_rows(&[
            &[FRAC_1_SQRT_2, FRAC_1_SQRT_2],
            &[FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
        ]);
        let hh = kron(&h, &ComplexMatrix::identity(3));
        let u_x = u.conjugate_by(&hh);
        let (_, basis) = nondegenerate_eigenbasis(&pauli::x()).unwrap();
        let ready = crate::linalg::basis_vector(3, 0);
        assert!(pointer_distortion(&u_x, &basis, &ready).unwrap() < 1e-12);
    }

    #[test]
    fn sampled_conserving_unitaries_commute() {
        let mut rng = random::seeded(21);
        for _ in 0..20 {
            let t = sample_way_trial(6, &mut rng).unwrap();
            assert!(t.commutator_norm < 1e-9, "commutator {}", t.commutator_norm);
            assert!(t.distortion >= t.bound, "{t:?}");
        }
    }
}

//! Random states, operators and channels for sweeps and property checks.
//!
//! All generators take an explicit RNG so that every sweep is reproducible
//! from a seed. [`seeded`] is the crate's canonical stream constructor.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{c64, decomp, ComplexMatrix, DimList};
use crate::measurement::{KrausChannel, MeasurementFamily};
use crate::state::{DensityOperator, QuantumState};

/// Canonical seeded stream.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent child stream `index` of a master seed, for per-worker or
/// per-trajectory RNGs.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform on (0, 1].
pub fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// Standard normal via Box–Muller.
pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1 = open_unit(rng);
    let u2 = rng.random::<f64>();
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * PI * u2)
}

/// Exponential waiting time with the given rate.
pub fn exponential<R: Rng + ?Sized>(rng: &mut R, rate: f64) -> f64 {
    -libm::log(open_unit(rng)) / rate
}

/// Complex Gaussian with `E|z|² = 1`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    c64(standard_normal(rng) * s, standard_normal(rng) * s)
}

pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Haar-random pure state.
pub fn random_state<R: Rng + ?Sized>(dims: DimList, rng: &mut R) -> QuantumState {
    let v: Vec<Complex64> = (0..dims.total()).map(|_| complex_normal(rng)).collect();
    QuantumState::normalize(v, dims).expect("a Gaussian vector is nonzero almost surely")
}

/// Full-rank random density operator `GG†/Tr(GG†)` with Ginibre `G`.
pub fn random_density<R: Rng + ?Sized>(dims: DimList, rng: &mut R) -> DensityOperator {
    let d = dims.total();
    let g = ginibre(d, d, rng);
    let m = g.matmul(&g.adjoint());
    let tr = m.trace().re;
    DensityOperator::new(m.scale_real(1.0 / tr).hermitian_part(), dims)
        .expect("Ginibre construction is a density operator")
}

/// Haar-random unitary.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    decomp::qr_unitary(&ginibre(n, n, rng))
}

/// Random Hermitian matrix with GUE-like entries.
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    ginibre(n, n, rng).hermitian_part()
}

/// Random complete projective family: a Haar basis split into between one
/// and `n` contiguous groups.
pub fn random_projective_family<R: Rng + ?Sized>(n: usize, rng: &mut R) -> MeasurementFamily {
    let u = haar_unitary(n, rng);
    let groups = rng.random_range(1..=n);
    // random cut points giving nonempty groups
    let mut cuts: Vec<usize> = (1..n).collect();
    for i in (1..cuts.len()).rev() {
        let j = rng.random_range(0..=i);
        cuts.swap(i, j);
    }
    let mut cuts: Vec<usize> = cuts.into_iter().take(groups - 1).collect();
    cuts.sort_unstable();
    cuts.push(n);
    let mut projectors = Vec::with_capacity(groups);
    let mut start = 0;
    for &end in &cuts {
        let mut p = ComplexMatrix::zeros(n, n);
        for col in start..end {
            let v = u.column(col);
            p = &p + &ComplexMatrix::outer(&v, &v);
        }
        projectors.push(p.hermitian_part());
        start = end;
    }
    MeasurementFamily::unlabeled(projectors).expect("projectors from a unitary basis form a family")
}

/// Random channel with `k` operators, drawn as a Haar isometry and
/// converted to the `Σ AA† = I` convention.
pub fn random_kraus_channel<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> KrausChannel {
    let u = haar_unitary(n * k, rng);
    // first n columns form an isometry V: C^n -> C^{nk}; block i is K_i
    let standard: Vec<ComplexMatrix> = (0..k)
        .map(|i| ComplexMatrix::from_fn(n, n, |r, c| u[(i * n + r, c)]))
        .collect();
    KrausChannel::from_standard(standard).expect("blocks of an isometry satisfy Σ K†K = I")
}

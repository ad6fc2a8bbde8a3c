//! Herbert's FLASH communicator.
//!
//! A source emits `(|V V⟩ + |H H⟩)/√2 = (|R L⟩ + |L R⟩)/√2`. Bob measures
//! photon 2 in the linear or circular basis. Photon 1 is amplified into
//! `4N` photons, split into four beams of `N`, and counted behind V, H, L
//! and R analyzers, in that order.
//!
//! With the nonphysical [`MagicCloner`] the four counts reveal Bob's basis.
//! With the [`LinearCloner`], which is what linearity forces once the
//! action on `V` and `H` is fixed, Alice's count distribution is the same
//! for both of Bob's choices.
//!
//! Polarization kets are written in the `(V, H)` basis, with
//! `R = (V + iH)/√2` and `L = (V − iH)/√2`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use rand::Rng;

use super::Nonphysical;
use crate::error::{bail, Result};
use crate::linalg::{apply_local, c64, inner, kron, Complex64, ComplexMatrix, DimList};
use crate::measurement::{measure_nonselective, MeasurementFamily};
use crate::nosignal::{channel_capacity_estimate, exact_signaling_report, SignalingReport};
use crate::random;
use crate::state::{DensityOperator, QuantumState};

/// Largest photon count expanded into a dense state vector.
pub const EXACT_PHOTON_CAP: usize = 12;
/// Largest photon count for the density-matrix cross-check.
pub const DENSITY_PHOTON_CAP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarization {
    V,
    H,
    L,
    R,
}

impl Polarization {
    /// Analyzer order of Alice's four beams.
    pub const DETECTORS: [Polarization; 4] = [Self::V, Self::H, Self::L, Self::R];

    pub fn ket(self) -> [Complex64; 2] {
        let s = FRAC_1_SQRT_2;
        match self {
            Self::V => [c64(1.0, 0.0), c64(0.0, 0.0)],
            Self::H => [c64(0.0, 0.0), c64(1.0, 0.0)],
            Self::R => [c64(s, 0.0), c64(0.0, s)],
            Self::L => [c64(s, 0.0), c64(0.0, -s)],
        }
    }

    pub fn orthogonal(self) -> Self {
        match self {
            Self::V => Self::H,
            Self::H => Self::V,
            Self::L => Self::R,
            Self::R => Self::L,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Self::V => "V",
            Self::H => "H",
            Self::L => "L",
            Self::R => "R",
        }
    }

    /// Unitary sending this polarization to basis index 0 and the
    /// orthogonal one to index 1.
    fn analyzer(self) -> ComplexMatrix {
        let a = self.ket();
        let b = self.orthogonal().ket();
        ComplexMatrix::from_rows(&[&[a[0].conj(), a[1].conj()], &[b[0].conj(), b[1].conj()]])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClonerKind {
    Magic,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BobBasis {
    Linear,
    Circular,
}

impl BobBasis {
    pub fn outcomes(self) -> [Polarization; 2] {
        match self {
            Self::Linear => [Polarization::V, Polarization::H],
            Self::Circular => [Polarization::R, Polarization::L],
        }
    }

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Self::Circular
        } else {
            Self::Linear
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlashConfig {
    /// Photons per beam; the amplifier emits `4n`.
    pub n: usize,
    pub cloner: ClonerKind,
    pub bob_choice: BobBasis,
    pub trials: usize,
    pub seed: u64,
}

/// Photons registered behind each analyzer in one run.
///
/// Each beam carries `N` photons so every count is at most `N`; the four
/// counts need not sum to anything fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct DetectorCounts {
    pub v: u32,
    pub h: u32,
    pub l: u32,
    pub r: u32,
}

impl DetectorCounts {
    pub fn as_array(&self) -> [u32; 4] {
        [self.v, self.h, self.l, self.r]
    }

    fn from_array(a: [u32; 4]) -> Self {
        Self {
            v: a[0],
            h: a[1],
            l: a[2],
            r: a[3],
        }
    }
}

/// Mean counts per beam (V, H, L, R).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ExpectedCounts {
    pub v: f64,
    pub h: f64,
    pub l: f64,
    pub r: f64,
}

impl ExpectedCounts {
    pub fn as_array(&self) -> [f64; 4] {
        [self.v, self.h, self.l, self.r]
    }

    fn from_array(a: [f64; 4]) -> Self {
        Self {
            v: a[0],
            h: a[1],
            l: a[2],
            r: a[3],
        }
    }
}

/// `(|VV⟩ + |HH⟩)/√2`; factor 0 travels to Alice, factor 1 to Bob.
pub fn source_state() -> QuantumState {
    let s = FRAC_1_SQRT_2;
    QuantumState::new(
        vec![c64(s, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(s, 0.0)],
        DimList::uniform(2, 2),
    )
    .expect("normalized source")
}

/// Probability of Bob's outcome and the ray it leaves photon 1 in.
pub fn bob_branch(outcome: Polarization) -> (f64, [Complex64; 2]) {
    let src = source_state();
    let b = outcome.ket();
    let amp = src.amplitudes();
    let mut alice = [c64(0.0, 0.0); 2];
    for (a, slot) in alice.iter_mut().enumerate() {
        *slot = b[0].conj() * amp[a * 2] + b[1].conj() * amp[a * 2 + 1];
    }
    let p = alice[0].norm_sqr() + alice[1].norm_sqr();
    let norm = libm::sqrt(p);
    (p, [alice[0] / norm, alice[1] / norm])
}

/// `|s⟩ → |s⟩^⊗4N` for every ray; not linear, hence not quantum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MagicCloner {
    pub copies: usize,
}

impl MagicCloner {
    pub fn clone_ray(&self, photon: [Complex64; 2]) -> Nonphysical<ProductCopies> {
        Nonphysical::new(ProductCopies {
            photon,
            copies: self.copies,
        })
    }
}

/// `copies` photons all in the state `photon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductCopies {
    pub photon: [Complex64; 2],
    pub copies: usize,
}

impl ProductCopies {
    pub fn expand(&self) -> Result<QuantumState> {
        check_cap(self.copies, EXACT_PHOTON_CAP)?;
        let mut amps = vec![c64(1.0, 0.0)];
        for _ in 0..self.copies {
            amps = crate::linalg::kron_vec(&amps, &self.photon);
        }
        QuantumState::new(amps, DimList::uniform(2, self.copies))
    }
}

/// The linear amplifier fixed by `|V⟩ → |V⟩^⊗4N`, `|H⟩ → |H⟩^⊗4N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinearCloner {
    pub copies: usize,
}

impl LinearCloner {
    pub fn apply(&self, photon: [Complex64; 2]) -> GhzCopies {
        GhzCopies {
            a: photon[0],
            b: photon[1],
            copies: self.copies,
        }
    }

    /// The isometry `C² → (C²)^⊗copies` as a `2^copies × 2` matrix.
    pub fn isometry(&self) -> Result<ComplexMatrix> {
        check_cap(self.copies, EXACT_PHOTON_CAP)?;
        let d = 1usize << self.copies;
        let mut m = ComplexMatrix::zeros(d, 2);
        m[(0, 0)] = c64(1.0, 0.0);
        m[(d - 1, 1)] = c64(1.0, 0.0);
        Ok(m)
    }
}

/// `a|V⟩^⊗copies + b|H⟩^⊗copies`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GhzCopies {
    pub a: Complex64,
    pub b: Complex64,
    pub copies: usize,
}

impl GhzCopies {
    pub fn expand(&self) -> Result<QuantumState> {
        check_cap(self.copies, EXACT_PHOTON_CAP)?;
        let d = 1usize << self.copies;
        let mut amps = vec![c64(0.0, 0.0); d];
        amps[0] += self.a;
        amps[d - 1] += self.b;
        QuantumState::new(amps, DimList::uniform(2, self.copies))
    }
}

fn check_cap(copies: usize, cap: usize) -> Result<()> {
    if copies == 0 {
        bail!(Dimension, "the amplifier must emit at least one photon");
    }
    if copies > cap {
        bail!(
            SizeLimit,
            "{copies} photons exceed the exact-simulation cap of {cap}; use sampled mode"
        );
    }
    Ok(())
}

enum AliceBeams {
    Product(ProductCopies),
    Ghz(GhzCopies),
}

fn amplify(cloner: ClonerKind, n: usize, photon: [Complex64; 2]) -> AliceBeams {
    match cloner {
        ClonerKind::Magic => AliceBeams::Product(
            MagicCloner { copies: 4 * n }
                .clone_ray(photon)
                .into_nonphysical(),
        ),
        ClonerKind::Linear => AliceBeams::Ghz(LinearCloner { copies: 4 * n }.apply(photon)),
    }
}

fn detector_for_photon(index: usize, n: usize) -> Polarization {
    Polarization::DETECTORS[index / n]
}

fn sample_beams<R: Rng + ?Sized>(beams: &AliceBeams, n: usize, rng: &mut R) -> DetectorCounts {
    let mut counts = [0u32; 4];
    match beams {
        AliceBeams::Product(p) => {
            for (k, det) in Polarization::DETECTORS.iter().enumerate() {
                let prob = inner(&det.ket(), &p.photon).norm_sqr();
                counts[k] = (0..n).filter(|_| rng.random::<f64>() < prob).count() as u32;
            }
        }
        AliceBeams::Ghz(g) => {
            // photon-by-photon measurement of a|V..V⟩ + b|H..H⟩, keeping the
            // two branch amplitudes
            let (mut a, mut b) = (g.a, g.b);
            let total = 4 * n;
            for i in 0..total {
                let det = detector_for_photon(i, n);
                let pk = det.ket();
                let (av, bh) = (a * pk[0].conj(), b * pk[1].conj());
                let remaining = total - i - 1;
                let p_hit = if remaining > 0 {
                    av.norm_sqr() + bh.norm_sqr()
                } else {
                    (av + bh).norm_sqr()
                };
                let hit = rng.random::<f64>() < p_hit;
                let (na, nb) = if hit {
                    (av, bh)
                } else {
                    let qk = det.orthogonal().ket();
                    (a * qk[0].conj(), b * qk[1].conj())
                };
                if hit {
                    counts[Polarization::DETECTORS
                        .iter()
                        .position(|&d| d == det)
                        .unwrap()] += 1;
                }
                let norm = libm::sqrt(na.norm_sqr() + nb.norm_sqr());
                if norm > 0.0 {
                    a = na / norm;
                    b = nb / norm;
                }
            }
        }
    }
    DetectorCounts::from_array(counts)
}

fn sample_bob<R: Rng + ?Sized>(basis: BobBasis, rng: &mut R) -> Polarization {
    let [first, second] = basis.outcomes();
    if rng.random::<f64>() < bob_branch(first).0 {
        first
    } else {
        second
    }
}

/// One run: Bob measures, photon 1 is amplified, Alice counts.
pub fn sample_trial<R: Rng + ?Sized>(
    cloner: ClonerKind,
    n: usize,
    basis: BobBasis,
    rng: &mut R,
) -> (Polarization, DetectorCounts) {
    let outcome = sample_bob(basis, rng);
    let (_, photon) = bob_branch(outcome);
    (outcome, sample_beams(&amplify(cloner, n, photon), n, rng))
}

/// Mean counts behind each analyzer given Bob's outcome.
pub fn expected_counts(cloner: ClonerKind, n: usize, bob_outcome: Polarization) -> ExpectedCounts {
    let (_, s) = bob_branch(bob_outcome);
    let nf = n as f64;
    let per_photon = |det: Polarization| -> f64 {
        let k = det.ket();
        match cloner {
            ClonerKind::Magic => inner(&k, &s).norm_sqr(),
            // each photon of a|V..V⟩ + b|H..H⟩ is the mixture |a|²V + |b|²H
            ClonerKind::Linear => {
                s[0].norm_sqr() * k[0].norm_sqr() + s[1].norm_sqr() * k[1].norm_sqr()
            }
        }
    };
    ExpectedCounts::from_array(Polarization::DETECTORS.map(|d| nf * per_photon(d)))
}

/// Count distribution of a dense `4N`-photon state.
fn count_distribution(state: &QuantumState, n: usize) -> Result<BTreeMap<DetectorCounts, f64>> {
    let dims = state.dims().clone();
    let mut amps = state.amplitudes().to_vec();
    for photon in 0..4 * n {
        amps = apply_local(
            &amps,
            &dims,
            photon,
            &detector_for_photon(photon, n).analyzer(),
        )?;
    }
    let total = 4 * n;
    let mut dist = BTreeMap::new();
    for (index, a) in amps.iter().enumerate() {
        let p = a.norm_sqr();
        if p == 0.0 {
            continue;
        }
        *dist.entry(counts_of_index(index, n, total)).or_insert(0.0) += p;
    }
    Ok(dist)
}

fn counts_of_index(index: usize, n: usize, total: usize) -> DetectorCounts {
    let mut counts = [0u32; 4];
    for photon in 0..total {
        // photon 0 is the most significant bit; bit 0 means "registered"
        let bit = (index >> (total - 1 - photon)) & 1;
        if bit == 0 {
            counts[photon / n] += 1;
        }
    }
    DetectorCounts::from_array(counts)
}

fn add_weighted(
    into: &mut BTreeMap<DetectorCounts, f64>,
    from: BTreeMap<DetectorCounts, f64>,
    w: f64,
) {
    for (k, p) in from {
        *into.entry(k).or_insert(0.0) += w * p;
    }
}

/// Exact distribution of Alice's counts for Bob's basis, summed over his
/// outcomes, from the dense post-amplification state of each branch.
pub fn exact_count_distribution(
    cloner: ClonerKind,
    n: usize,
    basis: BobBasis,
) -> Result<BTreeMap<DetectorCounts, f64>> {
    check_cap(4 * n, EXACT_PHOTON_CAP)?;
    let mut dist = BTreeMap::new();
    for outcome in basis.outcomes() {
        let (p, photon) = bob_branch(outcome);
        let state = match amplify(cloner, n, photon) {
            AliceBeams::Product(c) => c.expand()?,
            AliceBeams::Ghz(g) => g.expand()?,
        };
        add_weighted(&mut dist, count_distribution(&state, n)?, p);
    }
    Ok(dist)
}

/// Same distribution for the linear cloner, by the density-matrix route:
/// amplify photon 1 with the isometry, let Bob measure nonselectively,
/// trace out photon 2, and read the diagonal in the analyzer basis.
pub fn exact_count_distribution_density(
    n: usize,
    basis: BobBasis,
) -> Result<BTreeMap<DetectorCounts, f64>> {
    let copies = 4 * n;
    check_cap(copies, DENSITY_PHOTON_CAP)?;
    let c = LinearCloner { copies }.isometry()?;
    let lift = kron(&c, &ComplexMatrix::identity(2));
    let rho = source_state().density();
    let amplified = lift.matmul(rho.matrix()).matmul(&lift.adjoint());
    let mut dims: Vec<usize> = vec![2; copies];
    dims.push(2);
    let joint = DensityOperator::new(amplified.hermitian_part(), DimList::new(dims)?)?;
    let family = MeasurementFamily::from_basis(
        &basis.outcomes().map(|o| o.ket().to_vec()),
        &basis.outcomes().map(Polarization::symbol),
    )?;
    let measured = measure_nonselective(&joint, &family, copies)?;
    let alice = measured.reduced(&(0..copies).collect::<Vec<_>>())?;
    let mut w = ComplexMatrix::identity(1);
    for photon in 0..copies {
        w = kron(&w, &detector_for_photon(photon, n).analyzer());
    }
    let rotated = alice.matrix().conjugate_by(&w);
    let mut dist = BTreeMap::new();
    for index in 0..rotated.rows() {
        let p = rotated[(index, index)].re;
        if p.abs() < 1e-15 {
            continue;
        }
        *dist.entry(counts_of_index(index, n, copies)).or_insert(0.0) += p;
    }
    Ok(dist)
}

/// Total-variation distance between two count distributions.
pub fn total_variation(
    a: &BTreeMap<DetectorCounts, f64>,
    b: &BTreeMap<DetectorCounts, f64>,
) -> f64 {
    let mut keys: Vec<&DetectorCounts> = a.keys().chain(b.keys()).collect();
    keys.sort();
    keys.dedup();
    0.5 * keys
        .into_iter()
        .map(|k| (a.get(k).copied().unwrap_or(0.0) - b.get(k).copied().unwrap_or(0.0)).abs())
        .sum::<f64>()
}

/// Sampled statistics of one of Bob's outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct FlashBranch {
    pub bob_outcome: Polarization,
    pub probability: f64,
    pub expected: ExpectedCounts,
    pub trials: usize,
    /// Sampled mean count per analyzer (V, H, L, R).
    pub mean: [f64; 4],
    /// Binomial standard deviation of each sampled mean.
    pub sigma_of_mean: [f64; 4],
}

impl FlashBranch {
    /// Largest `|mean − expected| / σ` over the four analyzers; a beam whose
    /// count is deterministic must match exactly.
    pub fn max_sigma_deviation(&self) -> f64 {
        let e = self.expected.as_array();
        (0..4)
            .map(|k| {
                let diff = (self.mean[k] - e[k]).abs();
                if self.sigma_of_mean[k] > 0.0 {
                    diff / self.sigma_of_mean[k]
                } else if diff < 1e-12 {
                    0.0
                } else {
                    f64::INFINITY
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Exact-mode comparison of Bob's two bases.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactFlash {
    pub given_linear: BTreeMap<DetectorCounts, f64>,
    pub given_circular: BTreeMap<DetectorCounts, f64>,
    pub total_variation: f64,
    pub signaling: SignalingReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlashReport {
    pub config: FlashConfig,
    pub branches: Vec<FlashBranch>,
    /// Bob's basis drawn uniformly per trial, Alice sees the four counts.
    pub signaling: SignalingReport,
    /// Present when `4n` fits the exact cap.
    pub exact: Option<ExactFlash>,
}

pub fn run_flash(cfg: &FlashConfig) -> Result<FlashReport> {
    if cfg.n == 0 {
        bail!(Dimension, "FLASH needs at least one photon per beam");
    }
    if cfg.trials == 0 {
        bail!(Contract, "FLASH needs at least one trial");
    }
    let mut rng = random::substream(cfg.seed, 0);
    let outcomes = cfg.bob_choice.outcomes();
    let mut sums = [[0.0f64; 4]; 2];
    let mut hits = [0usize; 2];
    for _ in 0..cfg.trials {
        let (outcome, counts) = sample_trial(cfg.cloner, cfg.n, cfg.bob_choice, &mut rng);
        let slot = if outcome == outcomes[0] { 0 } else { 1 };
        hits[slot] += 1;
        for (s, c) in sums[slot].iter_mut().zip(counts.as_array()) {
            *s += c as f64;
        }
    }
    let nf = cfg.n as f64;
    let branches = outcomes
        .iter()
        .enumerate()
        .map(|(i, &o)| {
            let expected = expected_counts(cfg.cloner, cfg.n, o);
            let k = hits[i].max(1) as f64;
            let mean = sums[i].map(|s| s / k);
            let e = expected.as_array();
            let sigma_of_mean = e.map(|m| {
                let p = (m / nf).clamp(0.0, 1.0);
                libm::sqrt(nf * p * (1.0 - p) / k)
            });
            FlashBranch {
                bob_outcome: o,
                probability: bob_branch(o).0,
                expected,
                trials: hits[i],
                mean,
                sigma_of_mean,
            }
        })
        .collect();

    let mut rng = random::substream(cfg.seed, 1);
    let (cloner, n) = (cfg.cloner, cfg.n);
    let signaling = channel_capacity_estimate(
        |bit, rng| sample_trial(cloner, n, BobBasis::from_bit(bit), rng).1,
        cfg.trials,
        &mut rng,
    )?;

    let exact = if 4 * cfg.n <= EXACT_PHOTON_CAP {
        let given_linear = exact_count_distribution(cfg.cloner, cfg.n, BobBasis::Linear)?;
        let given_circular = exact_count_distribution(cfg.cloner, cfg.n, BobBasis::Circular)?;
        Some(ExactFlash {
            total_variation: total_variation(&given_linear, &given_circular),
            signaling: exact_signaling_report(&given_linear, &given_circular),
            given_linear,
            given_circular,
        })
    } else {
        None
    };

    Ok(FlashReport {
        config: cfg.clone(),
        branches,
        signaling,
        exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: ExpectedCounts, b: [f64; 4]) -> bool {
        a.as_array()
            .iter()
            .zip(b)
            .all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn four_branch_tables() {
        let n = 50;
        let f = n as f64;
        assert!(close(
            expected_counts(ClonerKind::Magic, n, Polarization::V),
            [f, 0.0, f / 2.0, f / 2.0]
        ));
        assert!(close(
            expected_counts(ClonerKind::Magic, n, Polarization::H),
            [0.0, f, f / 2.0, f / 2.0]
        ));
        // Bob finds R, photon 1 is left in L
        assert!(close(
            expected_counts(ClonerKind::Magic, n, Polarization::R),
            [f / 2.0, f / 2.0, f, 0.0]
        ));
        assert!(close(
            expected_counts(ClonerKind::Magic, n, Polarization::L),
            [f / 2.0, f / 2.0, 0.0, f]
        ));
    }

    #[test]
    fn source_has_both_forms() {
        for o in [
            Polarization::V,
            Polarization::H,
            Polarization::L,
            Polarization::R,
        ] {
            let (p, photon) = bob_branch(o);
            assert!((p - 0.5).abs() < 1e-15);
            let partner = match o {
                Polarization::V => Polarization::V,
                Polarization::H => Polarization::H,
                Polarization::R => Polarization::L,
                Polarization::L => Polarization::R,
            };
            assert!((inner(&partner.ket(), &photon).norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn linear_cloner_routes_agree() {
        for basis in [BobBasis::Linear, BobBasis::Circular] {
            let a = exact_count_distribution(ClonerKind::Linear, 1, basis).unwrap();
            let b = exact_count_distribution_density(1, basis).unwrap();
            assert!(total_variation(&a, &b) < 1e-12);
            assert!((a.values().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        let lin = exact_count_distribution(ClonerKind::Linear, 2, BobBasis::Linear).unwrap();
        let circ = exact_count_distribution(ClonerKind::Linear, 2, BobBasis::Circular).unwrap();
        assert!(total_variation(&lin, &circ) < 1e-12);
    }

    #[test]
    fn magic_cloner_separates_bases_exactly() {
        let lin = exact_count_distribution(ClonerKind::Magic, 2, BobBasis::Linear).unwrap();
        let circ = exact_count_distribution(ClonerKind::Magic, 2, BobBasis::Circular).unwrap();
        assert!(total_variation(&lin, &circ) > 0.5);
        assert!(matches!(
            exact_count_distribution(ClonerKind::Magic, 4, BobBasis::Linear),
            Err(crate::Error::SizeLimit(_))
        ));
    }

    #[test]
    fn ghz_sampler_matches_exact_marginals() {
        let mut rng = random::seeded(12);
        let n = 1;
        let exact = exact_count_distribution(ClonerKind::Linear, n, BobBasis::Circular).unwrap();
        let trials = 20_000;
        let mut hist: BTreeMap<DetectorCounts, usize> = BTreeMap::new();
        for _ in 0..trials {
            *hist
                .entry(sample_trial(ClonerKind::Linear, n, BobBasis::Circular, &mut rng).1)
                .or_insert(0) += 1;
        }
        for (k, &p) in &exact {
            let freq = *hist.get(k).unwrap_or(&0) as f64 / trials as f64;
            let sigma = libm::sqrt(p * (1.0 - p) / trials as f64);
            assert!(
                (freq - p).abs() < 5.0 * sigma + 1e-9,
                "{k:?}: {freq} vs {p}"
            );
        }
    }
}

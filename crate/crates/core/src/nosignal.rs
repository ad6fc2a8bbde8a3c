//! Executable form of the no-signaling theorem, and a mutual-information
//! estimator for protocol simulations driven by a binary choice on Bob's
//! side.
//!
//! Bipartite states are ordered (Alice, Bob): Alice is factor 0, Bob is
//! factor 1.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{bail, Result};
use crate::linalg::{ComplexMatrix, DimList};
use crate::measurement::{self, KrausChannel, MeasurementFamily};
use crate::random;
use crate::state::{trace_distance, DensityOperator};
use crate::TOLERANCE;

pub const ALICE: usize = 0;
pub const BOB: usize = 1;

/// An action Bob may take on his own factor.
#[derive(Debug, Clone)]
pub enum LocalOperation {
    Unitary {
        u: ComplexMatrix,
        target: usize,
    },
    NonselectiveMeasurement {
        family: MeasurementFamily,
        target: usize,
    },
    Kraus {
        channel: KrausChannel,
        target: usize,
    },
    /// Conditioning on one outcome; only meaningful together with a
    /// classical message, see [`conditional_marginal`].
    SelectiveMeasurement {
        projector: ComplexMatrix,
        target: usize,
    },
}

impl LocalOperation {
    pub fn target(&self) -> usize {
        match self {
            Self::Unitary { target, .. }
            | Self::NonselectiveMeasurement { target, .. }
            | Self::Kraus { target, .. }
            | Self::SelectiveMeasurement { target, .. } => *target,
        }
    }

    pub fn kind(&self) -> OperationKind {
        match self {
            Self::Unitary { .. } => OperationKind::Unitary,
            Self::NonselectiveMeasurement { .. } => OperationKind::NonselectiveMeasurement,
            Self::Kraus { .. } => OperationKind::Kraus,
            Self::SelectiveMeasurement { .. } => OperationKind::SelectiveMeasurement,
        }
    }

    /// Applies a nonselective operation to the joint state.
    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        match self {
            Self::Unitary { u, target } => measurement::apply_local_unitary(rho, u, *target),
            Self::NonselectiveMeasurement { family, target } => {
                measurement::measure_nonselective(rho, family, *target)
            }
            Self::Kraus { channel, target } => measurement::apply_kraus(rho, channel, *target),
            Self::SelectiveMeasurement { .. } => bail!(
                Unsupported,
                "a selective measurement has no unconditional output; use conditional_marginal"
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OperationKind {
    Unitary,
    NonselectiveMeasurement,
    Kraus,
    SelectiveMeasurement,
}

fn require_bipartite_bob(rho: &DensityOperator, target: usize) -> Result<()> {
    if rho.dims().len() != 2 {
        bail!(
            Dimension,
            "expected a bipartite state, got {} factors",
            rho.dims().len()
        );
    }
    if target != BOB {
        bail!(
            Dimension,
            "operation targets factor {} but Bob holds factor 2",
            target + 1
        );
    }
    Ok(())
}

/// Trace distance between Alice's reduced state before and after Bob's
/// operation.
pub fn marginal_invariance(rho12: &DensityOperator, op: &LocalOperation) -> Result<f64> {
    require_bipartite_bob(rho12, op.target())?;
    let after = op.apply(rho12)?;
    trace_distance(&rho12.reduced(&[ALICE])?, &after.reduced(&[ALICE])?)
}

/// Probability of Bob's outcome `projector` and Alice's state conditioned
/// on it.
pub fn conditional_marginal(
    rho12: &DensityOperator,
    projector: &ComplexMatrix,
) -> Result<(f64, DensityOperator)> {
    require_bipartite_bob(rho12, BOB)?;
    let (p, post) = measurement::measure_selective(rho12, projector, BOB)?;
    Ok((p, post.reduced(&[ALICE])?))
}

/// Uniformly chosen random nonselective operation on a `d`-level factor.
pub fn random_local_operation<R: Rng + ?Sized>(
    d: usize,
    target: usize,
    rng: &mut R,
) -> LocalOperation {
    match rng.random_range(0..3) {
        0 => LocalOperation::Unitary {
            u: random::haar_unitary(d, rng),
            target,
        },
        1 => LocalOperation::NonselectiveMeasurement {
            family: random::random_projective_family(d, rng),
            target,
        },
        _ => {
            let k = rng.random_range(1..=4);
            LocalOperation::Kraus {
                channel: random::random_kraus_channel(d, k, rng),
                target,
            }
        }
    }
}

/// Largest marginal change seen in a random sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub trials: usize,
    pub max_deviation: f64,
    pub max_by_kind: BTreeMap<OperationKind, f64>,
    pub count_by_kind: BTreeMap<OperationKind, usize>,
}

/// Random bipartite states with factor dimensions in `dims_range` (or the
/// fixed `dims`), random nonselective operations on Bob's factor.
pub fn nosignal_sweep<R: Rng + ?Sized>(
    trials: usize,
    dims: SweepDims,
    rng: &mut R,
) -> Result<SweepReport> {
    let mut max_by_kind = BTreeMap::new();
    let mut count_by_kind = BTreeMap::new();
    let mut max_deviation: f64 = 0.0;
    for i in 0..trials {
        let (da, db) = dims.draw(rng);
        let dl = DimList::new([da, db])?;
        // alternate pure (maximally structured entanglement) and full-rank mixed
        let rho = if i % 2 == 0 {
            random::random_state(dl, rng).density()
        } else {
            random::random_density(dl, rng)
        };
        let op = random_local_operation(db, BOB, rng);
        let dev = marginal_invariance(&rho, &op)?;
        max_deviation = max_deviation.max(dev);
        let slot = max_by_kind.entry(op.kind()).or_insert(0.0_f64);
        *slot = slot.max(dev);
        *count_by_kind.entry(op.kind()).or_insert(0) += 1;
    }
    Ok(SweepReport {
        trials,
        max_deviation,
        max_by_kind,
        count_by_kind,
    })
}

/// Factor dimensions for [`nosignal_sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepDims {
    Fixed(usize, usize),
    /// Each factor drawn uniformly from `lo..=hi`.
    Range(usize, usize),
}

impl SweepDims {
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> (usize, usize) {
        match *self {
            Self::Fixed(a, b) => (a, b),
            Self::Range(lo, hi) => (rng.random_range(lo..=hi), rng.random_range(lo..=hi)),
        }
    }
}

/// Result of a signaling test.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalingReport {
    /// Total-variation distance between Alice's outcome distributions under
    /// Bob's two choices (empirical for sampled runs, exact otherwise).
    pub deviation: f64,
    /// Plug-in estimate, clamped at zero.
    pub mutual_information_bits: f64,
    /// Miller–Madow first-order bias of the plug-in estimate, in bits.
    pub bias_bits: f64,
    pub trials: usize,
    /// Number of distinct Alice outcomes observed.
    pub outcomes: usize,
    /// Set when the sampler produced a single outcome.
    pub degenerate: bool,
}

pub const MIN_TRIALS: usize = 1000;

/// Binary-choice mutual information between Bob's choice, drawn uniformly
/// per trial, and the outcome `sampler(choice, rng)` seen by Alice.
pub fn channel_capacity_estimate<O, F, R>(
    mut sampler: F,
    trials: usize,
    rng: &mut R,
) -> Result<SignalingReport>
where
    O: Ord,
    F: FnMut(bool, &mut R) -> O,
    R: Rng + ?Sized,
{
    if trials < MIN_TRIALS {
        bail!(
            Contract,
            "capacity estimate needs at least {MIN_TRIALS} trials, got {trials}"
        );
    }
    let mut counts = OutcomeCounts::new();
    for _ in 0..trials {
        let choice: bool = rng.random();
        counts.record(choice, sampler(choice, rng));
    }
    Ok(counts.report())
}

/// Joint (choice, outcome) histogram. Histograms from independent workers
/// merge additively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeCounts<O: Ord> {
    table: BTreeMap<O, [u64; 2]>,
}

impl<O: Ord> Default for OutcomeCounts<O> {
    fn default() -> Self {
        Self::new()
    }
}

impl<O: Ord> OutcomeCounts<O> {
    pub fn new() -> Self {
        Self {
            table: BTreeMap::new(),
        }
    }

    pub fn record(&mut self, choice: bool, outcome: O) {
        self.table.entry(outcome).or_insert([0, 0])[choice as usize] += 1;
    }

    pub fn merge(&mut self, other: Self) {
        for (o, [a, b]) in other.table {
            let slot = self.table.entry(o).or_insert([0, 0]);
            slot[0] += a;
            slot[1] += b;
        }
    }

    pub fn total(&self) -> u64 {
        self.table.values().map(|[a, b]| a + b).sum()
    }

    pub fn report(&self) -> SignalingReport {
        let n = self.total();
        let outcomes = self.table.len();
        let weights: Vec<[f64; 2]> = self
            .table
            .values()
            .map(|&[a, b]| [a as f64, b as f64])
            .collect();
        let (mi, tv) = joint_statistics(&weights);
        let occupied = |col: usize| weights.iter().filter(|w| w[col] > 0.0).count();
        let joint_cells = weights
            .iter()
            .flat_map(|w| w.iter())
            .filter(|&&x| x > 0.0)
            .count();
        let choices = (occupied(0) > 0) as usize + (occupied(1) > 0) as usize;
        // Miller–Madow: bias(I) ≈ (K_xy − K_x − K_y + 1) / (2 n ln 2)
        let bias = if n == 0 {
            0.0
        } else {
            (joint_cells as f64 - outcomes as f64 - choices as f64 + 1.0).max(0.0)
                / (2.0 * n as f64 * core::f64::consts::LN_2)
        };
        let degenerate = outcomes <= 1;
        SignalingReport {
            deviation: if degenerate { 0.0 } else { tv },
            mutual_information_bits: if degenerate { 0.0 } else { mi },
            bias_bits: bias,
            trials: n as usize,
            outcomes,
            degenerate,
        }
    }
}

/// Mutual information (bits) and conditional total-variation distance from
/// nonnegative joint weights `w[outcome][choice]`.
fn joint_statistics(weights: &[[f64; 2]]) -> (f64, f64) {
    let total: f64 = weights.iter().map(|w| w[0] + w[1]).sum();
    if total <= 0.0 {
        return (0.0, 0.0);
    }
    let col = [
        weights.iter().map(|w| w[0]).sum::<f64>(),
        weights.iter().map(|w| w[1]).sum::<f64>(),
    ];
    let mut mi = 0.0;
    let mut tv = 0.0;
    for w in weights {
        let row = w[0] + w[1];
        for c in 0..2 {
            if w[c] > 0.0 {
                mi += (w[c] / total) * libm::log2(w[c] * total / (row * col[c]));
            }
        }
        if col[0] > 0.0 && col[1] > 0.0 {
            tv += (w[0] / col[0] - w[1] / col[1]).abs();
        }
    }
    (mi.max(0.0), 0.5 * tv)
}

/// Exact report from Alice's outcome distributions under each choice, with
/// the choice uniform.
pub fn exact_signaling_report<O: Ord + Clone>(
    given_false: &BTreeMap<O, f64>,
    given_true: &BTreeMap<O, f64>,
) -> SignalingReport {
    let mut table: BTreeMap<O, [f64; 2]> = BTreeMap::new();
    for (o, &p) in given_false {
        table.entry(o.clone()).or_insert([0.0, 0.0])[0] += 0.5 * p;
    }
    for (o, &p) in given_true {
        table.entry(o.clone()).or_insert([0.0, 0.0])[1] += 0.5 * p;
    }
    let weights: Vec<[f64; 2]> = table.values().copied().collect();
    let (mi, tv) = joint_statistics(&weights);
    let outcomes = weights
        .iter()
        .filter(|w| w[0] + w[1] > TOLERANCE * TOLERANCE)
        .count();
    SignalingReport {
        deviation: tv,
        mutual_information_bits: mi,
        bias_bits: 0.0,
        trials: 0,
        outcomes,
        degenerate: outcomes <= 1,
    }
}

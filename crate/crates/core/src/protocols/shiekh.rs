//! Shiekh's single-particle proposal, as a three-mode model: the left
//! packet, and the two arms of the interferometer on the right.
//!
//! The right packet enters arm `a`, meets a beam splitter
//! `(1/√2)[[1, i], [i, 1]]`, optionally picks up a π phase in arm `b`,
//! and meets a second identical splitter. Output port `a` runs to the side
//! of the counter, port `b` into it.

use core::f64::consts::FRAC_1_SQRT_2;

use crate::linalg::{c64, Complex64, ComplexMatrix};

pub fn beam_splitter() -> ComplexMatrix {
    let s = FRAC_1_SQRT_2;
    ComplexMatrix::from_rows(&[&[c64(s, 0.0), c64(0.0, s)], &[c64(0.0, s), c64(s, 0.0)]])
}

/// Amplitudes `(left, right-side, right-center)` at the detection time.
pub fn output_amplitudes(phase_inserted: bool) -> [Complex64; 3] {
    let s = FRAC_1_SQRT_2;
    let bs = beam_splitter();
    let after_first = bs.apply(&[c64(s, 0.0), c64(0.0, 0.0)]);
    let phase = if phase_inserted {
        c64(-1.0, 0.0)
    } else {
        c64(1.0, 0.0)
    };
    let arms = [after_first[0], after_first[1] * phase];
    let out = bs.apply(&arms);
    [c64(s, 0.0), out[0], out[1]]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiekhReport {
    pub phase_inserted: bool,
    /// The central counter on the right fires.
    pub p_center: f64,
    pub p_left: f64,
    /// Probabilities over the right region, `[side, center]`.
    pub right_distribution: [f64; 2],
    /// Total probability on the right.
    pub right_norm: f64,
}

pub fn run_shiekh(phase_inserted: bool) -> ShiekhReport {
    let [left, side, center] = output_amplitudes(phase_inserted);
    let right_distribution = [side.norm_sqr(), center.norm_sqr()];
    ShiekhReport {
        phase_inserted,
        p_center: center.norm_sqr(),
        p_left: left.norm_sqr(),
        right_distribution,
        right_norm: right_distribution[0] + right_distribution[1],
    }
}

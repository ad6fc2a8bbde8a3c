//! Greenberger's phase-shifter proposal and the two-spin version of its
//! key step.
//!
//! Factors: photon 1 (`h` = 0, `g` = 1), photon 2 (`d′` = 0, `c′` = 1)
//! and the macroscopic phase shifter (`u` = 0, `v` = 1). Only the pairs
//! `(h, d′)` and `(g, c′)` occur. The arm phase `α` is fixed by the
//! preparation; `β` (accumulated by the shifter Hamiltonian) and `γ` are
//! under the sender's control.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;

use crate::error::{bail, Result};
use crate::linalg::{apply_local, c64, pauli, Complex64, ComplexMatrix, DimList};
use crate::nosignal::{channel_capacity_estimate, exact_signaling_report, SignalingReport};
use crate::random;
use crate::state::{born_probability, named, trace_distance, QuantumState};

const PHOTON1: usize = 0;
const SHIFTER: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenbergerConfig {
    pub phase_alpha: f64,
    pub phase_beta: f64,
    pub phase_gamma: f64,
    /// `true` replaces the nonunitary `T` by the unitary `diag(1, e^{iγ})`.
    pub legal_evolution: bool,
}

/// Probabilities of the two coincidence channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorPair {
    pub h_dprime: f64,
    pub g_cprime: f64,
}

impl DetectorPair {
    fn distribution(&self) -> BTreeMap<u8, f64> {
        let mut m = BTreeMap::new();
        m.insert(0, self.h_dprime);
        m.insert(1, self.g_cprime);
        m
    }
}

fn dims() -> DimList {
    DimList::uniform(2, 3)
}

/// Photon-shifter state at `β = 0`:
/// `½[(−e^{iα} h d′ + e^{−iα} g c′) u + (e^{iα} g c′ − e^{−iα} h d′) v]`.
pub fn prepared_state(alpha: f64) -> QuantumState {
    let e = |x: f64| c64(libm::cos(x), libm::sin(x));
    let mut amps = vec![c64(0.0, 0.0); 8];
    // index = photon1*4 + photon2*2 + shifter
    amps[0] = -e(alpha) * 0.5; // h d′ u
    amps[6] = e(-alpha) * 0.5; // g c′ u
    amps[7] = e(alpha) * 0.5; // g c′ v
    amps[1] = -e(-alpha) * 0.5; // h d′ v
    QuantumState::new(amps, dims()).expect("normalized")
}

/// Shifter Hamiltonian evolution, `diag(e^{iβ}, e^{−iβ})` on `{u, v}`.
pub fn shifter_evolution(beta: f64) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&[
        c64(libm::cos(beta), libm::sin(beta)),
        c64(libm::cos(beta), -libm::sin(beta)),
    ])
}

/// Unitary stand-in for turning the Hamiltonian off on `v`.
pub fn legal_transformation(gamma: f64) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&[c64(1.0, 0.0), c64(libm::cos(gamma), libm::sin(gamma))])
}

/// `T|u⟩ = |u⟩`, `T|v⟩ = e^{iγ}|u⟩`: rank one, not unitary.
pub fn illegal_transformation(gamma: f64) -> ComplexMatrix {
    let mut t = ComplexMatrix::zeros(2, 2);
    t[(0, 0)] = c64(1.0, 0.0);
    t[(0, 1)] = c64(libm::cos(gamma), libm::sin(gamma));
    t
}

/// Final photon-shifter state. The illegal branch is renormalized after
/// `T`; it fails when `T` annihilates the state.
pub fn final_state(cfg: &GreenbergerConfig) -> Result<QuantumState> {
    let pre = prepared_state(cfg.phase_alpha);
    let evolved = apply_local(
        pre.amplitudes(),
        &dims(),
        SHIFTER,
        &shifter_evolution(cfg.phase_beta),
    )?;
    if cfg.legal_evolution {
        let out = apply_local(
            &evolved,
            &dims(),
            SHIFTER,
            &legal_transformation(cfg.phase_gamma),
        )?;
        QuantumState::new(out, dims())
    } else {
        let out = apply_local(
            &evolved,
            &dims(),
            SHIFTER,
            &illegal_transformation(cfg.phase_gamma),
        )?;
        let norm = crate::linalg::norm(&out);
        if norm < 1e-12 {
            bail!(Unsupported, "T annihilates the state at these phases");
        }
        QuantumState::normalize(out, dims())
    }
}

fn pair_probabilities(state: &QuantumState) -> Result<DetectorPair> {
    let h = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
    let dims = state.dims();
    let p_h = born_probability(state, &crate::linalg::embed(&h, dims, PHOTON1)?)?;
    Ok(DetectorPair {
        h_dprime: p_h,
        g_cprime: 1.0 - p_h,
    })
}

pub fn detector_probabilities(cfg: &GreenbergerConfig) -> Result<DetectorPair> {
    pair_probabilities(&final_state(cfg)?)
}

/// Closed form after renormalization:
/// `P(h,d′) ∝ cos²(α+β−γ/2)`, `P(g,c′) ∝ cos²(β−α−γ/2)`.
pub fn illegal_closed_form(alpha: f64, beta: f64, gamma: f64) -> Option<DetectorPair> {
    let a = libm::cos(alpha + beta - gamma / 2.0).powi(2);
    let b = libm::cos(beta - alpha - gamma / 2.0).powi(2);
    if a + b < 1e-24 {
        return None;
    }
    Some(DetectorPair {
        h_dprime: a / (a + b),
        g_cprime: b / (a + b),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreenbergerReport {
    pub config: GreenbergerConfig,
    pub probabilities: DetectorPair,
    /// Largest change of the photons' reduced state (trace distance) and
    /// of the pair probabilities over a sweep of the sender's phases.
    pub marginal_deviation: f64,
    pub sweep_points: usize,
    /// Sender toggles `γ` and `γ + π`.
    pub signaling: SignalingReport,
    pub sampled_signaling: Option<SignalingReport>,
}

/// Sender phases `(β, γ)` for the sweep: `points` evenly spaced pairs.
pub fn phase_sweep(points: usize) -> Vec<(f64, f64)> {
    (0..points)
        .map(|k| {
            let t = k as f64 / points as f64;
            (2.0 * PI * t, 2.0 * PI * libm::fmod(3.0 * t + 0.17, 1.0))
        })
        .collect()
}

fn photon_marginal(state: &QuantumState) -> Result<crate::state::DensityOperator> {
    state.density().reduced(&[0, 1])
}

pub fn run_greenberger(cfg: &GreenbergerConfig, sweep_points: usize) -> Result<GreenbergerReport> {
    let probabilities = detector_probabilities(cfg)?;
    let reference_state = final_state(cfg)?;
    let reference = photon_marginal(&reference_state)?;
    let mut marginal_deviation: f64 = 0.0;
    for (beta, gamma) in phase_sweep(sweep_points) {
        let c = GreenbergerConfig {
            phase_beta: beta,
            phase_gamma: gamma,
            ..*cfg
        };
        let Ok(s) = final_state(&c) else { continue };
        let p = pair_probabilities(&s)?;
        marginal_deviation = marginal_deviation
            .max(trace_distance(&reference, &photon_marginal(&s)?)?)
            .max((p.h_dprime - probabilities.h_dprime).abs());
    }
    let toggled = detector_probabilities(&GreenbergerConfig {
        phase_gamma: cfg.phase_gamma + PI,
        ..*cfg
    })?;
    let signaling = exact_signaling_report(&probabilities.distribution(), &toggled.distribution());
    Ok(GreenbergerReport {
        config: *cfg,
        probabilities,
        marginal_deviation,
        sweep_points,
        signaling,
        sampled_signaling: None,
    })
}

/// Adds a sampled estimate of the toggle channel.
pub fn run_greenberger_sampled(
    cfg: &GreenbergerConfig,
    sweep_points: usize,
    trials: usize,
    seed: u64,
) -> Result<GreenbergerReport> {
    let mut report = run_greenberger(cfg, sweep_points)?;
    let p0 = report.probabilities.h_dprime;
    let p1 = detector_probabilities(&GreenbergerConfig {
        phase_gamma: cfg.phase_gamma + PI,
        ..*cfg
    })?
    .h_dprime;
    let mut rng = random::seeded(seed);
    report.sampled_signaling = Some(channel_capacity_estimate(
        |bit, rng| rng.random::<f64>() < if bit { p1 } else { p0 },
        trials,
        &mut rng,
    )?);
    Ok(report)
}

/// `T|↓⟩ = |↓⟩`, `T|↑⟩ = e^{iγ}|↓⟩` on particle 2 (basis `↑` = 0).
pub fn epr_transformation(gamma: f64) -> ComplexMatrix {
    let mut t = ComplexMatrix::zeros(2, 2);
    t[(1, 0)] = c64(libm::cos(gamma), libm::sin(gamma));
    t[(1, 1)] = c64(1.0, 0.0);
    t
}

/// Probability that Alice's `σ·d`, `d = (cos γ, sin γ, 0)`, gives −1 on
/// particle 1 of the singlet, with or without Bob applying `T`.
pub fn run_epr_rotation(gamma: f64, apply_t: bool) -> Result<f64> {
    let singlet = named::singlet();
    let dims = singlet.dims().clone();
    let state = if apply_t {
        let out = apply_local(singlet.amplitudes(), &dims, 1, &epr_transformation(gamma))?;
        QuantumState::normalize(out, dims.clone())?
    } else {
        singlet
    };
    let sigma_d = pauli::along([libm::cos(gamma), libm::sin(gamma), 0.0]);
    let minus = (&ComplexMatrix::identity(2) - &sigma_d).scale_real(0.5);
    born_probability(&state, &crate::linalg::embed(&minus, &dims, 0)?)
}

/// Alice's particle after `T`, `(|↑⟩ − e^{iγ}|↓⟩)/√2`.
pub fn epr_alice_after_t(gamma: f64) -> [Complex64; 2] {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    [c64(s, 0.0), -c64(libm::cos(gamma), libm::sin(gamma)) * s]
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_PI_2;

    fn cfg(alpha: f64, beta: f64, gamma: f64, legal: bool) -> GreenbergerConfig {
        GreenbergerConfig {
            phase_alpha: alpha,
            phase_beta: beta,
            phase_gamma: gamma,
            legal_evolution: legal,
        }
    }

    #[test]
    fn illegal_t_matches_closed_form() {
        for &(a, b, g) in &[
            (0.3, 0.1, 0.7),
            (1.0, -0.4, 2.2),
            (0.0, 0.0, 0.0),
            (0.25, 1.9, -1.1),
        ] {
            let num = detector_probabilities(&cfg(a, b, g, false)).unwrap();
            let exact = illegal_closed_form(a, b, g).unwrap();
            assert!((num.h_dprime - exact.h_dprime).abs() < 1e-12);
        }
        let p = detector_probabilities(&cfg(0.0, 0.0, 0.0, false)).unwrap();
        assert!((p.h_dprime - 0.5).abs() < 1e-12);
    }

    #[test]
    fn illegal_t_can_silence_a_channel() {
        // α + β − γ/2 = π/2
        let p = detector_probabilities(&cfg(0.4, FRAC_PI_2 - 0.4 + 0.3, 0.6, false)).unwrap();
        assert!(p.h_dprime < 1e-12 && (p.g_cprime - 1.0).abs() < 1e-12);
    }

    #[test]
    fn legal_evolution_is_phase_blind() {
        let rep = run_greenberger(&cfg(0.7, 0.2, 1.3, true), 10).unwrap();
        assert!(rep.marginal_deviation < 1e-12);
        assert!(rep.signaling.mutual_information_bits < 1e-12);
        let p = rep.probabilities;
        assert!((p.h_dprime - 0.5).abs() < 1e-12);
    }

    #[test]
    fn illegal_toggle_signals_one_bit() {
        let alpha = core::f64::consts::FRAC_PI_4;
        let rep = run_greenberger(&cfg(alpha, FRAC_PI_2 - alpha, 0.0, false), 10).unwrap();
        assert!((rep.signaling.mutual_information_bits - 1.0).abs() < 1e-9);
    }

    #[test]
    fn epr_rotation_examples() {
        assert!((run_epr_rotation(0.0, true).unwrap() - 1.0).abs() < 1e-12);
        assert!((run_epr_rotation(PI / 3.0, true).unwrap() - 1.0).abs() < 1e-12);
        for g in [0.0, 0.4, PI / 3.0, 2.5] {
            assert!((run_epr_rotation(g, false).unwrap() - 0.5).abs() < 1e-12);
        }
    }
}

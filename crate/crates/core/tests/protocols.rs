use std::f64::consts::{FRAC_1_SQRT_2, PI};

use qsignal_core::measurement::{sample_way_trial, way_obstruction, WaySetup};
use qsignal_core::nosignal::{nosignal_sweep, SweepDims};
use qsignal_core::protocols::cloning::{cloning_residual, linearity_extension};
use qsignal_core::protocols::flash::{
    exact_count_distribution, exact_count_distribution_density, run_flash, total_variation,
    BobBasis, ClonerKind, FlashConfig, Polarization,
};
use qsignal_core::protocols::greenberger::{
    detector_probabilities, illegal_closed_form, run_epr_rotation, run_greenberger,
    run_greenberger_sampled, GreenbergerConfig,
};
use qsignal_core::protocols::popper::{run_popper, PopperConfig};
use qsignal_core::protocols::shiekh::run_shiekh;
use qsignal_core::protocols::wigner::wigner_count;
use qsignal_core::{c64, linalg::pauli, random, Complex64, ComplexMatrix, QuantumState};

#[test]
fn nosignal_over_random_dimensions() {
    let mut rng = random::seeded(1);
    let rep = nosignal_sweep(1000, SweepDims::Range(2, 4), &mut rng).unwrap();
    assert_eq!(rep.trials, 1000);
    assert!(rep.max_deviation <= 1e-10, "{}", rep.max_deviation);
    assert!(rep.count_by_kind.len() >= 3);
}

#[test]
fn magic_flash_tables_and_signal() {
    for basis in [BobBasis::Linear, BobBasis::Circular] {
        let rep = run_flash(&FlashConfig {
            n: 50,
            cloner: ClonerKind::Magic,
            bob_choice: basis,
            trials: 10_000,
            seed: 7,
        })
        .unwrap();
        for b in &rep.branches {
            assert!(
                b.max_sigma_deviation() <= 3.0,
                "{:?}: {}",
                b.bob_outcome,
                b.max_sigma_deviation()
            );
            assert!(b.trials > 4000);
        }
        assert!(rep.signaling.mutual_information_bits >= 0.9);
        assert!(rep.exact.is_none());
    }
}

#[test]
fn linear_flash_is_silent() {
    let rep = run_flash(&FlashConfig {
        n: 1,
        cloner: ClonerKind::Linear,
        bob_choice: BobBasis::Linear,
        trials: 100_000,
        seed: 3,
    })
    .unwrap();
    let exact = rep.exact.as_ref().unwrap();
    assert!(exact.total_variation <= 1e-10);
    assert!(exact.signaling.mutual_information_bits <= 1e-10);
    assert!(
        rep.signaling.mutual_information_bits <= 0.01,
        "{}",
        rep.signaling.mutual_information_bits
    );
    for b in &rep.branches {
        assert!(b.max_sigma_deviation() <= 3.5);
    }
}

#[test]
fn linear_distributions_agree_across_routes() {
    for n in 1..=2 {
        for basis in [BobBasis::Linear, BobBasis::Circular] {
            let dense = exact_count_distribution(ClonerKind::Linear, n, basis).unwrap();
            let dm = exact_count_distribution_density(n, basis).unwrap();
            assert!(total_variation(&dense, &dm) <= 1e-12);
            let mass: f64 = dense.values().sum();
            assert!((mass - 1.0).abs() <= 1e-12);
            // a beam of n photons never registers more than n clicks
            assert!(dense
                .keys()
                .all(|c| c.as_array().iter().all(|&k| k as usize <= n)));
        }
        let lin = exact_count_distribution(ClonerKind::Linear, n, BobBasis::Linear).unwrap();
        let circ = exact_count_distribution(ClonerKind::Linear, n, BobBasis::Circular).unwrap();
        assert!(total_variation(&lin, &circ) <= 1e-10);
        let lin = exact_count_distribution(ClonerKind::Magic, n, BobBasis::Linear).unwrap();
        let circ = exact_count_distribution(ClonerKind::Magic, n, BobBasis::Circular).unwrap();
        assert!(total_variation(&lin, &circ) > 0.3);
    }
}

#[test]
fn circular_states_are_orthogonal() {
    let l = Polarization::L.ket();
    let r = Polarization::R.ket();
    let ip: Complex64 = l.iter().zip(&r).map(|(a, b)| a.conj() * b).sum();
    assert!(ip.norm() < 1e-15);
}

fn qubit(a: f64, b: f64) -> QuantumState {
    QuantumState::from_amplitudes(vec![c64(a, 0.0), c64(b, 0.0)]).unwrap()
}

#[test]
fn cloning_residual_for_v_and_r() {
    let v = qubit(1.0, 0.0);
    let r = qubit(FRAC_1_SQRT_2, FRAC_1_SQRT_2);
    assert!((cloning_residual(&v, &r).unwrap() - (FRAC_1_SQRT_2 - 0.5)).abs() <= 1e-12);
    assert!(cloning_residual(&v, &qubit(0.0, 1.0)).unwrap().abs() <= 1e-15);
    assert!(cloning_residual(&v, &v).unwrap().abs() <= 1e-15);
}

#[test]
fn linearity_fidelity_against_direct_overlap() {
    let input = qubit(FRAC_1_SQRT_2, FRAC_1_SQRT_2);
    let mut last = f64::INFINITY;
    for m in 1..=3usize {
        let ext = linearity_extension(&input, m).unwrap();
        // ⟨R^⊗m| has every amplitude (1/√2)^m; the output has weight on the
        // two extreme basis states only
        let amp = FRAC_1_SQRT_2.powi(m as i32);
        let out = ext.state.amplitudes();
        let overlap: Complex64 = out.iter().map(|a| a * amp).sum();
        let direct = overlap.norm_sqr();
        assert!((ext.fidelity_to_magic - direct).abs() <= 1e-12);
        assert!((ext.fidelity_to_magic - 2f64.powi(1 - m as i32)).abs() <= 1e-12);
        assert!(ext.fidelity_to_magic < last || m == 1);
        last = ext.fidelity_to_magic;
    }
    assert!((linearity_extension(&input, 2).unwrap().fidelity_to_magic - 0.5).abs() <= 1e-12);
}

#[test]
fn greenberger_illegal_channel() {
    for (alpha, beta) in [(0.3, 0.4), (1.0, -0.2), (PI / 4.0, 0.1)] {
        let gamma = 2.0 * (alpha + beta - PI / 2.0);
        let cfg = GreenbergerConfig {
            phase_alpha: alpha,
            phase_beta: beta,
            phase_gamma: gamma,
            legal_evolution: false,
        };
        let p = detector_probabilities(&cfg).unwrap();
        assert!((p.g_cprime - 1.0).abs() <= 1e-10);
        let rep = run_greenberger_sampled(&cfg, 10, 10_000, 5).unwrap();
        assert!(rep.signaling.deviation >= 0.1);
        // the toggle swaps the channels completely only at α = π/4
        if (alpha - PI / 4.0).abs() < 1e-12 {
            assert!(rep.signaling.mutual_information_bits >= 0.9);
            assert!(rep.sampled_signaling.unwrap().mutual_information_bits >= 0.9);
        }
    }
    let annihilated = GreenbergerConfig {
        phase_alpha: 0.0,
        phase_beta: 0.0,
        phase_gamma: -PI,
        legal_evolution: false,
    };
    assert!(detector_probabilities(&annihilated).is_err());
    let p = detector_probabilities(&GreenbergerConfig {
        phase_alpha: 0.2,
        phase_beta: 0.7,
        phase_gamma: 1.1,
        legal_evolution: false,
    })
    .unwrap();
    let c = illegal_closed_form(0.2, 0.7, 1.1).unwrap();
    assert!((p.h_dprime - c.h_dprime).abs() <= 1e-12);
}

#[test]
fn greenberger_legal_is_blind() {
    let cfg = GreenbergerConfig {
        phase_alpha: 0.3,
        phase_beta: 0.0,
        phase_gamma: 0.0,
        legal_evolution: true,
    };
    let rep = run_greenberger(&cfg, 10).unwrap();
    assert!(rep.marginal_deviation <= 1e-10);
    assert!(rep.signaling.mutual_information_bits <= 1e-10);
    let rep = run_greenberger_sampled(&cfg, 10, 10_000, 5).unwrap();
    assert!(rep.sampled_signaling.unwrap().mutual_information_bits <= 0.01);
}

#[test]
fn epr_rotation() {
    for g in [0.0, 0.4, 1.3, PI] {
        assert!((run_epr_rotation(g, true).unwrap() - 1.0).abs() <= 1e-10);
        assert!((run_epr_rotation(g, false).unwrap() - 0.5).abs() <= 1e-10);
    }
}

#[test]
fn popper_marginal_is_unmoved() {
    let rep = run_popper(&PopperConfig::standard(128, 4.0)).unwrap();
    assert!(rep.sup_deviation <= 1e-10, "{}", rep.sup_deviation);
    assert!(rep.bob_spread.1 > rep.bob_spread.0);
}

#[test]
fn shiekh_counters() {
    let off = run_shiekh(false);
    let on = run_shiekh(true);
    for r in [&off, &on] {
        assert!((r.p_left - 0.5).abs() <= 1e-10);
        assert!((r.right_norm - 0.5).abs() <= 1e-10);
    }
    assert!((on.p_center - off.p_center).abs() >= 0.4);
}

#[test]
fn wigner_examples() {
    let c = wigner_count(10, 10);
    assert_eq!((c.equations, c.unknowns), (1000, 120));
    assert!(!wigner_count(2, 1).overdetermined);
}

#[test]
fn way_bound_over_random_unitaries() {
    let mut rng = random::seeded(10);
    let mut worst: f64 = f64::INFINITY;
    for _ in 0..1000 {
        let t = sample_way_trial(13, &mut rng).unwrap();
        assert!(t.commutator_norm <= 1e-9);
        assert!(t.distortion >= t.bound, "{t:?}");
        worst = worst.min(t.distortion - t.bound);
    }
    assert!(worst.is_finite());
}

#[test]
fn way_obstruction_for_x_under_z() {
    let setup = WaySetup {
        system_observable: pauli::x(),
        system_charge: pauli::z(),
        apparatus_charge: ComplexMatrix::zeros(2, 2),
        apparatus_l2_mean: 1.0,
    };
    assert!(way_obstruction(&setup).unwrap() > 0.0);
}

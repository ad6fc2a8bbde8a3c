use proptest::prelude::*;

use qsignal_core::linalg::decomp;
use qsignal_core::measurement::{self, MeasurementFamily};
use qsignal_core::nosignal::{self, exact_signaling_report, OutcomeCounts};
use qsignal_core::random;
use qsignal_core::state::{self, DensityOperator};
use qsignal_core::{kron, partial_trace, DimList, TOLERANCE};

fn dims2() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=4, 1usize..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn trace_is_cyclic(seed: u64, n in 1usize..=6) {
        let mut rng = random::seeded(seed);
        let a = random::ginibre(n, n, &mut rng);
        let b = random::ginibre(n, n, &mut rng);
        prop_assert!((a.matmul(&b).trace() - b.matmul(&a).trace()).norm() <= TOLERANCE);
    }

    #[test]
    fn trace_is_basis_independent(seed: u64, n in 1usize..=6) {
        let mut rng = random::seeded(seed);
        let a = random::ginibre(n, n, &mut rng);
        let u = random::haar_unitary(n, &mut rng);
        let v = random::haar_unitary(n, &mut rng);
        let t1 = a.conjugate_by(&u.adjoint()).trace();
        let t2 = a.conjugate_by(&v.adjoint()).trace();
        prop_assert!((t1 - t2).norm() <= TOLERANCE);
    }

    #[test]
    fn partial_trace_of_product((d1, d2) in dims2(), seed: u64) {
        let mut rng = random::seeded(seed);
        let r1 = random::random_density(DimList::single(d1), &mut rng);
        let r2 = random::random_density(DimList::single(d2), &mut rng);
        let dims = DimList::new([d1, d2]).unwrap();
        let got = partial_trace(&kron(r1.matrix(), r2.matrix()), &dims, &[1]).unwrap();
        prop_assert!(got.approx_eq(r2.matrix(), TOLERANCE));
    }

    #[test]
    fn kron_is_associative(seed: u64, a in 1usize..=3, b in 1usize..=3, c in 1usize..=3) {
        let mut rng = random::seeded(seed);
        let x = random::ginibre(a, b, &mut rng);
        let y = random::ginibre(b, c, &mut rng);
        let z = random::ginibre(c, a, &mut rng);
        let left = kron(&kron(&x, &y), &z);
        let right = kron(&x, &kron(&y, &z));
        prop_assert!(left.max_abs_diff(&right) <= 1e-12);
    }

    #[test]
    fn kron_is_bilinear(seed: u64, s in -3.0f64..3.0) {
        let mut rng = random::seeded(seed);
        let a = random::ginibre(2, 3, &mut rng);
        let a2 = random::ginibre(2, 3, &mut rng);
        let b = random::ginibre(3, 2, &mut rng);
        let lhs = kron(&(&a + &a2.scale_real(s)), &b);
        let rhs = &kron(&a, &b) + &kron(&a2, &b).scale_real(s);
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
    }

    #[test]
    fn schmidt_round_trip_and_spectrum((d1, d2) in (2usize..=4, 2usize..=4), seed: u64) {
        let mut rng = random::seeded(seed);
        let psi = random::random_state(DimList::new([d1, d2]).unwrap(), &mut rng);
        let dec = state::schmidt_decompose(&psi).unwrap();
        let back = dec.reconstruct();
        for (x, y) in back.iter().zip(psi.amplitudes()) {
            prop_assert!((x - y).norm() <= TOLERANCE);
        }
        let sum: f64 = dec.coefficients.iter().map(|c| c * c).sum();
        prop_assert!((sum - 1.0).abs() <= TOLERANCE);
        prop_assert!(dec.coefficients.windows(2).all(|w| w[0] >= w[1]));
        for basis in [&dec.left_basis, &dec.right_basis] {
            for (i, u) in basis.iter().enumerate() {
                for (j, v) in basis.iter().enumerate() {
                    let ip = qsignal_core::linalg::inner(u, v);
                    let expect = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((ip.re - expect).abs() <= TOLERANCE && ip.im.abs() <= TOLERANCE);
                }
            }
        }
        for keep in [0usize, 1] {
            let mut eig = decomp::eigvalsh(psi.density().reduced(&[keep]).unwrap().matrix()).unwrap();
            eig.sort_by(|a, b| b.total_cmp(a));
            for (k, e) in eig.iter().enumerate() {
                let c = dec.coefficients.get(k).copied().unwrap_or(0.0);
                prop_assert!((c * c - e).abs() <= TOLERANCE);
            }
        }
    }

    #[test]
    fn born_probabilities_sum_to_one(n in 1usize..=5, seed: u64) {
        let mut rng = random::seeded(seed);
        let rho = random::random_density(DimList::single(n), &mut rng);
        let fam = random::random_projective_family(n, &mut rng);
        let total: f64 = fam.projectors().iter().map(|p| state::born_probability(&rho, p).unwrap()).sum();
        prop_assert!((total - 1.0).abs() <= TOLERANCE);
    }

    #[test]
    fn hermitian_expectations_are_real(n in 1usize..=5, seed: u64) {
        let mut rng = random::seeded(seed);
        let rho = random::random_density(DimList::single(n), &mut rng);
        let h = random::random_hermitian(n, &mut rng);
        prop_assert!(h.matmul(rho.matrix()).trace().im.abs() <= 1e-12);
        prop_assert!(state::expectation(&h, &rho).is_ok());
    }

    #[test]
    fn nonselective_is_idempotent(n in 2usize..=4, seed: u64) {
        let mut rng = random::seeded(seed);
        let rho = random::random_density(DimList::single(n), &mut rng);
        let fam = random::random_projective_family(n, &mut rng);
        let once = measurement::measure_nonselective(&rho, &fam, 0).unwrap();
        let twice = measurement::measure_nonselective(&once, &fam, 0).unwrap();
        prop_assert!(once.matrix().approx_eq(twice.matrix(), TOLERANCE));
        prop_assert!(DensityOperator::new(once.matrix().clone(), once.dims().clone()).is_ok());
    }

    #[test]
    fn selective_outcomes_recombine((d1, d2) in (2usize..=3, 2usize..=3), seed: u64) {
        let mut rng = random::seeded(seed);
        let dims = DimList::new([d1, d2]).unwrap();
        let rho = random::random_density(dims, &mut rng);
        let fam: MeasurementFamily = random::random_projective_family(d2, &mut rng);
        let parts: Vec<(f64, DensityOperator)> = fam
            .projectors()
            .iter()
            .map(|p| measurement::measure_selective(&rho, p, 1).unwrap())
            .collect();
        let mixed = DensityOperator::mixture(&parts).unwrap();
        let direct = measurement::measure_nonselective(&rho, &fam, 1).unwrap();
        prop_assert!(mixed.matrix().approx_eq(direct.matrix(), TOLERANCE));
    }

    #[test]
    fn kraus_preserves_trace_and_positivity(n in 2usize..=4, k in 1usize..=4, seed: u64) {
        let mut rng = random::seeded(seed);
        let rho = random::random_density(DimList::single(n), &mut rng);
        let ch = random::random_kraus_channel(n, k, &mut rng);
        let out = measurement::apply_kraus(&rho, &ch, 0).unwrap();
        prop_assert!((out.matrix().trace().re - 1.0).abs() <= TOLERANCE);
        prop_assert!(out.matrix().is_positive_semidefinite(TOLERANCE));
    }

    #[test]
    fn mutual_information_is_relabeling_invariant(seed: u64, shift in 1u8..=20) {
        let mut rng = random::seeded(seed);
        let mut a = OutcomeCounts::new();
        let mut b = OutcomeCounts::new();
        for _ in 0..2000 {
            let choice: bool = rng.random();
            let bias = if choice { 0.7 } else { 0.4 };
            let o: u8 = if rng.random::<f64>() < bias { 0 } else { rng.random_range(1..4) };
            a.record(choice, o);
            // a bijective relabeling that also changes the sort order
            b.record(choice, (o.wrapping_mul(7)).wrapping_add(shift));
        }
        let (ra, rb) = (a.report(), b.report());
        prop_assert!(ra.mutual_information_bits >= 0.0);
        prop_assert!((ra.mutual_information_bits - rb.mutual_information_bits).abs() <= 1e-12);
    }

    #[test]
    fn exact_information_is_nonnegative(ps in prop::collection::vec(0.0f64..1.0, 2..6), qs in prop::collection::vec(0.0f64..1.0, 2..6)) {
        let norm = |v: &[f64]| {
            let s: f64 = v.iter().sum::<f64>().max(1e-9);
            v.iter().enumerate().map(|(i, x)| (i, x / s)).collect::<std::collections::BTreeMap<_, _>>()
        };
        let r = exact_signaling_report(&norm(&ps), &norm(&qs));
        prop_assert!(r.mutual_information_bits >= 0.0 && r.mutual_information_bits <= 1.0 + 1e-12);
        prop_assert!(r.deviation >= 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn bob_cannot_move_alice_marginal(seed: u64, da in 2usize..=4, db in 2usize..=4) {
        let mut rng = random::seeded(seed);
        let rep = nosignal::nosignal_sweep(10, nosignal::SweepDims::Fixed(da, db), &mut rng).unwrap();
        prop_assert!(rep.max_deviation <= TOLERANCE);
    }
}

use rand::Rng;

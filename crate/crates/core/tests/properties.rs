mod common;

use std::f64::consts::{PI, TAU};

use common::*;
use majorana_lu::classify::{classify_state, lu_equivalent_pure, same_class, StabilizerClass};
use majorana_lu::majorana::{
    find_roots, majorana_points, majorana_polynomial, mobius_apply, points_to_state, BlochPoint,
    MajoranaConfiguration,
};
use majorana_lu::mixed::{
    canonical_ghz_form, lu_equivalent_mixed, random_symmetric_mixture, two_qubit_support_check,
    EquivalenceSearchConfig, GhzForm, MixedEquivalence,
};
use majorana_lu::rotmatch::{
    closure, match_rotation, matching_distance, so3_to_su2, su2_to_so3, symmetry_group, GroupKind,
};
use majorana_lu::states::{
    apply_diag_symmetric, BitString, DensityMatrix, LocalUnitary, PureState, SingleQubitUnitary,
    SymmetricPureState, C64,
};
use majorana_lu::verify::{check_stabilizes, stabilizer_anomalies, StabilizerSearchConfig};
use majorana_lu::Tolerances;
use nalgebra::{Matrix2, Matrix3, Vector3};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_lu(n: usize, r: &mut ChaCha8Rng) -> LocalUnitary {
    LocalUnitary::new((0..n).map(|_| SingleQubitUnitary::random(r)).collect()).unwrap()
}

fn random_point(r: &mut ChaCha8Rng) -> BlochPoint {
    loop {
        let v = Vector3::new(
            r.random::<f64>() - 0.5,
            r.random::<f64>() - 0.5,
            r.random::<f64>() - 0.5,
        );
        if v.norm() > 1e-3 {
            return BlochPoint::from_vector(v).unwrap();
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn symmetric_densities_are_permutation_invariant(seed in any::<u64>(), n in 1usize..=6) {
        let mut r = rng(seed);
        let psi = SymmetricPureState::random(n, &mut r).unwrap();
        let rho = psi.to_density().unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut r);
        prop_assert!(rho.permute_qubits(&perm).unwrap().frobenius_distance(&rho) <= 1e-10);
        prop_assert!(permutation_invariant(&density(&psi), n, 1e-12));
    }

    #[test]
    fn symmetric_power_matches_full_space(seed in any::<u64>(), n in 1usize..=8) {
        let mut r = rng(seed);
        let psi = SymmetricPureState::random(n, &mut r).unwrap();
        let g = SingleQubitUnitary::random(&mut r);
        let fast = apply_diag_symmetric(&g, &psi);
        let full = &uniform(&g, n) * full_vector(&psi);
        prop_assert!((full_vector(&fast) - full).norm() <= 1e-10);
    }

    #[test]
    fn local_unitaries_preserve_spectra(seed in any::<u64>(), n in 1usize..=5) {
        let mut r = rng(seed);
        let rho = random_symmetric_mixture(n, 3, &mut r).unwrap();
        let moved = rho.apply_lu(&random_lu(n, &mut r)).unwrap();
        for (a, b) in rho.eigenvalues().iter().zip(moved.eigenvalues()) {
            prop_assert!((a - b).abs() <= 1e-10);
        }
    }

    #[test]
    fn symmetrize_ignores_input_order(seed in any::<u64>(), n in 1usize..=7) {
        let mut r = rng(seed);
        let mut qubits: Vec<[C64; 2]> = (0..n).map(|_| random_point(&mut r).to_qubit()).collect();
        let a = SymmetricPureState::symmetrize(&qubits).unwrap();
        qubits.shuffle(&mut r);
        let b = SymmetricPureState::symmetrize(&qubits).unwrap();
        prop_assert!(a.distance_up_to_phase(&b) <= 1e-12);
    }

    #[test]
    fn projective_equality_is_an_equivalence(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let a = random_lu(n, &mut r);
        let phases = |r: &mut ChaCha8Rng| {
            LocalUnitary::new((0..n).map(|_| SingleQubitUnitary::new(Matrix2::identity() * C64::from_polar(1.0, r.random_range(0.0..TAU))).unwrap()).collect()).unwrap()
        };
        let b = a.compose(&phases(&mut r)).unwrap();
        let c = b.compose(&phases(&mut r)).unwrap();
        let tol = 1e-10;
        prop_assert!(a.projectively_equal(&a, tol));
        prop_assert!(a.projectively_equal(&b, tol) && b.projectively_equal(&a, tol));
        prop_assert!(b.projectively_equal(&c, tol) && a.projectively_equal(&c, tol));
        let d = random_lu(n, &mut r);
        prop_assert_eq!(a.projectively_equal(&d, tol), d.projectively_equal(&a, tol));
        prop_assert!(!a.projectively_equal(&d, tol));
    }

    #[test]
    fn majorana_round_trip(seed in any::<u64>(), n in 1usize..=8) {
        let mut r = rng(seed);
        let psi = SymmetricPureState::random(n, &mut r).unwrap();
        let back = points_to_state(&majorana_points(&psi, &Tolerances::default()).unwrap()).unwrap();
        prop_assert!(phase_distance(&full_vector(&back), &full_vector(&psi)) <= 1e-8);
    }

    #[test]
    fn mobius_action_is_equivariant(seed in any::<u64>(), n in 1usize..=8) {
        let tol = Tolerances::default();
        let mut r = rng(seed);
        let psi = SymmetricPureState::random(n, &mut r).unwrap();
        let g = SingleQubitUnitary::random(&mut r);
        let moved = mobius_apply(&g, &majorana_points(&psi, &tol).unwrap());
        let direct = majorana_points(&psi.apply_uniform(&g), &tol).unwrap();
        prop_assert!(matching_distance(&moved, &direct).unwrap() <= 1e-7);
    }

    #[test]
    fn missing_high_weights_give_pole_points(seed in any::<u64>(), n in 1usize..=8, m_frac in 0.0f64..1.0) {
        let m = (m_frac * (n + 1) as f64) as usize;
        let mut r = rng(seed);
        let mut coeffs: Vec<C64> = (0..=n).map(|_| c(r.random::<f64>() - 0.5, r.random::<f64>() - 0.5)).collect();
        coeffs[0] = c(1.0, 0.0);
        coeffs[m] = c(0.7, 0.2);
        for x in coeffs.iter_mut().skip(m + 1) {
            *x = c(0.0, 0.0);
        }
        let psi = SymmetricPureState::normalized(n, coeffs).unwrap();
        let config = majorana_points(&psi, &Tolerances::default()).unwrap();
        let at_pole: usize = config.clusters().iter().filter(|w| *w.point.vector() == Vector3::z()).map(|w| w.multiplicity).sum();
        prop_assert_eq!(at_pole, n - m);
        let exact_zero = find_roots(&majorana_polynomial(&psi)).unwrap().iter().filter(|z| z.norm() == 0.0).count();
        prop_assert_eq!(exact_zero, n - m);
    }

    #[test]
    fn degree_deficiency_puts_points_at_the_one_pole(seed in any::<u64>(), n in 1usize..=8, m_frac in 0.0f64..1.0) {
        let m = (m_frac * (n + 1) as f64) as usize;
        let mut r = rng(seed);
        let mut coeffs: Vec<C64> = (0..=n).map(|_| c(r.random::<f64>() - 0.5, r.random::<f64>() - 0.5)).collect();
        for x in coeffs.iter_mut().take(m) {
            *x = c(0.0, 0.0);
        }
        coeffs[m] = c(0.6, -0.3);
        coeffs[n] = c(0.8, 0.1);
        let psi = SymmetricPureState::normalized(n, coeffs).unwrap();
        prop_assert_eq!(find_roots(&majorana_polynomial(&psi)).unwrap().len(), n - m);
        let config = majorana_points(&psi, &Tolerances::default()).unwrap();
        let at_pole: usize = config.clusters().iter().filter(|w| *w.point.vector() == -Vector3::z()).map(|w| w.multiplicity).sum();
        prop_assert_eq!(at_pole, m);
    }

    #[test]
    fn root_residuals_are_small(seed in any::<u64>(), n in 1usize..=8) {
        let mut r = rng(seed);
        let psi = SymmetricPureState::random(n, &mut r).unwrap();
        let p = majorana_polynomial(&psi);
        let scale = p.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for z in find_roots(&p).unwrap() {
            let value = if z.norm() <= 1.0 {
                p.iter().fold(c(0.0, 0.0), |acc, a| acc * z + a)
            } else {
                // |P(z)| / |z|^n via the reversed polynomial
                let w = z.inv();
                p.iter().rev().fold(c(0.0, 0.0), |acc, a| acc * w + a)
            };
            prop_assert!(value.norm() <= 1e-9 * scale, "|P| = {:e}", value.norm());
        }
    }

    #[test]
    fn double_cover_is_a_homomorphism(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = SingleQubitUnitary::random(&mut r);
        let h = SingleQubitUnitary::random(&mut r);
        let lhs = su2_to_so3(&(g * h));
        let rhs = su2_to_so3(&g) * su2_to_so3(&h);
        prop_assert!((lhs.matrix() - rhs.matrix()).norm() <= 1e-10);
        prop_assert!(so3_to_su2(&su2_to_so3(&g)).projectively_equal(&g, 1e-10));
    }

    #[test]
    fn double_cover_kernel_is_scalars(seed in any::<u64>()) {
        let mut r = rng(seed);
        let lambda = C64::from_polar(1.0, r.random_range(0.0..TAU));
        let scalar = SingleQubitUnitary::new(Matrix2::identity() * lambda).unwrap();
        prop_assert!((su2_to_so3(&scalar).matrix() - Matrix3::identity()).norm() <= 1e-12);
        let g = SingleQubitUnitary::random(&mut r);
        prop_assert!((su2_to_so3(&g).matrix() - Matrix3::identity()).norm() > 1e-6);
    }

    #[test]
    fn matching_rotation_inverts(seed in any::<u64>(), n in 1usize..=8) {
        let mut r = rng(seed);
        let pts: Vec<BlochPoint> = (0..n).map(|_| random_point(&mut r)).collect();
        let a = MajoranaConfiguration::from_points(&pts, 1e-6).unwrap();
        let b = su2_to_so3(&SingleQubitUnitary::random(&mut r)).apply_config(&a);
        let rot = match_rotation(&a, &b, 1e-6).unwrap();
        prop_assert!(rot.is_some());
        let rot = rot.unwrap();
        prop_assert!(matching_distance(&rot.apply_config(&a), &b).unwrap() <= 1e-6);
        prop_assert!(matching_distance(&rot.inverse().apply_config(&b), &a).unwrap() <= 1e-6);
    }

    #[test]
    fn generic_configurations_have_trivial_symmetry(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pts: Vec<BlochPoint> = (0..5).map(|_| random_point(&mut r)).collect();
        let g = symmetry_group(&MajoranaConfiguration::from_points(&pts, 1e-6).unwrap(), 1e-6).unwrap();
        prop_assert_eq!(g.kind(), GroupKind::Trivial);
    }

    #[test]
    fn classification_is_lu_invariant(seed in any::<u64>(), n in 3usize..=6, which in 0usize..4) {
        let tol = Tolerances::default();
        let mut r = rng(seed);
        let psi = match which {
            0 => SymmetricPureState::random(n, &mut r).unwrap(),
            1 => {
                let t: f64 = r.random_range(0.05..0.95);
                SymmetricPureState::ghz(n, c((PI * t / 4.0).cos(), 0.0), c((PI * t / 4.0).sin(), 0.0)).unwrap()
            }
            2 => SymmetricPureState::dicke(n, r.random_range(0..=n)).unwrap(),
            _ => SymmetricPureState::ghz_balanced(n).unwrap(),
        };
        let g = SingleQubitUnitary::random(&mut r);
        let a = classify_state(&psi, &tol).unwrap();
        let b = classify_state(&psi.apply_uniform(&g), &tol).unwrap();
        prop_assert!(same_class(&a.class, &b.class, 1e-8), "{:?} vs {:?}", a.class, b.class);
        let rho = a.canonical.to_density().unwrap();
        for u in &a.generators {
            prop_assert!(check_stabilizes(u, &rho, 1e-9).unwrap().accepted);
        }
    }

    #[test]
    fn pure_equivalence_is_an_equivalence_relation(seed in any::<u64>(), n in 3usize..=6) {
        let tol = Tolerances::default();
        let mut r = rng(seed);
        let psi = SymmetricPureState::random(n, &mut r).unwrap();
        let phi = psi.apply_uniform(&SingleQubitUnitary::random(&mut r));
        let chi = phi.apply_uniform(&SingleQubitUnitary::random(&mut r));
        prop_assert!(lu_equivalent_pure(&psi, &psi, &tol).unwrap().is_some());
        let g = lu_equivalent_pure(&psi, &phi, &tol).unwrap().unwrap();
        prop_assert!(phi.apply_uniform(&g.adjoint()).distance_up_to_phase(&psi) <= 1e-7);
        prop_assert!(lu_equivalent_pure(&phi, &psi, &tol).unwrap().is_some());
        prop_assert!(lu_equivalent_pure(&phi, &chi, &tol).unwrap().is_some());
        let h = lu_equivalent_pure(&psi, &chi, &tol).unwrap().unwrap();
        prop_assert!(psi.apply_uniform(&h).distance_up_to_phase(&chi) <= 1e-7);
    }

    #[test]
    fn phase_layer_identity(seed in any::<u64>(), n in 2usize..=6, ones in any::<bool>()) {
        let mut r = rng(seed);
        let support = if ones { BitString::ones(n) } else { BitString::zeros(n) };
        let form = GhzForm::random(support, &mut r);
        let phi = r.random_range(0.0..TAU);
        let moved = conj(&uniform(&SingleQubitUnitary::phase_gate(phi), n), &dm(&form.to_density().unwrap()));
        let (i, j) = (support.index(), support.complement().index());
        let sign = if ones { 1.0 } else { -1.0 };
        let expected = form.b() * C64::from_polar(1.0, sign * n as f64 * phi);
        prop_assert!((moved[(i, j)] - expected).norm() <= 1e-13);
        prop_assert!((form.phase_layer(phi).b() - expected).norm() <= 1e-13);
    }

    #[test]
    fn equivalent_ghz_forms_share_canonical_data(seed in any::<u64>(), n in 2usize..=6) {
        let mut r = rng(seed);
        let support = BitString::new(n, r.random_range(0..1 << n)).unwrap();
        let tau = GhzForm::random(support, &mut r).to_density().unwrap();
        let factors: Vec<SingleQubitUnitary> = (0..n)
            .map(|_| {
                let d = SingleQubitUnitary::z_rotation(r.random_range(0.0..TAU));
                if r.random_bool(0.5) { SingleQubitUnitary::pauli_x() * d } else { d }
            })
            .collect();
        let partner = DensityMatrix::new(n, conj(&kron(&factors), &dm(&tau))).unwrap();
        let (a, b) = (canonical_ghz_form(&tau, 1e-10).unwrap(), canonical_ghz_form(&partner, 1e-10).unwrap());
        prop_assert!((a.form.a() - b.form.a()).abs() <= 1e-9);
        prop_assert!((a.form.b() - b.form.b()).norm() <= 1e-9);
        prop_assert!(a.form.a() >= 0.5 && a.form.b().im == 0.0 && a.form.b().re >= 0.0);
    }

    #[test]
    fn stabilized_invariant_states_have_ghz_support(seed in any::<u64>(), n in 3usize..=5, t in 0.1f64..3.0) {
        let mut r = rng(seed);
        let tau = GhzForm::random(BitString::zeros(n), &mut r).to_density().unwrap();
        let (k, l) = (r.random_range(0..n), r.random_range(0..n));
        prop_assume!(k != l);
        let check = two_qubit_support_check(&tau, k, l, t, 1e-10).unwrap();
        prop_assert!(check.holds());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn mixed_search_is_sound(seed in any::<u64>(), n in 3usize..=4, terms in 1usize..=3) {
        let mut r = rng(seed);
        let rho = random_symmetric_mixture(n, terms, &mut r).unwrap();
        let g = SingleQubitUnitary::random(&mut r);
        let target = DensityMatrix::new(n, conj(&uniform(&g, n), &dm(&rho))).unwrap();
        let cfg = EquivalenceSearchConfig::default();
        match lu_equivalent_mixed(&rho, &target, &cfg).unwrap() {
            MixedEquivalence::Equivalent { g: found, .. } => {
                let d = frob(&conj(&uniform(&found, n), &dm(&rho)), &dm(&target));
                prop_assert!(d <= cfg.threshold_for(n));
            }
            other => prop_assert!(false, "{:?}", other),
        }
    }

    // a full-space search over g^{⊗n} on the projectors agrees with the
    // Majorana-based decision
    #[test]
    fn pure_decision_matches_full_space_search(seed in any::<u64>(), related in any::<bool>()) {
        let n = 4;
        let tol = Tolerances::default();
        let mut r = rng(seed);
        let psi = SymmetricPureState::random(n, &mut r).unwrap();
        let other = if related {
            let target = &uniform(&SingleQubitUnitary::random(&mut r), n) * full_vector(&psi);
            SymmetricPureState::from_full(&PureState::new(n, target.as_slice().to_vec()).unwrap(), 1e-10).unwrap()
        } else {
            SymmetricPureState::random(n, &mut r).unwrap()
        };
        let pure = lu_equivalent_pure(&psi, &other, &tol).unwrap().is_some();
        let full = lu_equivalent_mixed(&psi.to_density().unwrap(), &other.to_density().unwrap(), &EquivalenceSearchConfig::default()).unwrap();
        prop_assert_eq!(pure, related);
        prop_assert_eq!(full.unitary().is_some(), related, "{:?}", full);
    }
}

#[test]
fn ghz_general_parameter_is_recovered() {
    let tol = Tolerances::default();
    for n in 3..=6 {
        for t in [0.1, 0.25, 0.5, 0.9] {
            let psi = SymmetricPureState::ghz(
                n,
                c((PI * t / 4.0).cos(), 0.0),
                c((PI * t / 4.0).sin(), 0.0),
            )
            .unwrap();
            match classify_state(&psi, &tol).unwrap().class {
                StabilizerClass::GhzGeneral { t: got } => {
                    assert!((got - t).abs() <= 1e-8, "n={n} t={t}: {got}")
                }
                other => panic!("n={n} t={t}: {other:?}"),
            }
        }
    }
}

#[test]
fn dicke_flip_is_x() {
    let tol = Tolerances::default();
    for n in 2..=8 {
        for k in 0..=n {
            if 2 * k == n {
                continue;
            }
            let g = lu_equivalent_pure(
                &SymmetricPureState::dicke(n, k).unwrap(),
                &SymmetricPureState::dicke(n, n - k).unwrap(),
                &tol,
            )
            .unwrap()
            .unwrap();
            assert!(
                g.projectively_equal(&SingleQubitUnitary::pauli_x(), 1e-9),
                "n={n} k={k}"
            );
        }
    }
}

#[test]
fn finite_groups_are_closed_and_contain_identity() {
    let tol = Tolerances::default();
    let mut r = rng(11);
    for _ in 0..20 {
        let n = r.random_range(3..=8);
        let psi = SymmetricPureState::random(n, &mut r).unwrap();
        let config = majorana_points(&psi, &tol).unwrap();
        let g = symmetry_group(&config, tol.matching).unwrap();
        let elements = g.elements();
        assert!(elements.iter().any(|e| e.angle() < 1e-12));
        assert_eq!(closure(&elements).len(), elements.len());
    }
    let square: Vec<BlochPoint> = (0..4)
        .map(|j| BlochPoint::from_angles(PI / 2.0, PI * j as f64 / 2.0))
        .collect();
    let g = symmetry_group(
        &MajoranaConfiguration::from_points(&square, 1e-6).unwrap(),
        1e-6,
    )
    .unwrap();
    let elements = g.elements();
    for a in &elements {
        for b in &elements {
            let ab = *a * *b;
            assert!(elements.iter().any(|e| e.distance(&ab) < 1e-9));
        }
    }
}

#[test]
fn oracle_agreement_across_classes() {
    let tol = Tolerances::default();
    let mut r = rng(12);
    for n in 3..=6 {
        let cfg = if n < 6 {
            StabilizerSearchConfig::default()
        } else {
            StabilizerSearchConfig {
                euler_grid: 8,
                phase_grid: 4,
                ..Default::default()
            }
        };
        let mut states = vec![
            SymmetricPureState::dicke(n, 0).unwrap(),
            SymmetricPureState::ghz_balanced(n).unwrap(),
            SymmetricPureState::ghz(n, c(0.9, 0.0), c(0.19f64.sqrt(), 0.0)).unwrap(),
            SymmetricPureState::dicke(n, 1).unwrap(),
            SymmetricPureState::random(n, &mut r).unwrap(),
        ];
        if n % 2 == 0 {
            states.push(SymmetricPureState::dicke(n, n / 2).unwrap());
        }
        for psi in states {
            let result = classify_state(&psi, &tol).unwrap();
            let rho = result.canonical.to_density().unwrap();
            for u in &result.generators {
                assert!(check_stabilizes(u, &rho, 1e-9).unwrap().accepted);
            }
            let report = stabilizer_anomalies(&result, &cfg).unwrap();
            assert!(
                report.anomalies.is_empty(),
                "n={n} {}: {} anomalies",
                result.class.label(),
                report.anomalies.len()
            );
        }
    }
}

#[test]
fn singlet_is_stabilized_by_identical_pairs() {
    let mut r = rng(13);
    let rho = PureState::singlet().to_density();
    for _ in 0..100 {
        let g = SingleQubitUnitary::random(&mut r);
        assert!(
            check_stabilizes(&LocalUnitary::uniform(g, 2), &rho, 1e-10)
                .unwrap()
                .accepted
        );
    }
}

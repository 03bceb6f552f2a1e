use num_complex::Complex64;
use proptest::prelude::*;

use zeromass_core::config::SuiteConfig;
use zeromass_core::discrete::{compose, intertwining_residual, standard_ops, standard_relations, RelationKind};
use zeromass_core::equivalence::{canonical_nilpotents, metric_weight, v_transform};
use zeromass_core::matrix::commutator;
use zeromass_core::matrix::{hermitian_eigen, kernel_basis, singular_values, vector_norm};
use zeromass_core::modes::{mode_hamiltonian, WeylReduction};
use zeromass_core::momentum::{energy_sign, hamiltonian, minimal_projector, projector, Family, Momentum3, Sign};
use zeromass_core::momentum::{minimal_projector_field, projector_field};
use zeromass_core::poincare::{residuals, translation_check, Derivative};
use zeromass_core::report::{Check, Expectation};
use zeromass_core::so4::{so4_generators, structure_residual, Variant};
use zeromass_core::{ComplexMatrix, VerificationReport};

fn momentum() -> impl Strategy<Value = Momentum3> {
    prop::array::uniform3(-5.0f64..5.0)
        .prop_filter("away from zero", |v| v.iter().map(|x| x * x).sum::<f64>() > 0.01)
        .prop_map(|v| Momentum3::from_array(v).unwrap())
}

fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Plus), Just(Sign::Minus)]
}

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![
        Just(Family::Chirality),
        Just(Family::Helicity),
        Just(Family::EnergySign)
    ]
}

fn matrix4() -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(-2.0f64..2.0, 32).prop_map(|v| {
        let mut m = ComplexMatrix::zeros(4);
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = Complex64::new(v[2 * (4 * i + j)], v[2 * (4 * i + j) + 1]);
            }
        }
        m
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn singular_values_match_eigenvalues_of_gram(a in matrix4()) {
        let sv = singular_values(&a);
        let mut ev: Vec<f64> = hermitian_eigen(&(a.adjoint() * a), 1e-14).unwrap().into_iter().map(|x| x.0.max(0.0).sqrt()).collect();
        ev.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let mut s = sv.clone();
        s.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let scale = s[0].max(1.0);
        for (x, y) in s.iter().zip(&ev) {
            prop_assert!((x - y).abs() < 1e-8 * scale, "{s:?} vs {ev:?}");
        }
    }

    #[test]
    fn kernel_vectors_are_annihilated(a in matrix4(), k in 1usize..4) {
        // Force rank ≤ 4 − k by zeroing columns after a random mix.
        let mut b = a;
        for j in 0..k {
            for i in 0..4 {
                b[(i, j)] = Complex64::new(0.0, 0.0);
            }
        }
        let m = a * b;
        let ker = kernel_basis(&m, 1e-10);
        prop_assert!(ker.dim() >= k);
        for v in ker.vectors() {
            prop_assert!(vector_norm(&m.apply(v)) < 1e-9 * m.op_norm().max(1.0));
        }
    }

    #[test]
    fn hamiltonian_squares_to_energy(p in momentum()) {
        let h = hamiltonian(&p);
        let e2 = p.energy().powi(2);
        prop_assert!((h * h - ComplexMatrix::identity(4) * e2).op_norm() < 1e-12 * e2);
        prop_assert!(h.hermiticity_residual() < 1e-14 * p.energy());
    }

    #[test]
    fn projectors_are_commuting_hermitian_idempotents(p in momentum(), f in family(), s in sign(), g in family(), t in sign()) {
        let q = projector(f, s, &p);
        prop_assert!((q * q - q).op_norm() < 1e-12);
        prop_assert!(q.hermiticity_residual() < 1e-12);
        prop_assert!(commutator(&q, &hamiltonian(&p)).op_norm() < 1e-12 * p.energy());
        prop_assert!(commutator(&q, &projector(g, t, &p)).op_norm() < 1e-12);
        prop_assert!((q.trace().re - 2.0).abs() < 1e-12);
    }

    #[test]
    fn minimal_projectors_resolve_identity(p in momentum()) {
        let mut sum = ComplexMatrix::zeros(4);
        for e in Sign::BOTH {
            for l in Sign::BOTH {
                let q = minimal_projector(e, l, &p);
                prop_assert!((q.trace().re - 1.0).abs() < 1e-12);
                sum = sum + q;
            }
        }
        prop_assert!((sum - ComplexMatrix::identity(4)).op_norm() < 1e-12);
    }

    #[test]
    fn projectors_are_poincare_invariant_analytically(p in momentum(), f in family(), s in sign(), e in sign(), l in sign()) {
        for q in [projector_field(f, s), minimal_projector_field(e, l)] {
            prop_assert!(translation_check(&q, &p) < 1e-11 * p.energy());
            let r = residuals(&q, &p, Derivative::Analytic).unwrap();
            prop_assert!(r.max_rotation() < 1e-10 && r.max_boost() < 1e-10, "{r:?}");
        }
    }

    #[test]
    fn discrete_relations_hold_everywhere(p in momentum()) {
        for (o, a, kind) in standard_relations() {
            let target = match kind {
                RelationKind::Commute => a.clone(),
                RelationKind::Anticommute => a.scaled(Complex64::new(-1.0, 0.0)),
            };
            prop_assert!(intertwining_residual(&o, &a, &target, &[p]) < 1e-11, "{}", o.name);
        }
    }

    #[test]
    fn composed_ops_stay_unitary(i in 0usize..4, j in 0usize..4) {
        let ops = standard_ops();
        let c = compose(&ops[i], &ops[j]);
        prop_assert!(c.unitarity_residual() < 1e-14);
        prop_assert_eq!(c.conjugates, ops[i].conjugates ^ ops[j].conjugates);
        prop_assert_eq!(c.momentum_sign.value(), ops[i].momentum_sign.value() * ops[j].momentum_sign.value());
    }

    #[test]
    fn mode_hamiltonian_preserves_its_constraint(p in momentum(), f in family(), s in sign(), k in -10.0f64..10.0) {
        let m = mode_hamiltonian(f, s, k);
        let r = m.residuals(&p).unwrap();
        prop_assert!(r.leakage < 1e-11 * p.energy().max(k.abs()).max(1.0));
        prop_assert!(r.restriction < 1e-11 * p.energy().max(1.0));
    }

    #[test]
    fn weyl_reduction_uses_one_unitary(p in momentum(), s in sign()) {
        let w = WeylReduction::new(s).unwrap();
        prop_assert!(w.residual(&p) < 1e-12);
    }

    #[test]
    fn rotated_so4_conserved_with_intact_algebra(p in momentum()) {
        let g = so4_generators(Variant::Rotated);
        let h = hamiltonian(&p);
        prop_assert!(commutator(&h, &g.lambda1.eval(&p)).op_norm() < 1e-11 * p.energy());
        prop_assert!(commutator(&h, &g.lambda2.eval(&p)).op_norm() < 1e-11 * p.energy());
        prop_assert!(structure_residual(&g, &p) < 1e-11);
    }

    #[test]
    fn nilpotent_similarity(p in momentum(), k in -5.0f64..5.0, dim in prop_oneof![Just(2usize), Just(4usize)]) {
        for g in canonical_nilpotents(dim, k).unwrap() {
            let (v, vi) = v_transform(&g, &p).unwrap();
            let id = ComplexMatrix::identity(dim);
            let scale = v.op_norm() * vi.op_norm();
            prop_assert!((v * vi - id).op_norm() < 1e-12 * scale);
            let m = metric_weight(&g, &p).unwrap();
            let ev = hermitian_eigen(&((m + m.adjoint()) * 0.5), 1e-14).unwrap();
            prop_assert!(ev[0].0 > 0.0);
            let hp = g.perturbed(&p);
            prop_assert!((m * hp - hp.adjoint() * m).op_norm() < 1e-11 * m.op_norm() * hp.op_norm());
        }
    }

    #[test]
    fn energy_sign_is_involution(p in momentum()) {
        let e = energy_sign(&p);
        prop_assert!((e * e - ComplexMatrix::identity(4)).op_norm() < 1e-13);
    }

    #[test]
    fn check_passes_iff_within_tol(r in 0.0f64..1.0, t in 0.0f64..1.0, fail in any::<bool>()) {
        let expect = if fail { Expectation::Fail } else { Expectation::Pass };
        let c = Check::new("x", r, t, expect, "plumbing");
        prop_assert_eq!(c.pass, r <= t);
        prop_assert_eq!(c.ok(), c.pass != fail);
    }

    #[test]
    fn summary_counts_consistent(rs in prop::collection::vec((0.0f64..2.0, any::<bool>()), 0..20)) {
        let mut rep = VerificationReport::new("t");
        for (r, fail) in &rs {
            if *fail {
                rep.record_expected_fail("c", *r, 1.0, "plumbing");
            } else {
                rep.record("c", *r, 1.0, "plumbing");
            }
        }
        let s = rep.summary();
        prop_assert_eq!(s.total, rs.len());
        prop_assert_eq!(s.passed + s.failed, s.total);
        prop_assert_eq!(s.mismatches, rep.checks.iter().filter(|c| !c.ok()).count());
        prop_assert_eq!(rep.all_ok(), s.mismatches == 0);
    }

    #[test]
    fn config_text_round_trips(seed in any::<u64>(), samples in 1usize..1000, tol in 1e-14f64..1e-2) {
        let mut c = SuiteConfig::default();
        c.parse_str(&format!("seed = {seed}\nsamples = {samples}\ntol_exact = {tol:e}\n")).unwrap();
        prop_assert_eq!(c.seed, seed);
        prop_assert_eq!(c.samples, samples);
        prop_assert_eq!(c.tol_exact, tol);
        prop_assert!(c.validate().is_ok());
    }
}

//! Property-based invariants over random fields, elements, and states.

use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;

use dcs::gf2n::{build_field, FieldElement, FieldSpec};
use dcs::ordering::{self, BaseScheme};
use dcs::pauli::{self, Operator, PhasePoint};
use dcs::quasidist;
use dcs::states::{self, StateVector, THETA_SYMMETRIC};

fn field(n: usize) -> Arc<FieldSpec> {
    Arc::new(build_field(n, None).unwrap())
}

/// (n, up to three element indices) with indices valid for the field.
fn field_and_elems(max_n: usize) -> impl Strategy<Value = (usize, u32, u32, u32)> {
    (1..=max_n).prop_flat_map(|n| {
        let hi = 1u32 << n;
        (Just(n), 0..hi, 0..hi, 0..hi)
    })
}

fn state_strategy(max_n: usize) -> impl Strategy<Value = (usize, Vec<(f64, f64)>)> {
    (1..=max_n).prop_flat_map(|n| {
        let dim = 1usize << n;
        (
            Just(n),
            proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim),
        )
    })
}

fn build_state(n: usize, raw: &[(f64, f64)]) -> Option<StateVector> {
    let f = field(n);
    let amps: Vec<Complex64> = raw.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
    let psi = StateVector::new(f, amps).unwrap();
    if psi.norm() < 1e-6 {
        return None;
    }
    Some(psi.normalized().unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_ring_axioms((n, a, b, c) in field_and_elems(8)) {
        let f = field(n);
        let (a, b, c) = (FieldElement::new(a), FieldElement::new(b), FieldElement::new(c));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        if !a.is_zero() {
            let inv = f.inv(a).unwrap();
            prop_assert_eq!(f.mul(a, inv), FieldElement::ONE);
        }
    }

    #[test]
    fn trace_is_additive_and_character_multiplies((n, a, b, _c) in field_and_elems(8)) {
        let f = field(n);
        let (a, b) = (FieldElement::new(a), FieldElement::new(b));
        prop_assert_eq!(f.trace(f.add(a, b)), f.trace(a) ^ f.trace(b));
        prop_assert_eq!(f.character(f.add(a, b)), f.character(a) * f.character(b));
    }

    #[test]
    fn h_and_kappa_identities((n, a, b, _c) in field_and_elems(8)) {
        let f = field(n);
        let (a, b) = (FieldElement::new(a), FieldElement::new(b));
        prop_assert_eq!(
            2 * f.h(f.kappa_of(a, b)),
            f.h(a) + f.h(b) + f.h(f.add(a, b))
        );
        let both = (f.sd_coords(a) & f.sd_coords(b)).count_ones();
        prop_assert_eq!(f.h(f.add(a, b)) + 2 * both, f.h(a) + f.h(b));
    }

    #[test]
    fn label_round_trip((n, a, _b, _c) in field_and_elems(8)) {
        let f = field(n);
        let a = FieldElement::new(a);
        prop_assert_eq!(f.parse_label(&f.label(a)).unwrap(), a);
    }

    #[test]
    fn sd_coords_round_trip((n, a, _b, _c) in field_and_elems(8)) {
        let f = field(n);
        let a = FieldElement::new(a);
        prop_assert_eq!(f.from_sd_coords(f.sd_coords(a)), a);
        prop_assert_eq!(f.from_tensor_index(f.tensor_index(a)), a);
    }

    #[test]
    fn displacement_is_an_involution_and_isometry(
        (n, raw) in state_strategy(5),
        bits in any::<u64>()
    ) {
        prop_assume!(build_state(n, &raw).is_some());
        let psi = build_state(n, &raw).unwrap();
        let f = Arc::clone(psi.field());
        let a = FieldElement::new((bits as u32) & (f.size() as u32 - 1));
        let b = FieldElement::new(((bits >> 32) as u32) & (f.size() as u32 - 1));
        let d = pauli::displacement(PhasePoint::new(a, b));
        let once = d.apply(&psi).unwrap();
        prop_assert!((once.norm() - 1.0).abs() < 1e-12);
        let twice = d.apply(&once).unwrap();
        prop_assert!(twice.max_dev(&psi) < 1e-12);
    }

    #[test]
    fn fourier_squares_to_identity((n, raw) in state_strategy(6)) {
        prop_assume!(build_state(n, &raw).is_some());
        let psi = build_state(n, &raw).unwrap();
        let back = pauli::fourier(&pauli::fourier(&psi).unwrap()).unwrap();
        prop_assert!(back.max_dev(&psi) < 1e-12);
    }

    #[test]
    fn q_grid_is_a_subnormalized_probability((n, raw) in state_strategy(5)) {
        prop_assume!(build_state(n, &raw).is_some());
        let psi = build_state(n, &raw).unwrap();
        let q = quasidist::q_function(&psi, THETA_SYMMETRIC).unwrap();
        prop_assert!(q.values().iter().all(|&v| v >= -1e-14 && v <= 1.0 + 1e-12));
        prop_assert!((q.sum() - psi.dim() as f64).abs() < 1e-9);
    }

    #[test]
    fn p_smears_to_q((n, raw) in state_strategy(3)) {
        prop_assume!(build_state(n, &raw).is_some());
        let psi = build_state(n, &raw).unwrap();
        let dev = quasidist::smearing_check(&psi, THETA_SYMMETRIC).unwrap();
        prop_assert!(dev < 1e-9);
    }

    #[test]
    fn p_sums_to_the_state_trace((n, raw) in state_strategy(4)) {
        prop_assume!(build_state(n, &raw).is_some());
        let psi = build_state(n, &raw).unwrap();
        let p = quasidist::p_function(&psi, THETA_SYMMETRIC).unwrap();
        prop_assert!((p.sum() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn state_json_round_trip((n, raw) in state_strategy(5)) {
        prop_assume!(build_state(n, &raw).is_some());
        let psi = build_state(n, &raw).unwrap();
        let back = StateVector::from_json(Arc::clone(psi.field()), &psi.to_json()).unwrap();
        prop_assert!(back.max_dev(&psi) < 1e-15);
    }

    #[test]
    fn axis_orders_are_permutations(n in 1usize..=8, shift_bits in any::<u32>()) {
        let f = field(n);
        let shift = FieldElement::new(shift_bits & (f.size() as u32 - 1));
        for scheme in [BaseScheme::HAscending, BaseScheme::HSymmetric] {
            let axis = ordering::order_axis(&f, scheme);
            let moved = ordering::recenter(&axis, &f, shift);
            let mut seen = vec![false; f.size()];
            for &l in moved.labels() {
                prop_assert!(!seen[l.index()]);
                seen[l.index()] = true;
            }
            let back = ordering::recenter(&moved, &f, shift);
            prop_assert_eq!(back.labels(), axis.labels());
        }
    }

    #[test]
    fn xor_gate_is_a_self_inverse_isometry(
        (n, raw) in state_strategy(5),
        p in 1usize..=5,
        q in 1usize..=5
    ) {
        prop_assume!(n >= 2);
        let p = (p - 1) % n + 1;
        let q = (q - 1) % n + 1;
        prop_assume!(p != q);
        prop_assume!(build_state(n, &raw).is_some());
        let psi = build_state(n, &raw).unwrap();
        let once = pauli::xor_gate(p, q, &psi).unwrap();
        prop_assert!((once.norm() - 1.0).abs() < 1e-12);
        let twice = pauli::xor_gate(p, q, &once).unwrap();
        prop_assert!(twice.max_dev(&psi) < 1e-15);
    }

    #[test]
    fn coherent_states_have_unit_self_q(
        n in 1usize..=6,
        bits in any::<u64>()
    ) {
        let f = field(n);
        let a = FieldElement::new((bits as u32) & (f.size() as u32 - 1));
        let b = FieldElement::new(((bits >> 32) as u32) & (f.size() as u32 - 1));
        let cs = states::coherent_state(&f, PhasePoint::new(a, b), THETA_SYMMETRIC).unwrap();
        let q = quasidist::q_function(&cs, THETA_SYMMETRIC).unwrap();
        prop_assert!((q.value(a, b) - 1.0).abs() < 1e-10);
        let fid = states::fiducial(&f, THETA_SYMMETRIC).unwrap();
        // Covariance: the whole grid is the fiducial grid translated.
        let q0 = quasidist::q_function(&fid, THETA_SYMMETRIC).unwrap();
        for g in f.elements() {
            for d in f.elements() {
                let want = q0.value(f.add(g, a), f.add(d, b));
                prop_assert!((q.value(g, d) - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn squeezes_form_a_group_on_states((n, raw) in state_strategy(5), k1 in 0u64..255, k2 in 0u64..255) {
        prop_assume!(build_state(n, &raw).is_some());
        let psi = build_state(n, &raw).unwrap();
        let f = Arc::clone(psi.field());
        let z1 = f.sigma_pow(k1);
        let z2 = f.sigma_pow(k2);
        let seq = Operator::squeeze(z2).unwrap()
            .apply(&Operator::squeeze(z1).unwrap().apply(&psi).unwrap())
            .unwrap();
        let comb = Operator::squeeze(f.mul(z1, z2)).unwrap().apply(&psi).unwrap();
        prop_assert!(seq.max_dev(&comb) < 1e-15);
    }
}

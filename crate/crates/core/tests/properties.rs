//! Randomized structural invariants: decomposition round-trips, canonical
//! forms that ignore presentation, and evaluation homomorphisms.

use proptest::prelude::*;

use torsolve_core::arith::gcd_with;
use torsolve_core::{
    decompose, expand_orbit, orbit_representatives, rational_poly, unit_adjust,
    verify_decomposition, TorsionCoset, TorsionPoint,
};

fn primitive_vector(nvars: usize, modulus: u64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0..modulus as i64, nvars)
        .prop_filter("needs exact order", move |a| gcd_with(a, modulus) == 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_round_trips(
        (nvars, modulus) in (1usize..=3).prop_flat_map(|n| (Just(n), 2u64..=600)),
        seed in any::<u64>(),
    ) {
        let mut a = vec![0i64; nvars];
        let mut state = seed;
        loop {
            for slot in a.iter_mut() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                *slot = (state % modulus) as i64;
            }
            if gcd_with(&a, modulus) == 1 {
                break;
            }
        }
        let dec = decompose(&a, modulus).unwrap();
        prop_assert!(verify_decomposition(&a, &dec));
        if modulus > (1u64 << (2 * nvars as u32)) {
            prop_assert!(dec.bounds_hold());
        }
    }

    #[test]
    fn unit_adjust_solves_congruence(n in 2u64..=400, k in 1u64..=1200) {
        prop_assume!(k % n != 0);
        let (e, l) = unit_adjust(k, n).unwrap();
        prop_assert_eq!(num_integer::gcd(l, n), 1);
        prop_assert_eq!((l as u128 * e as u128) % n as u128, (k % n) as u128);
        prop_assert_eq!(n % e, 0);
    }

    #[test]
    fn canonicalization_is_idempotent(a in primitive_vector(3, 360)) {
        let p = TorsionPoint::canonicalize(360, &a).unwrap();
        let again = TorsionPoint::canonicalize(p.order(), &p.signed_exponents()).unwrap();
        prop_assert_eq!(p, again);
    }

    #[test]
    fn representatives_are_lex_least(order in 2u64..=40) {
        for rep in orbit_representatives(order, 2) {
            let orbit = expand_orbit(order, &rep);
            let least = orbit.iter().map(|p| p.exponents().to_vec()).min().unwrap();
            prop_assert_eq!(&rep, &least);
        }
    }

    #[test]
    fn coset_presentation_is_canonical(
        a in primitive_vector(2, 12),
        c1 in -4i64..=4,
        c2 in -4i64..=4,
        scale in 1i64..=3,
    ) {
        prop_assume!(c1 != 0 || c2 != 0);
        let translate = TorsionPoint::canonicalize(12, &a).unwrap();
        let base = TorsionCoset::new(translate.clone(), &[vec![c1, c2]]).unwrap();
        let scaled = TorsionCoset::new(translate.clone(), &[vec![scale * c1, scale * c2]]).unwrap();
        let negated = TorsionCoset::new(translate, &[vec![-c1, -c2]]).unwrap();
        prop_assert_eq!(&base, &scaled);
        prop_assert_eq!(&base, &negated);
    }

    #[test]
    fn coset_contains_its_translate_and_direction_shifts(
        a in primitive_vector(2, 10),
        c1 in -3i64..=3,
        c2 in -3i64..=3,
        step in 0i64..=11,
    ) {
        prop_assume!(c1 != 0 || c2 != 0);
        let translate = TorsionPoint::canonicalize(10, &a).unwrap();
        let coset = TorsionCoset::new(translate.clone(), &[vec![c1, c2]]).unwrap();
        prop_assert!(coset.contains_point(&translate).unwrap());
        // multiply by an order-12 element of the direction subgroup, working
        // at level 120 so both factors have exponents there
        let lifted: Vec<i64> = translate
            .signed_exponents()
            .iter()
            .zip([c1, c2])
            .map(|(t, c)| t * (120 / translate.order() as i64) + c * step * 10)
            .collect();
        let shifted = TorsionPoint::canonicalize(120, &lifted).unwrap();
        prop_assert!(coset.contains_point(&shifted).unwrap());
    }

    #[test]
    fn evaluation_respects_ring_ops(
        a in primitive_vector(2, 24),
        coeffs in prop::collection::vec(-3i64..=3, 4),
    ) {
        let p = rational_poly(2, &[(coeffs[0], &[1, 0]), (coeffs[1], &[0, 1])]);
        let q = rational_poly(2, &[(coeffs[2], &[1, -1]), (coeffs[3], &[2, 1])]);
        let point = TorsionPoint::canonicalize(24, &a).unwrap();
        let pv = p.evaluate_at_torsion(&point).unwrap();
        let qv = q.evaluate_at_torsion(&point).unwrap();
        let sum = p.add(&q).unwrap().evaluate_at_torsion(&point).unwrap();
        let prod = p.mul(&q).unwrap().evaluate_at_torsion(&point).unwrap();
        prop_assert_eq!(sum, pv.add(&qv).unwrap());
        prop_assert_eq!(prod, pv.mul(&qv).unwrap());
    }
}

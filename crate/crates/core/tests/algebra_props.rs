//! Property tests for the ring substrate and the q-calculus laws.

use proptest::prelude::*;

use num::bigint::BigInt;
use num::rational::BigRational;

use qforge_core::qcalc::{q_partial, shift_q};
use qforge_core::ring::{Monomial, Poly, Trunc, VarId};

const VARS: [VarId; 4] = [
    VarId::X(1),
    VarId::X(2),
    VarId::U,
    VarId::Delta { var: 1, depth: 1 },
];

const X_VARS: [VarId; 2] = [VarId::X(1), VarId::X(2)];

fn poly_from_raw(raw: Vec<(i8, Vec<u8>)>, vars: &[VarId]) -> Poly {
    let terms = raw
        .into_iter()
        .map(|(c, exps)| {
            let pairs = exps
                .into_iter()
                .zip(vars.iter())
                .map(|(e, &v)| (v, (e % 4) as u32));
            (
                BigRational::from_integer(BigInt::from(c as i64)),
                Monomial::from_pairs(pairs),
            )
        })
        .collect();
    Poly::from_terms(terms, Trunc::Exact)
}

fn arb_poly() -> impl Strategy<Value = Poly> {
    proptest::collection::vec(
        (any::<i8>(), proptest::collection::vec(any::<u8>(), VARS.len())),
        0..6,
    )
    .prop_map(|raw| poly_from_raw(raw, &VARS))
}

fn arb_x_poly() -> impl Strategy<Value = Poly> {
    proptest::collection::vec(
        (any::<i8>(), proptest::collection::vec(any::<u8>(), X_VARS.len())),
        0..5,
    )
    .prop_map(|raw| poly_from_raw(raw, &X_VARS))
}

proptest! {
    #[test]
    fn addition_associative_commutative(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.add(&b), b.add(&a));
    }

    #[test]
    fn multiplication_associative_commutative(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn distributivity(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn canonical_form_decides_equality(a in arb_poly(), b in arb_poly()) {
        prop_assert_eq!(a.sub(&b).is_zero(), a == b);
    }

    #[test]
    fn exact_division_inverts_multiplication(a in arb_poly(), b in arb_poly()) {
        prop_assume!(!b.is_zero());
        let q = a.mul(&b).div_exact(&b).unwrap();
        prop_assert_eq!(q, a);
    }

    #[test]
    fn unit_inversion_roundtrip(a in arb_poly(), b in arb_poly(), c in 1i8..=7) {
        // unit = c + u * b
        let unit = Poly::from_int(c as i64)
            .add(&Poly::var(VarId::U).mul(&b));
        let inv = unit.invert_unit(6).unwrap();
        let lhs = a.mul(&unit).mul(&inv);
        prop_assert_eq!(lhs, a.as_mod(6));
    }

    #[test]
    fn specialization_is_ring_hom(a in arb_poly(), b in arb_poly()) {
        prop_assert_eq!(a.mul(&b).specialize_q1(), a.specialize_q1().mul(&b.specialize_q1()));
        prop_assert_eq!(a.add(&b).specialize_q1(), a.specialize_q1().add(&b.specialize_q1()));
    }

    #[test]
    fn parse_print_roundtrip(a in arb_poly()) {
        let printed = a.to_string();
        let parsed = Poly::parse(&printed).unwrap();
        prop_assert_eq!(parsed, a);
    }

    #[test]
    fn q_leibniz_rule(f in arb_x_poly(), g in arb_x_poly()) {
        // q-d(fg) = q-d(f) g + shift_q(f) q-d(g)
        let lhs = q_partial(&f.mul(&g), 1).unwrap();
        let rhs = q_partial(&f, 1)
            .unwrap()
            .mul(&g)
            .add(&shift_q(&f, 1).unwrap().mul(&q_partial(&g, 1).unwrap()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn q_partials_commute(f in arb_x_poly()) {
        let ab = q_partial(&q_partial(&f, 1).unwrap(), 2).unwrap();
        let ba = q_partial(&q_partial(&f, 2).unwrap(), 1).unwrap();
        prop_assert_eq!(ab, ba);
    }
}

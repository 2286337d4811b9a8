//! Property tests for the exact-arithmetic kernel.
//!
//!  - Ring axioms: commutativity, associativity, distributivity, `(p·q)/q = p`
//!  - Leibniz rule for formal partial derivatives
//!  - Localized equality is an equivalence compatible with arithmetic
//!  - Field axioms in `Q(√d)`
//!  - Canonical text round-trips

use std::sync::Arc;

use multiloop_core::algebra::{
    Coefficient, Localized, Monomial, Polynomial, QuadraticExtension, Ring, Substitution,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

const NAMES: [&str; 3] = ["x", "y", "u"];

fn ring() -> Arc<Ring> {
    Ring::with_names(&NAMES, &["u"], Some(QuadraticExtension::from_int(3).unwrap())).unwrap()
}

fn plain_ring() -> Arc<Ring> {
    Ring::with_names(&NAMES, &["u"], None).unwrap()
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q)))
}

fn coefficient(radical: bool) -> impl Strategy<Value = Coefficient> {
    let rad = if radical { (-3i64..=3).boxed() } else { Just(0i64).boxed() };
    (rational(), rad, 1i64..=3)
        .prop_map(|(a, b, q)| Coefficient::new(a, BigRational::new(BigInt::from(b), BigInt::from(q))))
}

fn terms(radical: bool) -> impl Strategy<Value = Vec<(Vec<i32>, Coefficient)>> {
    prop::collection::vec(((0i32..=3, 0i32..=3, -2i32..=3), coefficient(radical)), 0..6)
        .prop_map(|ts| ts.into_iter().map(|((a, b, c), k)| (vec![a, b, c], k)).collect())
}

fn poly_in(ring: Arc<Ring>, radical: bool) -> impl Strategy<Value = Polynomial> {
    terms(radical).prop_map(move |ts| {
        Polynomial::from_terms(&ring, ts.into_iter().map(|(e, c)| (Monomial::from_exponents(e), c)))
            .unwrap()
    })
}

fn poly() -> impl Strategy<Value = Polynomial> {
    poly_in(ring(), true)
}

/// Pivot used for the localized properties: `x·u − y`.
fn pivot(r: &Arc<Ring>) -> Polynomial {
    &(&Polynomial::var(r, "x").unwrap() * &Polynomial::var(r, "u").unwrap())
        - &Polynomial::var(r, "y").unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn addition_and_multiplication_commute(p in poly(), q in poly()) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
    }

    #[test]
    fn multiplication_is_associative(p in poly(), q in poly(), s in poly()) {
        prop_assert_eq!(&(&p * &q) * &s, &p * &(&q * &s));
        prop_assert_eq!(&(&p + &q) + &s, &p + &(&q + &s));
    }

    #[test]
    fn multiplication_distributes(p in poly(), q in poly(), s in poly()) {
        prop_assert_eq!(&p * &(&q + &s), &(&p * &q) + &(&p * &s));
    }

    #[test]
    fn subtraction_inverts_addition(p in poly(), q in poly()) {
        prop_assert_eq!(&(&p + &q) - &q, p.clone());
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn exact_division_recovers_factor(p in poly(), q in poly()) {
        prop_assume!(!q.is_zero());
        prop_assert_eq!((&p * &q).exact_divide(&q).unwrap(), p);
    }

    #[test]
    fn derivative_is_a_derivation(p in poly(), q in poly(), v in 0usize..3) {
        let name = NAMES[v];
        let lhs = (&p * &q).derivative(name).unwrap();
        let rhs = &(&p * &q.derivative(name).unwrap()) + &(&q * &p.derivative(name).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn localized_lift_is_equal(p in poly_in(plain_ring(), false), j in 0u32..3) {
        let r = plain_ring();
        let s = pivot(&r);
        let a = Localized::new(p.clone(), s.clone(), j).unwrap();
        let b = Localized::new(&p * &s, s.clone(), j + 1).unwrap();
        prop_assert!(a.equals(&b).unwrap());
        prop_assert!(b.equals(&a).unwrap());
        prop_assert!(a.equals(&a).unwrap());
    }

    #[test]
    fn localized_equality_respects_arithmetic(
        p in poly_in(plain_ring(), false),
        q in poly_in(plain_ring(), false),
        j in 0u32..3,
        k in 0u32..3,
    ) {
        let r = plain_ring();
        let s = pivot(&r);
        let a = Localized::new(p.clone(), s.clone(), j).unwrap();
        let a2 = Localized::new(&p * &s.pow(2), s.clone(), j + 2).unwrap();
        let b = Localized::new(q, s.clone(), k).unwrap();
        prop_assert!((&a + &b).equals(&(&a2 + &b)).unwrap());
        prop_assert!((&a * &b).equals(&(&a2 * &b)).unwrap());
        prop_assert!((&a - &a2).is_zero());
    }

    #[test]
    fn localized_derivative_is_a_derivation(
        p in poly_in(plain_ring(), false),
        q in poly_in(plain_ring(), false),
        j in 0u32..3,
        k in 0u32..3,
        v in 0usize..3,
    ) {
        let r = plain_ring();
        let s = pivot(&r);
        let a = Localized::new(p, s.clone(), j).unwrap();
        let b = Localized::new(q, s, k).unwrap();
        let name = NAMES[v];
        let lhs = (&a * &b).derivative(name).unwrap();
        let rhs = &(&a * &b.derivative(name).unwrap()) + &(&b * &a.derivative(name).unwrap());
        prop_assert!(lhs.equals(&rhs).unwrap());
    }

    #[test]
    fn coefficient_field_axioms(a in coefficient(true), b in coefficient(true), c in coefficient(true)) {
        let ext = QuadraticExtension::from_int(3).unwrap();
        let e = Some(&ext);
        prop_assert_eq!(a.mul(&b, e), b.mul(&a, e));
        prop_assert_eq!(a.mul(&b, e).mul(&c, e), a.mul(&b.mul(&c, e), e));
        prop_assert_eq!(a.mul(&b.add(&c), e), a.mul(&b, e).add(&a.mul(&c, e)));
        if !a.is_zero() {
            let inv = a.inverse(e).unwrap();
            prop_assert!(a.mul(&inv, e).is_one());
        }
    }

    #[test]
    fn text_round_trips(p in poly()) {
        let r = ring();
        let text = p.to_string();
        let back = Polynomial::parse(&r, &text).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn substitution_is_a_homomorphism(p in poly_in(plain_ring(), false), q in poly_in(plain_ring(), false)) {
        let r = plain_ring();
        let s = pivot(&r);
        let x_val = Localized::new(Polynomial::var(&r, "y").unwrap(), s.clone(), 1).unwrap();
        let u_val = Localized::from_poly(Polynomial::var(&r, "u").unwrap().pow(2), &s);
        let sub = Substitution::new(&r, s.clone()).unwrap()
            .assign("x", x_val).unwrap()
            .assign("u", u_val).unwrap();
        let lhs = (&p * &q).substitute(&sub).unwrap();
        let rhs = &p.substitute(&sub).unwrap() * &q.substitute(&sub).unwrap();
        prop_assert!(lhs.equals(&rhs).unwrap());
        let lhs = (&p + &q).substitute(&sub).unwrap();
        let rhs = &p.substitute(&sub).unwrap() + &q.substitute(&sub).unwrap();
        prop_assert!(lhs.equals(&rhs).unwrap());
    }
}

/// `p²` re-expanded as a sum of monomial shifts of `p`, each added `|c|` times.
fn square_by_repeated_addition(p: &Polynomial) -> Polynomial {
    let mut acc = Polynomial::zero(p.ring());
    for (m, c) in p.terms() {
        let shifted = p.mul_monomial(m);
        let n = c.rational_part().to_integer();
        let n: i64 = n.try_into().unwrap();
        for _ in 0..n.unsigned_abs() {
            acc = if n > 0 { &acc + &shifted } else { &acc - &shifted };
        }
    }
    acc
}

#[test]
fn discriminant_square_matches_repeated_addition() {
    let r = Ring::with_names(&["x2", "y2", "w"], &[], None).unwrap();
    let d = Polynomial::parse(&r, "w^2 - 4*x2*y2").unwrap();
    let sq = d.pow(2);
    assert_eq!(sq, square_by_repeated_addition(&d));
    let coeffs: Vec<String> = sq.terms().rev().map(|(_, c)| c.to_string()).collect();
    assert_eq!(coeffs, ["16", "-8", "1"]);
    assert_eq!(sq.to_string(), "16*x2^2*y2^2 - 8*x2*y2*w^2 + w^4");
}

//! Coulomb-side identities: relation, redundancy, bracket table, Jacobi,
//! grading, matrix form, SL(2) invariance, flavored relation and the
//! negative controls.

use std::sync::Arc;

use multiloop_core::algebra::{Localized, Polynomial, Ring};
use multiloop_core::coulomb::*;
use multiloop_core::relation;
use multiloop_core::slice::PolyMatrix;
use proptest::prelude::*;

#[test]
fn relation_holds_through_rank_five() {
    for r in 1..=5 {
        let chart = EtaleChart::new(r, false).unwrap();
        let o = check_relation_starlet(&chart).unwrap();
        assert!(o.passed, "r={r}: {:?}", o.witness);
        assert!(check_regularity(&chart, &build_generators(&chart)).passed);
    }
}

#[test]
fn redundancy_identities() {
    for r in 1..=5 {
        let chart = EtaleChart::new(r, false).unwrap();
        assert!(check_redundancy(&chart).passed, "r={r}");
        assert!(!check_redundancy_with_sign(&chart, -1).passed, "r={r}");
    }
}

#[test]
fn bracket_table_and_jacobi() {
    for r in 2..=4 {
        let chart = EtaleChart::new(r, false).unwrap();
        let o = check_poifo(&chart).unwrap();
        assert!(o.passed, "r={r}: {:?}", o.witness);
        let j = check_jacobi(&chart).unwrap();
        assert!(j.passed, "r={r}: {:?}", j.witness);
        assert!(j.derived.contains_key("bracket_x1y1"));
    }
}

#[test]
fn x1_y1_bracket_value() {
    // Oracle: the discriminant pulled back to the chart, raised to r − 1.
    for r in 1..=4 {
        let chart = EtaleChart::new(r, false).unwrap();
        let gens = build_generators(&chart);
        let ring = relation::relation_ring(r, false);
        let d = relation::discriminant(&ring).substitute(&gens.substitution(&chart).unwrap()).unwrap();
        let expected = d.to_polynomial().unwrap().pow(r - 1).scale_int(2 * r as i64);
        assert_eq!(bracket_x1y1(&chart).unwrap(), expected, "r={r}");
    }
}

#[test]
fn sl2_weights_and_grading() {
    for r in 2..=4 {
        let o = check_sl2_grading(&EtaleChart::new(r, false).unwrap()).unwrap();
        assert!(o.passed, "r={r}: {:?}", o.witness);
        assert_eq!(o.derived["degree"], 4 * r);
    }
}

#[test]
fn matrix_form_with_derived_rescaling() {
    for (r, k2) in [(2, "1/8"), (3, "1/32")] {
        let o = check_hanany_form(r, HananyRescaling::Derived).unwrap();
        assert!(o.passed, "r={r}: {:?}", o.witness);
        assert_eq!(o.derived["constant"], k2);
        assert_eq!(o.derived["required_k_squared"], k2);
    }
}

#[test]
fn matrix_form_with_stated_rescaling_is_not_proportional() {
    for r in 2..=3 {
        let o = check_hanany_form(r, HananyRescaling::Stated).unwrap();
        assert!(!o.passed, "r={r}");
        assert!(o.witness.unwrap().contains("residual"));
    }
}

#[test]
fn sl2_invariance() {
    for element in Sl2Element::ALL {
        let o = check_sl2_action_invariance(2, element).unwrap();
        assert!(o.passed, "{element:?}: {:?}", o.witness);
    }
    for element in [Sl2Element::Identity, Sl2Element::Rotation, Sl2Element::Generic] {
        assert!(check_sl2_action_invariance(3, element).unwrap().passed, "r=3 {element:?}");
    }
}

#[test]
fn flavored_relation() {
    for r in 2..=4 {
        let o = check_relation_flavored(&EtaleChart::new(r, true).unwrap()).unwrap();
        assert!(o.passed, "r={r}: {:?}", o.witness);
    }
    assert!(check_relation_flavored(&EtaleChart::new(2, false).unwrap()).is_err());
}

#[test]
fn flavored_generators_carry_one_pivot_power() {
    // The pivot does not divide the numerator: at s = 0 it is (u1 − u2)·Π(−z_i).
    let chart = EtaleChart::new(3, true).unwrap();
    let gens = build_generators(&chart);
    assert_eq!(gens.x1.power(), 1);
    assert_eq!(gens.y1.power(), 1);
    assert_eq!(gens.x1.reduce().power(), 1);
    assert_eq!(gens.x2.power(), 0);
}

#[test]
fn sigma_sums_are_even() {
    for r in 1..=4 {
        for k in 0..=r {
            assert!(check_sigma_parity(r, k).unwrap().passed, "r={r} k={k}");
        }
    }
}

#[test]
fn negative_controls_fail() {
    for r in 2..=4 {
        let chart = EtaleChart::new(r, false).unwrap();
        for control in NegativeControl::all() {
            let o = run_negative_control(&chart, control).unwrap();
            assert!(!o.passed, "r={r}: {} did not fail", control.name());
            assert!(o.witness.is_some());
        }
    }
    for r in 2..=3 {
        let chart = EtaleChart::new(r, true).unwrap();
        for flip in SignFlip::ALL {
            assert!(!run_negative_control(&chart, NegativeControl::Flip(flip)).unwrap().passed, "r={r} {flip:?}");
        }
    }
}

fn chart_poly(chart: &EtaleChart, coeffs: &[i64]) -> Localized {
    // Sparse combination of small monomials in u1^±, u2, v1, v2.
    let monomials = ["1", "u1", "v1", "u2*v1", "u1^-1*v2^2", "u1*u2*v2", "v1*v2", "u2^2"];
    let ring = chart.ring();
    let mut p = Polynomial::zero(ring);
    for (c, m) in coeffs.iter().zip(monomials) {
        p = &p + &Polynomial::parse(ring, m).unwrap().scale_int(*c);
    }
    Localized::from_poly(p, chart.pivot())
}

fn sl2_integer(ring: &Arc<Ring>, steps: &[(bool, i64)]) -> PolyMatrix {
    // Product of elementary unipotent matrices.
    let mut s = PolyMatrix::identity(ring, 2);
    for &(upper, t) in steps {
        let mut e = PolyMatrix::identity(ring, 2);
        let (i, j) = if upper { (0, 1) } else { (1, 0) };
        e.set(i, j, Polynomial::from_int(ring, t));
        s = s.try_mul(&e).unwrap();
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bracket_is_antisymmetric_and_leibniz(
        a in prop::collection::vec(-3i64..=3, 8),
        b in prop::collection::vec(-3i64..=3, 8),
        c in prop::collection::vec(-3i64..=3, 8),
    ) {
        let chart = EtaleChart::new(2, false).unwrap();
        let (f, g, h) = (chart_poly(&chart, &a), chart_poly(&chart, &b), chart_poly(&chart, &c));
        let fg = poisson_bracket(&f, &g).unwrap();
        let gf = poisson_bracket(&g, &f).unwrap();
        prop_assert!(fg.try_add(&gf).unwrap().is_zero());
        let lhs = poisson_bracket(&f, &g.try_mul(&h).unwrap()).unwrap();
        let rhs = fg.try_mul(&h).unwrap().try_add(&g.try_mul(&poisson_bracket(&f, &h).unwrap()).unwrap()).unwrap();
        prop_assert!(lhs.equals(&rhs).unwrap());
    }

    #[test]
    fn matrix_form_invariant_under_integer_sl2(
        steps in prop::collection::vec((any::<bool>(), -3i64..=3), 1..4),
    ) {
        let ring = Ring::with_names(&relation::GENERATORS, &[], None).unwrap();
        let (n, a) = hanany_data(&ring);
        let s = sl2_integer(&ring, &steps);
        let n2 = s.try_mul(&n).unwrap().try_mul(&s.transpose()).unwrap();
        let a2 = s.try_mul(&a).unwrap();
        prop_assert_eq!(hanany_polynomial(&n2, &a2, 2).unwrap(), hanany_polynomial(&n, &a, 2).unwrap());
    }
}

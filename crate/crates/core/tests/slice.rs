//! Slice-side identities for r = 2..4: structure, trace solve, determinant
//! identities and the flavored relation.

use multiloop_core::algebra::{Coefficient, Polynomial};
use multiloop_core::relation;
use multiloop_core::slice::{
    build_a, build_b, build_e, build_f, build_h, build_omega, check_structure, flavored_slice_relation,
    slice_relation, PolyMatrix, SliceContext,
};

#[test]
fn structure_through_rank_six() {
    for r in 2..=6 {
        let o = check_structure(&SliceContext::new(r).unwrap()).unwrap();
        assert!(o.passed, "r={r}: {:?}", o.witness);
    }
}

#[test]
fn omega_pairs_with_the_triple() {
    // Ω is nondegenerate and e, f, h are constant.
    for r in 2..=6 {
        let ctx = SliceContext::new(r).unwrap();
        let om = build_omega(&ctx).unwrap();
        assert!(om.determinant().unwrap().constant_value().is_some_and(|c| !c.is_zero()));
        for m in [build_e(&ctx), build_f(&ctx), build_h(&ctx)] {
            assert!((0..m.rows()).all(|i| (0..m.cols()).all(|j| m.get(i, j).constant_value().is_some())));
        }
    }
}

#[test]
fn unflavored_relation() {
    for r in 2..=4 {
        let ctx = SliceContext::new(r).unwrap();
        let rel = slice_relation(&ctx).unwrap();
        assert!(rel.outcome.passed, "r={r}: {:?}", rel.outcome.witness);
        assert_eq!(rel.alphas.len(), r as usize - 1);
        assert!(rel.alphas.iter().all(|a| a.is_rational() && !a.is_zero()));
        let ring = relation::relation_ring(r, false);
        assert_eq!(rel.relation, -relation::starlet(&ring, r));
    }
}

#[test]
fn rank_three_alphas() {
    let rel = slice_relation(&SliceContext::new(3).unwrap()).unwrap();
    assert_eq!(rel.alphas, vec![Coefficient::from_ratio(-1, 10), Coefficient::from_ratio(-91, 600)]);
}

#[test]
fn flavored_relation() {
    for r in 2..=4 {
        let ctx = SliceContext::new(r).unwrap();
        let rel = flavored_slice_relation(&ctx).unwrap();
        assert!(rel.outcome.passed, "r={r}: {:?}", rel.outcome.witness);
        let ring = relation::relation_ring(r, true);
        assert_eq!(rel.relation, relation::flavored_relation(&ring, r));
    }
}

#[test]
fn rank_two_flavored_b() {
    let ctx = SliceContext::new(2).unwrap();
    let rel = flavored_slice_relation(&ctx).unwrap();
    let expected = Polynomial::parse(ctx.ring(), "-w^2 + 4*x2*y2 + z1^2 + z2^2").unwrap();
    assert_eq!(rel.b_values, vec![expected]);
}

#[test]
fn block_is_leading_minor() {
    let ctx = SliceContext::new(3).unwrap();
    let a = build_a(&ctx);
    let b: PolyMatrix = build_b(&ctx, &a);
    assert_eq!(b.rows(), 4);
    for i in 0..4 {
        for j in 0..4 {
            assert_eq!(b.get(i, j), a.get(i, j));
        }
    }
}

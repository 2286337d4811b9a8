//! The `sp(2r)` side: the sl₂-triple `e, f, h`, the form `Ω`, the slice
//! matrix `A = e + (centralizer of f)` and its block `B`, the trace
//! conditions that cut out the nilpotent slice, and the resulting relations.

mod matrix;

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::Value;
use thiserror::Error;

pub use matrix::{MatrixError, PolyMatrix};

use crate::algebra::symmetric::{elementary_from_power_sums, power_sum};
use crate::algebra::{coefficient_text, AlgebraError, Coefficient, Polynomial, QuadraticExtension, Ring};
use crate::check::{zero_residual, Outcome};
use crate::relation::{self, z_names};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SliceError {
    #[error("slice constructions need r >= 2 (got {0})")]
    RankTooSmall(u32),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("trace condition {k} is not linear in b{k}: {witness}")]
    NotLinear { k: u32, witness: String },
    #[error("trace condition {k} has zero coefficient at b{k}")]
    ZeroLinearCoefficient { k: u32 },
    #[error("b{k} is not a constant multiple of D^{k}: {remainder}")]
    NotPowerForm { k: u32, remainder: String },
    #[error("Ω does not match its anchor entries: {0}")]
    AnchorMismatch(String),
}

/// Ring and constants for one value of `r`: variables
/// `x1, y1, x2, y2, w, b1..b_{r-1}, z1..z_r, lam` over `Q(√d)`, `d = 2·(2r−3)!`.
#[derive(Clone, Debug)]
pub struct SliceContext {
    r: u32,
    ring: Arc<Ring>,
    c: Coefficient,
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

impl SliceContext {
    pub fn new(r: u32) -> Result<Self, SliceError> {
        if r < 2 {
            return Err(SliceError::RankTooSmall(r));
        }
        let d = BigInt::from(2) * factorial(2 * r - 3);
        let ext = QuadraticExtension::new(BigRational::from_integer(d.clone()))?;
        let mut names: Vec<String> = ["x1", "y1", "x2", "y2", "w"].iter().map(|s| s.to_string()).collect();
        names.extend((1..r).map(|k| format!("b{k}")));
        names.extend(z_names(r));
        names.push("lam".into());
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let ring = Ring::with_names(&refs, &[], Some(ext))?;
        // c = 1/√d = √d/d
        let c = Coefficient::radical(BigRational::new(BigInt::one(), d));
        Ok(Self { r, ring, c })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    /// `c = 1/√(2·(2r−3)!)`.
    pub fn c(&self) -> &Coefficient {
        &self.c
    }

    /// Matrix size `2r`.
    pub fn n(&self) -> usize {
        2 * self.r as usize
    }

    pub fn var(&self, name: &str) -> Polynomial {
        Polynomial::var(&self.ring, name).expect("variable of the slice ring")
    }

    /// `D = w² − 4·x2·y2`.
    pub fn discriminant(&self) -> Polynomial {
        &self.var("w").pow(2) - &(&self.var("x2") * &self.var("y2")).scale_int(4)
    }

    fn int(&self, n: i64) -> Polynomial {
        Polynomial::from_int(&self.ring, n)
    }

    fn rational(&self, q: BigRational) -> Polynomial {
        Polynomial::from_rational(&self.ring, q)
    }
}

/// `e`: superdiagonal `(1, 2, …, 2r−3, 0, 0)`.
pub fn build_e(ctx: &SliceContext) -> PolyMatrix {
    let n = ctx.n();
    PolyMatrix::from_fn(&ctx.ring, n, n, |i, j| {
        if j == i + 1 && i < n - 3 {
            ctx.int(i as i64 + 1)
        } else {
            Polynomial::zero(&ctx.ring)
        }
    })
}

/// `f`: subdiagonal `(2r−3, 2r−4, …, 1, 0, 0)`.
pub fn build_f(ctx: &SliceContext) -> PolyMatrix {
    let n = ctx.n();
    PolyMatrix::from_fn(&ctx.ring, n, n, |i, j| {
        if i == j + 1 && j < n - 3 {
            ctx.int((n - 3 - j) as i64)
        } else {
            Polynomial::zero(&ctx.ring)
        }
    })
}

/// `h`: diagonal `(2r−3, 2r−5, …, 3−2r, 0, 0)`.
pub fn build_h(ctx: &SliceContext) -> PolyMatrix {
    let n = ctx.n();
    PolyMatrix::from_fn(&ctx.ring, n, n, |i, j| {
        if i == j && i < n - 2 {
            ctx.int(n as i64 - 3 - 2 * i as i64)
        } else {
            Polynomial::zero(&ctx.ring)
        }
    })
}

fn inverse_binomial(n: u32, k: u32) -> BigRational {
    BigRational::new(BigInt::one(), binomial(BigInt::from(n), BigInt::from(k)))
}

/// `Ω`: row `i` (1-based, `i ≤ 2r−2`) holds `(−1)^i / binom(2r−3, 2r−2−i)` in
/// column `2r−1−i`; the lower-right block is `[[0, −1], [1, 0]]`.
pub fn build_omega(ctx: &SliceContext) -> Result<PolyMatrix, SliceError> {
    let n = ctx.n();
    let r = ctx.r;
    let m = 2 * r - 2;
    let mut om = PolyMatrix::zero(&ctx.ring, n, n);
    for i in 1..=m {
        let sign = if i % 2 == 0 { BigRational::one() } else { -BigRational::one() };
        let v = sign * inverse_binomial(2 * r - 3, 2 * r - 2 - i);
        om.set(i as usize - 1, (2 * r - 2 - i) as usize, ctx.rational(v));
    }
    om.set(n - 2, n - 1, ctx.int(-1));
    om.set(n - 1, n - 2, ctx.int(1));

    // Anchors read off the display: the corners of the antidiagonal block and
    // the signs of its two middle entries.
    let sign_of = |i: usize| -> i64 {
        let v = om.get(i, m as usize - 1 - i).constant_value().expect("constant entry");
        if v.rational_part() > &BigRational::zero() { 1 } else { -1 }
    };
    let top_right = ctx.rational(-inverse_binomial(2 * r - 3, 0));
    let bottom_left = ctx.rational(inverse_binomial(2 * r - 3, 2 * r - 3));
    let middle = if r.is_multiple_of(2) { (-1, 1) } else { (1, -1) };
    if om.get(0, m as usize - 1) != &top_right {
        return Err(SliceError::AnchorMismatch(format!("top-right entry {}", om.get(0, m as usize - 1))));
    }
    if om.get(m as usize - 1, 0) != &bottom_left {
        return Err(SliceError::AnchorMismatch(format!("bottom-left entry {}", om.get(m as usize - 1, 0))));
    }
    if (sign_of(r as usize - 2), sign_of(r as usize - 1)) != middle {
        return Err(SliceError::AnchorMismatch("middle signs".into()));
    }
    Ok(om)
}

/// `ΩX + XᵀΩ`; zero iff `X ∈ sp(2r)`.
pub fn symplectic_residual(x: &PolyMatrix, omega: &PolyMatrix) -> Result<PolyMatrix, MatrixError> {
    if x.rows() != x.cols() || x.rows() != omega.rows() || omega.rows() != omega.cols() {
        return Err(MatrixError::SizeMismatch(x.rows(), x.cols(), omega.rows(), omega.cols()));
    }
    omega.try_mul(x)?.try_add(&x.transpose().try_mul(omega)?)
}

pub fn check_symplectic_membership(x: &PolyMatrix, omega: &PolyMatrix) -> Result<bool, MatrixError> {
    Ok(symplectic_residual(x, omega)?.is_zero())
}

/// The slice matrix with free `b_k`, border `c·x1, c·y1` and corner block
/// `[[w, −2x2], [2y2, −w]]`.
pub fn build_a(ctx: &SliceContext) -> PolyMatrix {
    let n = ctx.n();
    let r = ctx.r as usize;
    let mut a = build_e(ctx);
    for k in 1..r {
        let b = ctx.var(&format!("b{k}"));
        // 1-based (i, j) with i − j = 2k − 1 inside the leading block
        for j in 1..=2 * r - 2 {
            let i = j + 2 * k - 1;
            if i <= 2 * r - 2 {
                let coeff = binomial(BigInt::from(2 * r - 2 - j), BigInt::from(2 * k - 1));
                a.set(i - 1, j - 1, b.scale(&Coefficient::from_bigint(coeff)));
            }
        }
    }
    let cx1 = ctx.var("x1").scale(&ctx.c);
    let cy1 = ctx.var("y1").scale(&ctx.c);
    a.set(n - 3, n - 2, cy1.clone());
    a.set(n - 3, n - 1, cx1.clone());
    a.set(n - 2, 0, -&cx1);
    a.set(n - 2, n - 2, ctx.var("w"));
    a.set(n - 2, n - 1, ctx.var("x2").scale_int(-2));
    a.set(n - 1, 0, cy1);
    a.set(n - 1, n - 2, ctx.var("y2").scale_int(2));
    a.set(n - 1, n - 1, -ctx.var("w"));
    a
}

/// The leading `(2r−2) × (2r−2)` block of `A`.
pub fn build_b(ctx: &SliceContext, a: &PolyMatrix) -> PolyMatrix {
    let m = ctx.n() - 2;
    a.block(m, m)
}

fn matrix_zero(name: &str, m: &PolyMatrix) -> Outcome {
    Outcome::expect(m.is_zero(), || format!("{name}: {}", m.nonzero_witness().unwrap_or_default()))
}

/// sl₂-triple relations, `Ωᵀ = −Ω`, membership of `e, f, h, A` in `sp(2r)`,
/// and `[f, A − e] = 0`.
pub fn check_structure(ctx: &SliceContext) -> Result<Outcome, SliceError> {
    let (e, f, h) = (build_e(ctx), build_f(ctx), build_h(ctx));
    let om = build_omega(ctx)?;
    let a = build_a(ctx);
    let two = Coefficient::from_int(2);
    let mut out = Outcome::pass();
    out = out.and(matrix_zero("[h,e] - 2e", &h.commutator(&e)?.try_sub(&e.scale(&two))?));
    out = out.and(matrix_zero("[h,f] + 2f", &h.commutator(&f)?.try_add(&f.scale(&two))?));
    out = out.and(matrix_zero("[e,f] - h", &e.commutator(&f)?.try_sub(&h)?));
    out = out.and(matrix_zero("Ω^T + Ω", &om.transpose().try_add(&om)?));
    for (name, x) in [("e", &e), ("f", &f), ("h", &h), ("A", &a)] {
        out = out.and(matrix_zero(&format!("ΩX + X^TΩ for X = {name}"), &symplectic_residual(x, &om)?));
    }
    out = out.and(matrix_zero("[f, A - e]", &f.commutator(&a.try_sub(&e)?)?));
    let id = PolyMatrix::identity(&ctx.ring, ctx.n());
    out = out.require(!check_symplectic_membership(&id, &om)?, || "identity passed the sp(2r) test".into());
    Ok(out)
}

/// `A^1, A^2, …` computed once each.
struct Powers {
    base: PolyMatrix,
    powers: Vec<PolyMatrix>,
}

impl Powers {
    fn new(base: PolyMatrix) -> Self {
        Self { powers: vec![base.clone()], base }
    }

    fn get(&mut self, k: usize) -> Result<&PolyMatrix, MatrixError> {
        while self.powers.len() < k {
            let next = self.powers.last().unwrap().try_mul(&self.base)?;
            self.powers.push(next);
        }
        Ok(&self.powers[k - 1])
    }

    fn trace(&mut self, k: usize) -> Result<Polynomial, MatrixError> {
        self.get(k)?.trace()
    }
}

/// Solved slice: the `b_k` values and `A` with them substituted.
#[derive(Clone, Debug)]
pub struct TraceSolution {
    pub b_values: Vec<Polynomial>,
    /// `α_k` with `b_k = α_k·D^k` (unflavored solve only).
    pub alphas: Vec<Coefficient>,
    pub a: PolyMatrix,
}

/// Right-hand side of the `k`-th trace condition: 0, or `2·Σ z_i^{2k}` when flavored.
fn trace_target(ctx: &SliceContext, k: u32, flavored: bool) -> Result<Polynomial, SliceError> {
    if !flavored {
        return Ok(Polynomial::zero(&ctx.ring));
    }
    let names = z_names(ctx.r);
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    Ok(power_sum(&ctx.ring, &refs, 2 * k)?.scale_int(2))
}

/// Solves `tr A^{2k} = target_k` for `k = 1..r−1` in order. Each condition,
/// with `b_1..b_{k−1}` already substituted, must be linear in `b_k` and free of
/// the later `b`'s. Unflavored, each `b_k` must equal `α_k·D^k` with `α_k`
/// a nonzero constant.
pub fn solve_trace_conditions(ctx: &SliceContext, flavored: bool) -> Result<TraceSolution, SliceError> {
    let r = ctx.r;
    let mut a = build_a(ctx);
    let mut b_values = Vec::new();
    let mut alphas = Vec::new();
    let disc = ctx.discriminant();
    for k in 1..r {
        let name = format!("b{k}");
        let mut powers = Powers::new(a.clone());
        let cond = &powers.trace(2 * k as usize)? - &trace_target(ctx, k, flavored)?;
        let later: Vec<String> = (k + 1..r).map(|j| format!("b{j}")).collect();
        let involves_later = later.iter().any(|b| cond.degree_in(b).ok().flatten().is_some_and(|d| d != 0));
        let degree = cond.degree_in(&name)?.unwrap_or(0);
        if involves_later || degree > 1 {
            return Err(SliceError::NotLinear { k, witness: cond.to_string() });
        }
        let lin = cond.coefficient_of(&name, 1)?;
        if lin.is_zero() {
            return Err(SliceError::ZeroLinearCoefficient { k });
        }
        let constant = cond.coefficient_of(&name, 0)?;
        let value = (-constant).exact_divide(&lin)?;
        if !flavored {
            let alpha = value
                .exact_divide(&disc.pow(k))
                .ok()
                .and_then(|q| q.constant_value())
                .filter(|c| !c.is_zero())
                .ok_or_else(|| SliceError::NotPowerForm { k, remainder: value.to_string() })?;
            alphas.push(alpha);
        }
        a = a.try_map(|p| p.substitute_poly(&ctx.ring, &[(&name, value.clone())]))?;
        b_values.push(value);
    }
    Ok(TraceSolution { b_values, alphas, a })
}

/// Brings a slice-ring polynomial free of `b`, `lam` into the relation ring.
fn to_relation_ring(p: &Polynomial, r: u32, flavored: bool) -> Result<Polynomial, SliceError> {
    Ok(p.embed(&relation::relation_ring(r, flavored))?)
}

/// The unflavored slice relation together with the checks leading to it.
#[derive(Clone, Debug)]
pub struct SliceRelation {
    pub alphas: Vec<Coefficient>,
    /// `det A` after substituting the solved `b_k`, in `C[x1,x2,y1,y2,w]`.
    pub relation: Polynomial,
    pub outcome: Outcome,
}

/// Odd power traces vanish and even ones meet their targets, up to `A^{2r−1}`.
fn trace_checks(ctx: &SliceContext, a: &PolyMatrix, flavored: bool, free_b: bool) -> Result<Outcome, SliceError> {
    let mut powers = Powers::new(a.clone());
    let mut out = Outcome::pass();
    let top = 2 * ctx.r as usize - 1;
    for k in 1..=top {
        let t = powers.trace(k)?;
        if k % 2 == 1 {
            out = out.and(zero_residual(&format!("tr A^{k}"), &t));
        } else if !free_b {
            let target = trace_target(ctx, (k / 2) as u32, flavored)?;
            out = out.and(zero_residual(&format!("tr A^{k} - target"), &(&t - &target)));
        }
    }
    Ok(out)
}

pub fn slice_relation(ctx: &SliceContext) -> Result<SliceRelation, SliceError> {
    let r = ctx.r;
    let disc = ctx.discriminant();
    let q = relation::cubic(&ctx.ring);

    // (i) with free b's: det A + D·det B − Q = 0.
    let a_free = build_a(ctx);
    let det_a_free = a_free.determinant()?;
    let det_b_free = build_b(ctx, &a_free).determinant()?;
    let mut out = zero_residual("det A + D det B - Q (free b)", &(&(&det_a_free + &(&disc * &det_b_free)) - &q));
    out = out.and(trace_checks(ctx, &a_free, false, true)?);

    // (ii) after the trace solve.
    let sol = solve_trace_conditions(ctx, false)?;
    out = out.and(trace_checks(ctx, &sol.a, false, false)?);
    let det_b = build_b(ctx, &sol.a).determinant()?;
    out = out.and(zero_residual("det B - D^(r-1)", &(&det_b - &disc.pow(r - 1))));
    let det_a = sol.a.determinant()?;
    out = out.and(zero_residual("det A - (Q - D^r)", &(&det_a - &(&q - &disc.pow(r)))));

    let relation = to_relation_ring(&det_a, r, false)?;
    let weights = relation::grading(relation.ring(), r);
    out = out.require(relation.homogeneous_degree(&weights) == Some(4 * r as i64), || {
        format!("relation not homogeneous of degree {}: degrees {:?}", 4 * r, relation.weighted_degrees(&weights))
    });
    let alpha_text: Vec<Value> = sol.alphas.iter().map(|c| Value::from(coefficient_text(c, &ctx.ring))).collect();
    out.record("alpha", Value::Array(alpha_text));
    out.record("relation", relation.to_string());
    Ok(SliceRelation { alphas: sol.alphas, relation, outcome: out })
}

#[derive(Clone, Debug)]
pub struct FlavoredSliceRelation {
    pub b_values: Vec<Polynomial>,
    /// `det A − (−1)^r z1²⋯zr²` after the flavored solve, in `C[x1,..,w,z]`.
    pub relation: Polynomial,
    pub outcome: Outcome,
}

/// Flavored solve (`tr A^{2k} = 2·Σ z_i^{2k}`), the σ-sum formula for
/// `det B`, the flavored relation, and the characteristic polynomial: it
/// differs from `Π(λ² − z_i²)` only in the constant term, by exactly the
/// relation, so it equals `Π(λ² − z_i²)` on the slice.
pub fn flavored_slice_relation(ctx: &SliceContext) -> Result<FlavoredSliceRelation, SliceError> {
    let r = ctx.r;
    let ring = &ctx.ring;
    let sol = solve_trace_conditions(ctx, true)?;
    let mut out = trace_checks(ctx, &sol.a, true, false)?;

    // σ's from power sums by Newton's identities, against direct expansion.
    let names = z_names(r);
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let p: Vec<Polynomial> = (1..=r).map(|k| power_sum(ring, &refs, k)).collect::<Result<_, _>>()?;
    let sigma = elementary_from_power_sums(ring, &p);
    out = out.require(sigma == relation::sigmas(ring, r), || "Newton identities disagree with σ expansion".into());

    let det_b = build_b(ctx, &sol.a).determinant()?;
    out = out.and(zero_residual("det B - σ-sum", &(&det_b - &relation::flavored_det_b(ring, r))));

    let det_a = sol.a.determinant()?;
    let z_square_product = refs.iter().fold(Polynomial::one(ring), |acc, z| &acc * &ctx.var(z).pow(2));
    let sign = if r.is_multiple_of(2) { 1 } else { -1 };
    let rel_slice = &det_a - &z_square_product.scale_int(sign);
    out = out.and(zero_residual("det A - (-1)^r Πz² - relation", &(&rel_slice - &relation::flavored_relation(ring, r))));

    // Characteristic polynomial det(λI − A).
    let lam = ctx.var("lam");
    let n = ctx.n();
    let lam_minus_a = PolyMatrix::identity(ring, n).scale(&Coefficient::one());
    let lam_minus_a = lam_minus_a.try_map(|p| Ok(p * &lam))?.try_sub(&sol.a)?;
    let charpoly = lam_minus_a.det_fraction_free()?;
    let expected = refs.iter().fold(Polynomial::one(ring), |acc, z| &acc * &(&lam.pow(2) - &ctx.var(z).pow(2)));
    let diff = &charpoly - &expected;
    out = out.and(zero_residual("char poly - Π(λ²-z²) - relation", &(&diff - &rel_slice)));

    let relation = to_relation_ring(&rel_slice, r, true)?;
    let weights = relation::grading(relation.ring(), r);
    out = out.require(relation.homogeneous_degree(&weights) == Some(4 * r as i64), || {
        format!("flavored relation not homogeneous: degrees {:?}", relation.weighted_degrees(&weights))
    });
    let b_text: Vec<Value> = sol.b_values.iter().map(|b| Value::from(b.to_string())).collect();
    out.record("b", Value::Array(b_text));
    out.record("relation", relation.to_string());
    Ok(FlavoredSliceRelation { b_values: sol.b_values, relation, outcome: out })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        let ctx = SliceContext::new(3).unwrap();
        let c2 = ctx.c().mul(ctx.c(), ctx.ring().ext());
        assert!(c2.mul(&Coefficient::from_int(12), ctx.ring().ext()).is_one());
        assert!(matches!(SliceContext::new(1), Err(SliceError::RankTooSmall(1))));
    }

    #[test]
    fn small_matrices_at_rank_two() {
        let ctx = SliceContext::new(2).unwrap();
        let e = build_e(&ctx);
        assert_eq!(e.get(0, 1), &Polynomial::one(ctx.ring()));
        assert!(e.get(1, 2).is_zero() && e.get(2, 3).is_zero());
        let h = build_h(&ctx);
        let diag: Vec<String> = (0..4).map(|i| h.get(i, i).to_string()).collect();
        assert_eq!(diag, ["1", "-1", "0", "0"]);
        let a = build_a(&ctx);
        let row2: Vec<String> = (0..4).map(|j| a.get(1, j).to_string()).collect();
        assert_eq!(row2, ["b1", "0", "(1/2)√2*y1", "(1/2)√2*x1"]);
        let row3: Vec<String> = (0..4).map(|j| a.get(2, j).to_string()).collect();
        assert_eq!(row3, ["(-1/2)√2*x1", "0", "w", "-2*x2"]);
        let row4: Vec<String> = (0..4).map(|j| a.get(3, j).to_string()).collect();
        assert_eq!(row4, ["(1/2)√2*y1", "0", "2*y2", "-w"]);
        let b = build_b(&ctx, &a);
        assert_eq!(b.to_string(), "[0, 1]\n[b1, 0]\n");
        assert_eq!(b.determinant().unwrap().to_string(), "-b1");
    }

    #[test]
    fn omega_rows() {
        let ctx = SliceContext::new(3).unwrap();
        let om = build_omega(&ctx).unwrap();
        let anti: Vec<String> = (0..4).map(|i| om.get(i, 3 - i).to_string()).collect();
        assert_eq!(anti, ["-1", "1/3", "-1/3", "1"]);
    }

    #[test]
    fn structure_small_ranks() {
        for r in 2..=4 {
            let o = check_structure(&SliceContext::new(r).unwrap()).unwrap();
            assert!(o.passed, "r={r}: {:?}", o.witness);
        }
    }

    #[test]
    fn rank_two_relation() {
        let ctx = SliceContext::new(2).unwrap();
        let rel = slice_relation(&ctx).unwrap();
        assert!(rel.outcome.passed, "{:?}", rel.outcome.witness);
        assert_eq!(rel.alphas, vec![Coefficient::from_int(-1)]);
        let ring = relation::relation_ring(2, false);
        assert_eq!(rel.relation, -relation::starlet(&ring, 2));
    }
}

//! The Coulomb-branch side in étale coordinates `u1, u2, v1, v2` (with
//! `w_i = u_i·v_i`): generators, redundancy identities, the relation, the
//! Poisson bracket table, the 2×2 matrix form and the flavored relation.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{coefficient_text, AlgebraError, Coefficient, Localized, Polynomial, QuadraticExtension, Ring, Substitution};
use crate::check::{all, zero_residual, Outcome};
use crate::relation::{self, z_names, GENERATORS};
use crate::slice::{flavored_slice_relation, MatrixError, PolyMatrix, SliceContext, SliceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoulombError {
    #[error("r = {r} is below the minimum {min} for this construction")]
    RankTooSmall { r: u32, min: u32 },
    #[error("bracket operands live on different charts")]
    ChartMismatch,
    #[error("sigma pair index k = {k} outside 0..={r}")]
    BadSigmaIndex { r: u32, k: u32 },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Slice(#[from] SliceError),
}

/// Ring `Q[u1^±, u2^±, v1, v2 (, z1..zr)]` with pivot `s = u1v1 − u2v2`.
#[derive(Clone, Debug)]
pub struct EtaleChart {
    r: u32,
    flavored: bool,
    ring: Arc<Ring>,
    pivot: Polynomial,
}

impl EtaleChart {
    pub fn new(r: u32, flavored: bool) -> Result<Self, CoulombError> {
        let min = if flavored { 2 } else { 1 };
        if r < min {
            return Err(CoulombError::RankTooSmall { r, min });
        }
        let mut names: Vec<String> = ["u1", "u2", "v1", "v2"].iter().map(|s| s.to_string()).collect();
        if flavored {
            names.extend(z_names(r));
        }
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let ring = Ring::with_names(&refs, &["u1", "u2"], None)?;
        let pivot = Polynomial::parse(&ring, "u1*v1 - u2*v2")?;
        Ok(Self { r, flavored, ring, pivot })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn is_flavored(&self) -> bool {
        self.flavored
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn pivot(&self) -> &Polynomial {
        &self.pivot
    }

    pub fn var(&self, name: &str) -> Polynomial {
        Polynomial::var(&self.ring, name).expect("chart variable")
    }

    pub fn w1(&self) -> Polynomial {
        &self.var("u1") * &self.var("v1")
    }

    pub fn w2(&self) -> Polynomial {
        &self.var("u2") * &self.var("v2")
    }

    /// `(−1)^r`.
    pub fn epsilon(&self) -> i64 {
        if self.r.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    fn localized(&self, p: Polynomial) -> Localized {
        Localized::from_poly(p, &self.pivot)
    }

    fn u_inverse(&self, name: &str) -> Polynomial {
        Polynomial::var_pow(&self.ring, name, -1).expect("laurent chart variable")
    }
}

/// A single sign flip in the generator conventions, used as a negative
/// control.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignFlip {
    X2,
    Y2,
    X1Inner,
    Y1Inner,
    W,
}

impl SignFlip {
    pub const ALL: [SignFlip; 5] = [SignFlip::X2, SignFlip::Y2, SignFlip::X1Inner, SignFlip::Y1Inner, SignFlip::W];

    pub fn name(self) -> &'static str {
        match self {
            SignFlip::X2 => "x2",
            SignFlip::Y2 => "y2",
            SignFlip::X1Inner => "x1_inner",
            SignFlip::Y1Inner => "y1_inner",
            SignFlip::W => "w",
        }
    }
}

fn sign(flip: Option<SignFlip>, which: SignFlip) -> i64 {
    if flip == Some(which) {
        -1
    } else {
        1
    }
}

/// The six functions `E1[1], E1[w], E2[1], F1[1], F1[w], F2[1]` of the
/// unflavored chart, written with `w_i` and `u_i^{-1}` as displayed.
#[derive(Clone, Debug)]
pub struct EtaleFunctions {
    pub e1: Polynomial,
    pub e1w: Polynomial,
    pub e2: Polynomial,
    pub f1: Polynomial,
    pub f1w: Polynomial,
    pub f2: Polynomial,
}

pub fn etale_functions(chart: &EtaleChart) -> EtaleFunctions {
    let eps = chart.epsilon();
    let (u1, u2) = (chart.var("u1"), chart.var("u2"));
    let (w1, w2) = (chart.w1(), chart.w2());
    let (iu1, iu2) = (chart.u_inverse("u1"), chart.u_inverse("u2"));
    let lead = chart.pivot.pow(chart.r - 1);
    let combine = |a: Polynomial, b: Polynomial| &lead * &(&a - &b.scale_int(eps));
    EtaleFunctions {
        e1: combine(u1.clone(), u2.clone()),
        e1w: combine(&w1 * &u1, &w2 * &u2),
        e2: &u1 * &u2,
        f1: combine(&w1 * &iu1, &w2 * &iu2),
        f1w: combine(&(&w1 * &w1) * &iu1, &(&w2 * &w2) * &iu2),
        f2: &(&w1 * &w2) * &(&iu1 * &iu2),
    }
}

#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub x1: Localized,
    pub x2: Localized,
    pub y1: Localized,
    pub y2: Localized,
    pub w: Localized,
}

impl GeneratorSet {
    pub fn get(&self, name: &str) -> Option<&Localized> {
        match name {
            "x1" => Some(&self.x1),
            "x2" => Some(&self.x2),
            "y1" => Some(&self.y1),
            "y2" => Some(&self.y2),
            "w" => Some(&self.w),
            _ => None,
        }
    }

    /// `(name, value)` in the order `x1, x2, y1, y2, w`.
    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &Localized)> {
        GENERATORS.iter().map(move |&n| (n, self.get(n).expect("generator name")))
    }

    /// Substitution sending each generator name to its value.
    pub fn substitution(&self, chart: &EtaleChart) -> Result<Substitution, CoulombError> {
        let mut sub = Substitution::new(&chart.ring, chart.pivot.clone())?;
        for (name, value) in self.iter() {
            sub = sub.assign(name, value.clone())?;
        }
        Ok(sub)
    }
}

pub fn build_generators(chart: &EtaleChart) -> GeneratorSet {
    build_generators_with(chart, None)
}

/// Generators with at most one convention sign flipped. Unflavored values
/// have pivot power 0; the flavored `x1, y1` carry pivot power 1 as built.
pub fn build_generators_with(chart: &EtaleChart, flip: Option<SignFlip>) -> GeneratorSet {
    let eps = chart.epsilon();
    let (u1, u2, v1, v2) = (chart.var("u1"), chart.var("u2"), chart.var("v1"), chart.var("v2"));
    let (w1, w2) = (chart.w1(), chart.w2());
    let (iu1, iu2) = (chart.u_inverse("u1"), chart.u_inverse("u2"));
    let x2 = (&u1 * &u2).scale_int(eps * sign(flip, SignFlip::X2));
    let y2 = (&(&w1 * &w2) * &(&iu1 * &iu2)).scale_int(eps * sign(flip, SignFlip::Y2));
    let w = &w1 + &w2.scale_int(sign(flip, SignFlip::W));
    let x1_sign = sign(flip, SignFlip::X1Inner);
    let y1_sign = sign(flip, SignFlip::Y1Inner);
    let (x1, y1) = if chart.flavored {
        // u1·s^{-1}·Π(s − z) + u2·(−s)^{-1}·Π(−s − z), and likewise for y1.
        let s = &chart.pivot;
        let product = |base: &Polynomial, z_sign: i64| {
            z_names(chart.r)
                .iter()
                .fold(Polynomial::one(&chart.ring), |acc, z| &acc * &(base + &chart.var(z).scale_int(z_sign)))
        };
        let neg_s = -s;
        let x1_num = &(&u1 * &product(s, -1)) - &(&u2 * &product(&neg_s, -1)).scale_int(x1_sign);
        let y1_num = &(&(&iu1 * &w1) * &product(s, 1)) - &(&(&iu2 * &w2) * &product(&neg_s, 1)).scale_int(y1_sign);
        (
            Localized::new(x1_num, s.clone(), 1).expect("chart pivot"),
            Localized::new(y1_num, s.clone(), 1).expect("chart pivot"),
        )
    } else {
        let lead = chart.pivot.pow(chart.r - 1);
        let x1 = &lead * &(&u1 - &u2.scale_int(eps * x1_sign));
        let y1 = &lead * &(&(&w1 * &iu1) - &(&w2 * &iu2).scale_int(eps * y1_sign));
        debug_assert_eq!(y1, &lead * &(&v1 - &v2.scale_int(eps * y1_sign)));
        (chart.localized(x1), chart.localized(y1))
    };
    GeneratorSet {
        x1,
        x2: chart.localized(x2),
        y1,
        y2: chart.localized(y2),
        w: chart.localized(w),
    }
}

/// Every generator reduces to pivot power 0.
pub fn check_regularity(chart: &EtaleChart, gens: &GeneratorSet) -> Outcome {
    all(gens.iter().map(|(name, g)| {
        let reduced = g.reduce();
        Outcome::expect(reduced.power() == 0, || format!("{name} keeps a pivot denominator: {reduced}"))
    }))
    .with("flavored", chart.flavored)
}

/// The three redundancy identities with sign `sign·(−1)^r` in front of the
/// cross terms. The identities hold for `sign = +1`; the printed variant
/// corresponds to `sign = −1`.
pub fn check_redundancy_with_sign(chart: &EtaleChart, sign: i64) -> Outcome {
    let f = etale_functions(chart);
    let es = chart.epsilon() * sign;
    let w_sum = &chart.w1() + &chart.w2();
    let products = &chart.w1() * &chart.w2() - &f.e2 * &f.f2;
    let e1w = &f.e1w - &(&(&w_sum * &f.e1) + &(&f.e2 * &f.f1).scale_int(es));
    let f1w = &f.f1w - &(&(&w_sum * &f.f1) + &(&f.f2 * &f.e1).scale_int(es));
    all([
        zero_residual("w1*w2 = E2[1]*F2[1]", &products),
        zero_residual("E1[w] redundancy", &e1w),
        zero_residual("F1[w] redundancy", &f1w),
    ])
}

pub fn check_redundancy(chart: &EtaleChart) -> Outcome {
    check_redundancy_with_sign(chart, 1)
}

/// Image of `(w² − 4x2y2)^exponent − (x1²y2 + x2y1² + wx1y1)` under the
/// generators.
pub fn starlet_residual(chart: &EtaleChart, gens: &GeneratorSet, exponent: u32) -> Result<Localized, CoulombError> {
    let ring = relation::relation_ring(chart.r, chart.flavored);
    Ok(relation::starlet(&ring, exponent).substitute(&gens.substitution(chart)?)?)
}

fn residual_outcome(name: &str, residual: &Localized) -> Outcome {
    Outcome::expect(residual.is_zero(), || format!("{name}: residual {}", residual.reduce()))
}

pub fn check_relation_starlet(chart: &EtaleChart) -> Result<Outcome, CoulombError> {
    let gens = build_generators(chart);
    let residual = starlet_residual(chart, &gens, chart.r)?;
    Ok(residual_outcome("relation", &residual))
}

/// `Σ_i ∂f/∂u_i·∂g/∂v_i − ∂f/∂v_i·∂g/∂u_i`.
pub fn poisson_bracket(f: &Localized, g: &Localized) -> Result<Localized, CoulombError> {
    if !Ring::same(f.ring(), g.ring()) || f.pivot() != g.pivot() {
        return Err(CoulombError::ChartMismatch);
    }
    let mut out = Localized::from_poly(Polynomial::zero(f.ring()), f.pivot());
    for (u, v) in [("u1", "v1"), ("u2", "v2")] {
        let plus = f.derivative(u)?.try_mul(&g.derivative(v)?)?;
        let minus = f.derivative(v)?.try_mul(&g.derivative(u)?)?;
        out = out.try_add(&plus)?.try_sub(&minus)?;
    }
    Ok(out.reduce())
}

/// Expected bracket value: `sign · generator`, or zero.
#[derive(Clone, Copy, Debug)]
enum Expected {
    Gen(i64, &'static str),
    Zero,
}

const BRACKET_TABLE: [(&str, &str, Expected); 9] = [
    ("x2", "y2", Expected::Gen(1, "w")),
    ("w", "x2", Expected::Gen(-2, "x2")),
    ("w", "y2", Expected::Gen(2, "y2")),
    ("y2", "x1", Expected::Gen(1, "y1")),
    ("y2", "y1", Expected::Zero),
    ("x2", "x1", Expected::Zero),
    ("x2", "y1", Expected::Gen(-1, "x1")),
    ("w", "x1", Expected::Gen(-1, "x1")),
    ("w", "y1", Expected::Gen(1, "y1")),
];

fn expected_value(gens: &GeneratorSet, e: Expected, zero: &Localized) -> Localized {
    match e {
        Expected::Gen(c, name) => {
            let g = gens.get(name).expect("generator name");
            Localized::new(g.numerator().scale_int(c), g.pivot().clone(), g.power()).expect("same pivot")
        }
        Expected::Zero => zero.clone(),
    }
}

fn check_bracket_table(gens: &GeneratorSet, table: &[(&str, &str, Expected)]) -> Result<Outcome, CoulombError> {
    let zero = Localized::from_poly(Polynomial::zero(gens.w.ring()), gens.w.pivot());
    let mut out = Outcome::pass();
    for &(a, b, e) in table {
        let got = poisson_bracket(gens.get(a).unwrap(), gens.get(b).unwrap())?;
        let want = expected_value(gens, e, &zero);
        if !got.equals(&want)? {
            out = out.and(Outcome::fail(format!("{{{a}, {b}}} = {got}, expected {}", want.reduce())));
        }
    }
    Ok(out)
}

/// The bracket table among `x1, x2, y1, y2, w`.
pub fn check_poifo(chart: &EtaleChart) -> Result<Outcome, CoulombError> {
    check_bracket_table(&build_generators(chart), &BRACKET_TABLE)
}

/// `{x1, y1}` reduced, in chart coordinates.
pub fn bracket_x1y1(chart: &EtaleChart) -> Result<Polynomial, CoulombError> {
    let gens = build_generators(chart);
    let b = poisson_bracket(&gens.x1, &gens.y1)?;
    Ok(b.to_polynomial().expect("bracket of regular functions is regular"))
}

/// Jacobi identity on all ten triples of distinct generators; records
/// `{x1, y1}` under the key `bracket_x1y1`.
pub fn check_jacobi(chart: &EtaleChart) -> Result<Outcome, CoulombError> {
    let gens = build_generators(chart);
    let names = GENERATORS;
    let mut out = Outcome::pass();
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            for k in j + 1..names.len() {
                let (a, b, c) = (gens.get(names[i]).unwrap(), gens.get(names[j]).unwrap(), gens.get(names[k]).unwrap());
                let sum = poisson_bracket(a, &poisson_bracket(b, c)?)?
                    .try_add(&poisson_bracket(b, &poisson_bracket(c, a)?)?)?
                    .try_add(&poisson_bracket(c, &poisson_bracket(a, b)?)?)?;
                if !sum.is_zero() {
                    out = out.and(Outcome::fail(format!(
                        "Jacobi ({}, {}, {}): {}",
                        names[i],
                        names[j],
                        names[k],
                        sum.reduce()
                    )));
                }
            }
        }
    }
    Ok(out.with("bracket_x1y1", bracket_x1y1(chart)?.to_string()))
}

/// Weight identities of `h = −w` on the generators, homogeneity of the
/// relation in degree `4r`, and homogeneity of each generator expression in
/// `(u, v)` with the matching degree.
pub fn check_sl2_grading(chart: &EtaleChart) -> Result<Outcome, CoulombError> {
    let gens = build_generators(chart);
    let minus_w = Localized::from_poly(-gens.w.numerator(), &chart.pivot);
    let mut out = Outcome::pass();
    for (name, weight) in [("x2", 2), ("y2", -2), ("x1", 1), ("y1", -1)] {
        let g = gens.get(name).unwrap();
        let got = poisson_bracket(&minus_w, g)?;
        let want = Localized::new(g.numerator().scale_int(weight), g.pivot().clone(), g.power())?;
        out = out.require(got.equals(&want)?, || format!("{{-w, {name}}} = {got}, expected weight {weight}"));
    }
    out = out.and(check_bracket_table(&gens, &[("x2", "y2", Expected::Gen(1, "w"))])?);

    let r = chart.r;
    let ring = relation::relation_ring(r, false);
    let rel = relation::starlet(&ring, r);
    let weights = relation::grading(&ring, r);
    let degree = rel.homogeneous_degree(&weights);
    out = out.require(degree == Some(4 * r as i64), || {
        format!("relation degrees {:?}, expected {}", rel.weighted_degrees(&weights), 4 * r)
    });

    let chart_weights: Vec<i64> = chart.ring.vars().iter().map(|_| 1).collect();
    for (name, g) in gens.iter() {
        let want = weights[ring.index_of(name)?];
        let p = g.to_polynomial().expect("unflavored generators are polynomial");
        let got = p.homogeneous_degree(&chart_weights);
        out = out.require(got == Some(want), || format!("{name} has (u, v)-degrees {:?}, expected {want}", p.weighted_degrees(&chart_weights)));
    }
    Ok(out.with("degree", 4 * r))
}

/// Rescaling `x1 ↦ k·x1, y1 ↦ k·y1` applied to the matrix-form polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HananyRescaling {
    /// `k = 4^r / √2`.
    Stated,
    /// `k = √2 / 2^r`.
    Derived,
}

impl HananyRescaling {
    pub fn name(self) -> &'static str {
        match self {
            HananyRescaling::Stated => "stated",
            HananyRescaling::Derived => "derived",
        }
    }

    pub fn factor(self, r: u32) -> Coefficient {
        let two_r = BigRational::from_integer(num_bigint::BigInt::from(2).pow(r));
        let radical = match self {
            HananyRescaling::Stated => &two_r * &two_r / BigRational::from_integer(2.into()),
            HananyRescaling::Derived => two_r.recip(),
        };
        Coefficient::new(BigRational::zero(), radical)
    }
}

fn ring_var(ring: &Arc<Ring>, name: &str) -> Polynomial {
    Polynomial::var(ring, name).expect("ring variable")
}

fn omega2(ring: &Arc<Ring>) -> PolyMatrix {
    PolyMatrix::from_fn(ring, 2, 2, |i, j| match (i, j) {
        (0, 1) => Polynomial::from_int(ring, -1),
        (1, 0) => Polynomial::one(ring),
        _ => Polynomial::zero(ring),
    })
}

/// `N = [[−x2, w/2], [w/2, −y2]]` and `A = (x1, y1)ᵀ`.
pub fn hanany_data(ring: &Arc<Ring>) -> (PolyMatrix, PolyMatrix) {
    let half_w = ring_var(ring, "w").scale(&Coefficient::from_ratio(1, 2));
    let n = PolyMatrix::from_fn(ring, 2, 2, |i, j| match (i, j) {
        (0, 0) => -ring_var(ring, "x2"),
        (1, 1) => -ring_var(ring, "y2"),
        _ => half_w.clone(),
    });
    let a = PolyMatrix::from_fn(ring, 2, 1, |i, _| ring_var(ring, if i == 0 { "x1" } else { "y1" }));
    (n, a)
}

/// `tr((NΩ)^{2r}) − AᵀΩNΩA`.
pub fn hanany_polynomial(n: &PolyMatrix, a: &PolyMatrix, r: u32) -> Result<Polynomial, CoulombError> {
    let om = omega2(n.ring());
    let no = n.try_mul(&om)?;
    let mut power = PolyMatrix::identity(n.ring(), 2);
    for _ in 0..2 * r {
        power = power.try_mul(&no)?;
    }
    let quad = a.transpose().try_mul(&om)?.try_mul(&no)?.try_mul(a)?;
    Ok(&power.trace()? - quad.get(0, 0))
}

/// The matrix-form polynomial, rescaled by `k`, must be a nonzero constant
/// multiple of the relation. Records the constant, the factor used and the
/// `k²` that proportionality actually requires.
pub fn check_hanany_form(r: u32, rescaling: HananyRescaling) -> Result<Outcome, CoulombError> {
    if r < 1 {
        return Err(CoulombError::RankTooSmall { r, min: 1 });
    }
    let ext = QuadraticExtension::from_int(2)?;
    let ring = Ring::with_names(&GENERATORS, &[], Some(ext))?;
    let (n, a) = hanany_data(&ring);
    let p = hanany_polynomial(&n, &a, r)?;

    let alpha = p.coefficient_of("w", 2 * r as i32)?.constant_value().unwrap_or_else(Coefficient::zero);
    let beta = p
        .coefficient_of("x1", 2)?
        .coefficient_of("y2", 1)?
        .constant_value()
        .unwrap_or_else(Coefficient::zero);
    let required = alpha.neg().div(&beta, ring.ext());

    let k = rescaling.factor(r);
    let kx = |name: &str| ring_var(&ring, name).scale(&k);
    let scaled = p.substitute_poly(&ring, &[("x1", kx("x1")), ("y1", kx("y1"))])?;
    let lambda = scaled.coefficient_of("w", 2 * r as i32)?.constant_value().unwrap_or_else(Coefficient::zero);
    let target = relation::starlet(&ring, r);
    let residual = &scaled - &target.scale(&lambda);

    let mut out = Outcome::expect(!lambda.is_zero() && residual.is_zero(), || {
        format!("not proportional to the relation with k = {}: residual {residual}", coefficient_text(&k, &ring))
    })
    .with("rescaling", rescaling.name())
    .with("k", coefficient_text(&k, &ring));
    if let Some(req) = required {
        out.record("required_k_squared", coefficient_text(&req, &ring));
    }
    if out.passed {
        out.record("constant", coefficient_text(&lambda, &ring));
    }
    Ok(out)
}

/// Determinant-one matrices acting by `N ↦ SNSᵀ`, `A ↦ SA`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sl2Element {
    Identity,
    Rotation,
    /// `[[a, b], [c, (1 + bc)/a]]` with symbolic `a, b, c`.
    Generic,
}

impl Sl2Element {
    pub const ALL: [Sl2Element; 3] = [Sl2Element::Identity, Sl2Element::Rotation, Sl2Element::Generic];

    pub fn name(self) -> &'static str {
        match self {
            Sl2Element::Identity => "identity",
            Sl2Element::Rotation => "rotation",
            Sl2Element::Generic => "generic",
        }
    }
}

pub fn check_sl2_action_invariance(r: u32, element: Sl2Element) -> Result<Outcome, CoulombError> {
    let ring = Ring::with_names(&["x1", "x2", "y1", "y2", "w", "a", "b", "c"], &["a"], None)?;
    let (n, a) = hanany_data(&ring);
    let int = |k: i64| Polynomial::from_int(&ring, k);
    let s = match element {
        Sl2Element::Identity => PolyMatrix::identity(&ring, 2),
        Sl2Element::Rotation => PolyMatrix::from_fn(&ring, 2, 2, |i, j| match (i, j) {
            (0, 1) => int(-1),
            (1, 0) => int(1),
            _ => int(0),
        }),
        Sl2Element::Generic => {
            let (va, vb, vc) = (ring_var(&ring, "a"), ring_var(&ring, "b"), ring_var(&ring, "c"));
            let d = &(&int(1) + &(&vb * &vc)) * &Polynomial::var_pow(&ring, "a", -1)?;
            PolyMatrix::from_fn(&ring, 2, 2, |i, j| match (i, j) {
                (0, 0) => va.clone(),
                (0, 1) => vb.clone(),
                (1, 0) => vc.clone(),
                _ => d.clone(),
            })
        }
    };
    let det = s.determinant()?;
    let n2 = s.try_mul(&n)?.try_mul(&s.transpose())?;
    let a2 = s.try_mul(&a)?;
    let before = hanany_polynomial(&n, &a, r)?;
    let after = hanany_polynomial(&n2, &a2, r)?;
    Ok(Outcome::expect(det.is_one(), || format!("det S = {det}"))
        .require(n2 == n2.transpose(), || "S N Sᵀ is not symmetric".into())
        .and(zero_residual("invariance", &(&after - &before)))
        .with("element", element.name()))
}

/// Flavored relation: the residual vanishes on the flavored generators, the
/// relation polynomial coincides with the slice-side one, and `z = 0`
/// recovers the unflavored generators and relation.
pub fn check_relation_flavored(chart: &EtaleChart) -> Result<Outcome, CoulombError> {
    if !chart.flavored {
        return Err(CoulombError::RankTooSmall { r: chart.r, min: 2 });
    }
    let r = chart.r;
    let gens = build_generators(chart);
    let ring = relation::relation_ring(r, true);
    let rel = relation::flavored_relation(&ring, r);
    let residual = rel.substitute(&gens.substitution(chart)?)?;
    let mut out = residual_outcome("flavored relation", &residual);

    let slice = flavored_slice_relation(&SliceContext::new(r)?)?;
    out = out.and(slice.outcome.clone()).require(slice.relation == rel, || {
        format!("slice relation differs by {}", &slice.relation - &rel)
    });

    let plain = EtaleChart::new(r, false)?;
    let plain_gens = build_generators(&plain);
    let zeros: Vec<(String, Polynomial)> = z_names(r).into_iter().map(|z| (z, Polynomial::zero(&plain.ring))).collect();
    let zeros: Vec<(&str, Polynomial)> = zeros.iter().map(|(n, p)| (n.as_str(), p.clone())).collect();
    for (name, g) in gens.iter() {
        let reduced = g.reduce();
        let num = reduced.numerator().substitute_poly(&plain.ring, &zeros)?;
        let pivot = reduced.pivot().substitute_poly(&plain.ring, &zeros)?;
        let at_zero = Localized::new(num, pivot, reduced.power())?;
        let want = plain_gens.get(name).unwrap();
        out = out.require(at_zero.equals(want)?, || format!("{name} at z = 0 is {at_zero}, expected {want}"));
    }
    let rel_zeros: Vec<(String, Polynomial)> = z_names(r).into_iter().map(|z| (z, Polynomial::zero(&ring))).collect();
    let rel_zeros: Vec<(&str, Polynomial)> = rel_zeros.iter().map(|(n, p)| (n.as_str(), p.clone())).collect();
    let rel_at_zero = rel.substitute_poly(&ring, &rel_zeros)?;
    out = out.and(zero_residual("relation at z = 0", &(&rel_at_zero + &relation::starlet(&ring, r))));
    Ok(out)
}

/// Every monomial of `Σ_{m+n=2k} (−1)^{mn} σ_m σ_n` has even exponents.
pub fn check_sigma_parity(r: u32, k: u32) -> Result<Outcome, CoulombError> {
    if k > r || r == 0 {
        return Err(CoulombError::BadSigmaIndex { r, k });
    }
    let ring = relation::relation_ring(r, true);
    let sum = relation::sigma_pair_sum(&relation::sigmas(&ring, r), k as usize);
    let odd = sum.terms().find(|(m, _)| m.exponents().iter().any(|e| e % 2 != 0));
    Ok(Outcome::expect(odd.is_none(), || {
        let (m, c) = odd.unwrap();
        format!("odd exponent in {}", Polynomial::term(&ring, m.clone(), c.clone()))
    })
    .with("sum", sum.to_string()))
}

/// A deliberate corruption whose check must fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "detail")]
pub enum NegativeControl {
    Flip(SignFlip),
    ExponentUp,
    ExponentDown,
    PrintedRedundancySign,
}

impl NegativeControl {
    pub fn all() -> Vec<NegativeControl> {
        let mut v: Vec<_> = SignFlip::ALL.iter().map(|&f| NegativeControl::Flip(f)).collect();
        v.extend([NegativeControl::ExponentUp, NegativeControl::ExponentDown, NegativeControl::PrintedRedundancySign]);
        v
    }

    pub fn name(self) -> String {
        match self {
            NegativeControl::Flip(f) => format!("flip_{}", f.name()),
            NegativeControl::ExponentUp => "exponent_up".into(),
            NegativeControl::ExponentDown => "exponent_down".into(),
            NegativeControl::PrintedRedundancySign => "printed_redundancy_sign".into(),
        }
    }
}

/// Runs the corrupted check; a sound control returns a failing outcome.
pub fn run_negative_control(chart: &EtaleChart, control: NegativeControl) -> Result<Outcome, CoulombError> {
    let r = chart.r;
    let out = match control {
        NegativeControl::Flip(f) => {
            let gens = build_generators_with(chart, Some(f));
            if chart.flavored {
                let ring = relation::relation_ring(r, true);
                let res = relation::flavored_relation(&ring, r).substitute(&gens.substitution(chart)?)?;
                residual_outcome("flavored relation", &res)
            } else {
                residual_outcome("relation", &starlet_residual(chart, &gens, r)?)
            }
        }
        NegativeControl::ExponentUp | NegativeControl::ExponentDown => {
            let plain = EtaleChart::new(r, false)?;
            let e = if control == NegativeControl::ExponentUp { r + 1 } else { r - 1 };
            residual_outcome("relation", &starlet_residual(&plain, &build_generators(&plain), e)?)
        }
        NegativeControl::PrintedRedundancySign => check_redundancy_with_sign(&EtaleChart::new(r, false)?, -1),
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(chart: &EtaleChart, s: &str) -> Polynomial {
        Polynomial::parse(chart.ring(), s).unwrap()
    }

    #[test]
    fn rank_two_generators() {
        let chart = EtaleChart::new(2, false).unwrap();
        let g = build_generators(&chart);
        assert_eq!(g.x1.to_polynomial().unwrap(), chart.pivot() * &p(&chart, "u1 - u2"));
        assert_eq!(g.y2.to_polynomial().unwrap(), p(&chart, "v1*v2"));
        assert_eq!(g.x2.to_polynomial().unwrap(), p(&chart, "u1*u2"));
    }

    #[test]
    fn odd_rank_signs() {
        let chart = EtaleChart::new(3, false).unwrap();
        let g = build_generators(&chart);
        assert_eq!(g.x2.to_polynomial().unwrap(), p(&chart, "-u1*u2"));
        assert_eq!(g.y1.to_polynomial().unwrap(), &chart.pivot().pow(2) * &p(&chart, "v1 + v2"));
    }

    #[test]
    fn canonical_pair() {
        let chart = EtaleChart::new(1, false).unwrap();
        let u1 = chart.localized(chart.var("u1"));
        let v1 = chart.localized(chart.var("v1"));
        assert!(poisson_bracket(&u1, &v1).unwrap().to_polynomial().unwrap().is_one());
        assert!(poisson_bracket(&u1, &chart.localized(chart.var("v2"))).unwrap().is_zero());
    }

    #[test]
    fn bracket_rejects_other_charts() {
        let a = EtaleChart::new(2, false).unwrap();
        let b = EtaleChart::new(2, true).unwrap();
        let f = a.localized(a.var("u1"));
        let g = b.localized(b.var("v1"));
        assert_eq!(poisson_bracket(&f, &g).unwrap_err(), CoulombError::ChartMismatch);
    }

    #[test]
    fn redundancy_sign() {
        let chart = EtaleChart::new(2, false).unwrap();
        assert!(check_redundancy(&chart).passed);
        assert!(!check_redundancy_with_sign(&chart, -1).passed);
    }

    #[test]
    fn trace_of_square() {
        let ring = Ring::with_names(&GENERATORS, &[], None).unwrap();
        let (n, _) = hanany_data(&ring);
        let no = n.try_mul(&omega2(&ring)).unwrap();
        let tr = no.try_mul(&no).unwrap().trace().unwrap();
        assert_eq!(tr, Polynomial::parse(&ring, "-2*x2*y2 + 1/2*w^2").unwrap());
    }

    #[test]
    fn sigma_first_pair() {
        let o = check_sigma_parity(3, 1).unwrap();
        assert!(o.passed);
        assert_eq!(o.derived["sum"], "-z1^2 - z2^2 - z3^2");
        assert_eq!(check_sigma_parity(3, 0).unwrap().derived["sum"], "1");
        assert!(check_sigma_parity(2, 3).is_err());
    }

    #[test]
    fn flavored_rank_check() {
        assert!(EtaleChart::new(1, true).is_err());
        assert!(EtaleChart::new(0, false).is_err());
    }
}

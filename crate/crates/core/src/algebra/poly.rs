//! Sparse multivariate Laurent polynomials.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors, so iteration is in
//! lexicographic order of the exponents (variable-table order). The lex-largest
//! term is the leading term used by [`Polynomial::exact_divide`].

use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;

use super::{AlgebraError, Coefficient, Ring, VarKind};

pub type Exponent = i32;

/// Exponent vector aligned with the ring's variable table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<Exponent>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Self(vec![0; nvars])
    }

    pub fn from_exponents(exps: Vec<Exponent>) -> Self {
        Self(exps)
    }

    pub fn exponents(&self) -> &[Exponent] {
        &self.0
    }

    pub fn exponent(&self, idx: usize) -> Exponent {
        self.0[idx]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other`, or `None` when a polynomial variable would get a
    /// negative exponent.
    pub fn div(&self, other: &Self, ring: &Ring) -> Option<Self> {
        let mut out = Vec::with_capacity(self.0.len());
        for (i, (a, b)) in self.0.iter().zip(&other.0).enumerate() {
            let e = a - b;
            if e < 0 && ring.vars().get(i).kind == VarKind::Polynomial {
                return None;
            }
            out.push(e);
        }
        Some(Self(out))
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().map(|e| -e).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        Self(self.0.iter().map(|x| x * e as Exponent).collect())
    }
}

#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: Arc<Ring>,
    terms: BTreeMap<Monomial, Coefficient>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        Ring::same(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Hash for Polynomial {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl Polynomial {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        Self { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, Coefficient::one())
    }

    pub fn constant(ring: &Arc<Ring>, c: Coefficient) -> Self {
        Self::term(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn from_int(ring: &Arc<Ring>, n: i64) -> Self {
        Self::constant(ring, Coefficient::from_int(n))
    }

    pub fn from_rational(ring: &Arc<Ring>, q: BigRational) -> Self {
        Self::constant(ring, Coefficient::from_rational(q))
    }

    pub fn term(ring: &Arc<Ring>, m: Monomial, c: Coefficient) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { ring: ring.clone(), terms }
    }

    pub fn var(ring: &Arc<Ring>, name: &str) -> Result<Self, AlgebraError> {
        let idx = ring.index_of(name)?;
        Ok(Self::var_idx(ring, idx))
    }

    pub fn var_idx(ring: &Arc<Ring>, idx: usize) -> Self {
        let mut m = vec![0; ring.nvars()];
        m[idx] = 1;
        Self::term(ring, Monomial(m), Coefficient::one())
    }

    /// `name^e`, with `e < 0` only for Laurent variables.
    pub fn var_pow(ring: &Arc<Ring>, name: &str, e: Exponent) -> Result<Self, AlgebraError> {
        let idx = ring.index_of(name)?;
        if e < 0 && ring.vars().get(idx).kind != VarKind::Laurent {
            return Err(AlgebraError::NegativeExponent(name.to_string()));
        }
        let mut m = vec![0; ring.nvars()];
        m[idx] = e;
        Ok(Self::term(ring, Monomial(m), Coefficient::one()))
    }

    /// Builds a polynomial from raw terms, dropping zeros and merging equal
    /// monomials. Exponent vectors must match the ring.
    pub fn from_terms(
        ring: &Arc<Ring>,
        terms: impl IntoIterator<Item = (Monomial, Coefficient)>,
    ) -> Result<Self, AlgebraError> {
        let mut out: BTreeMap<Monomial, Coefficient> = BTreeMap::new();
        for (m, c) in terms {
            if m.0.len() != ring.nvars() {
                return Err(AlgebraError::RingMismatch);
            }
            for (i, &e) in m.0.iter().enumerate() {
                if e < 0 && ring.vars().get(i).kind != VarKind::Laurent {
                    return Err(AlgebraError::NegativeExponent(ring.vars().get(i).name.clone()));
                }
            }
            if !c.is_rational() && ring.ext().is_none() {
                return Err(AlgebraError::RadicalWithoutExtension);
            }
            accumulate(&mut out, m, &c);
        }
        Ok(Self { ring: ring.clone(), terms: out })
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Coefficient)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Coefficient {
        self.terms.get(m).cloned().unwrap_or_else(Coefficient::zero)
    }

    /// The value if the polynomial is a constant (zero included).
    pub fn constant_value(&self) -> Option<Coefficient> {
        match self.terms.len() {
            0 => Some(Coefficient::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Coefficient)> {
        self.terms.iter().next_back()
    }

    pub fn trailing_term(&self) -> Option<(&Monomial, &Coefficient)> {
        self.terms.iter().next()
    }

    fn check_ring(&self, other: &Self) -> Result<(), AlgebraError> {
        if Ring::same(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(AlgebraError::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_ring(other)?;
        let (big, small) = if self.len() >= other.len() { (self, other) } else { (other, self) };
        let mut terms = big.terms.clone();
        for (m, c) in &small.terms {
            accumulate(&mut terms, m.clone(), c);
        }
        Ok(Self { ring: self.ring.clone(), terms })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_ring(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            accumulate(&mut terms, m.clone(), &c.neg());
        }
        Ok(Self { ring: self.ring.clone(), terms })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.ring));
        }
        if let Some(c) = self.constant_value() {
            return Ok(other.scale(&c));
        }
        if let Some(c) = other.constant_value() {
            return Ok(self.scale(&c));
        }
        let ext = self.ring.ext();
        let mut acc: HashMap<Monomial, Coefficient> =
            HashMap::with_capacity(self.len().saturating_mul(other.len()).min(1 << 16));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca.mul(cb, ext);
                match acc.get_mut(&m) {
                    Some(slot) => slot.add_assign(&c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(Self { ring: self.ring.clone(), terms })
    }

    /// In-place `self += factor·other`, the inner step of most loops here.
    pub fn add_scaled(&mut self, other: &Self, factor: &Coefficient) {
        self.check_ring(other).expect("ring mismatch");
        let ext = self.ring.ext();
        for (m, c) in &other.terms {
            accumulate(&mut self.terms, m.clone(), &c.mul(factor, ext));
        }
    }

    pub fn scale(&self, c: &Coefficient) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        let ext = self.ring.ext();
        let terms = self.terms.iter().map(|(m, x)| (m.clone(), x.mul(c, ext))).collect();
        Self { ring: self.ring.clone(), terms }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&Coefficient::from_int(n))
    }

    /// Multiplication by a monomial (a unit when it only involves Laurent
    /// variables).
    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let terms = self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect();
        Self { ring: self.ring.clone(), terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            return Self::one(&self.ring);
        }
        if self.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            return Self::term(&self.ring, m.pow(e), c.pow(e, self.ring.ext()));
        }
        let mut acc = self.clone();
        for _ in 1..e {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative by variable name.
    pub fn derivative(&self, var: &str) -> Result<Self, AlgebraError> {
        let idx = self.ring.index_of(var)?;
        Ok(self.derivative_idx(idx))
    }

    pub fn derivative_idx(&self, idx: usize) -> Self {
        let ext = self.ring.ext();
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[idx] -= 1;
            terms.insert(Monomial(exps), c.mul(&Coefficient::from_int(e as i64), ext));
        }
        Self { ring: self.ring.clone(), terms }
    }

    /// `(min, max)` exponent of a variable over all terms; `None` for zero.
    pub fn degree_range(&self, idx: usize) -> Option<(Exponent, Exponent)> {
        let mut it = self.terms.keys().map(|m| m.0[idx]);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))))
    }

    pub fn degree_in(&self, var: &str) -> Result<Option<Exponent>, AlgebraError> {
        let idx = self.ring.index_of(var)?;
        Ok(self.degree_range(idx).map(|(_, hi)| hi))
    }

    /// Coefficient of `var^k`, as a polynomial free of `var`.
    pub fn coefficient_of(&self, var: &str, k: Exponent) -> Result<Self, AlgebraError> {
        let idx = self.ring.index_of(var)?;
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[idx] == k)
            .map(|(m, c)| {
                let mut exps = m.0.clone();
                exps[idx] = 0;
                (Monomial(exps), c.clone())
            })
            .collect();
        Ok(Self { ring: self.ring.clone(), terms })
    }

    /// Set of weighted degrees `Σ weights[i]·e_i` over the terms.
    pub fn weighted_degrees(&self, weights: &[i64]) -> Vec<i64> {
        let mut out: Vec<i64> = self
            .terms
            .keys()
            .map(|m| m.0.iter().zip(weights).map(|(&e, &w)| e as i64 * w).sum())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The common weighted degree, if the polynomial is nonzero and
    /// weighted-homogeneous.
    pub fn homogeneous_degree(&self, weights: &[i64]) -> Option<i64> {
        match self.weighted_degrees(weights).as_slice() {
            [d] => Some(*d),
            _ => None,
        }
    }

    /// Exact quotient `h` with `self = divisor·h`, computed by lex-leading-term
    /// division. Fails with the current remainder as witness when no exact
    /// quotient exists.
    pub fn exact_divide(&self, divisor: &Self) -> Result<Self, AlgebraError> {
        self.check_ring(divisor)?;
        if divisor.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if let Some(c) = divisor.constant_value() {
            let inv = c.inverse(self.ring.ext()).ok_or(AlgebraError::DivisionByZero)?;
            return Ok(self.scale(&inv));
        }
        if self.is_zero() {
            return Ok(Self::zero(&self.ring));
        }
        let n = self.ring.nvars();
        // A quotient term must have exponents in [min(p) - min(q), max(p) - max(q)]
        // for every variable; this bounds the loop for Laurent variables too.
        let bounds: Vec<(Exponent, Exponent)> = (0..n)
            .map(|i| {
                let (plo, phi) = self.degree_range(i).unwrap();
                let (qlo, qhi) = divisor.degree_range(i).unwrap();
                (plo - qlo, phi - qhi)
            })
            .collect();
        let (lm, lc) = divisor.leading_term().unwrap();
        let lc_inv = lc.inverse(self.ring.ext()).ok_or(AlgebraError::DivisionByZero)?;
        let ext = self.ring.ext();
        let mut rem = self.clone();
        let mut quot = BTreeMap::new();
        while let Some((rm, rc)) = rem.leading_term() {
            let witness = || AlgebraError::NotDivisible { remainder: rem.to_string() };
            let qm = rm.div(lm, &self.ring).ok_or_else(witness)?;
            if qm.0.iter().zip(&bounds).any(|(e, (lo, hi))| e < lo || e > hi) {
                return Err(witness());
            }
            let qc = rc.mul(&lc_inv, ext);
            let step = divisor.mul_monomial(&qm);
            rem.add_scaled(&step, &qc.neg());
            quot.insert(qm, qc);
        }
        Ok(Self { ring: self.ring.clone(), terms: quot })
    }

    /// Re-expresses the polynomial over another ring by variable name.
    /// Variables that occur with a nonzero exponent must exist in `target`.
    pub fn embed(&self, target: &Arc<Ring>) -> Result<Self, AlgebraError> {
        let map: Vec<Option<usize>> =
            self.ring.vars().iter().map(|v| target.vars().index_of(&v.name)).collect();
        let mut terms = Vec::with_capacity(self.len());
        for (m, c) in &self.terms {
            let mut exps = vec![0; target.nvars()];
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => exps[j] = e,
                    None => {
                        return Err(AlgebraError::UnknownVariable(
                            self.ring.vars().get(i).name.clone(),
                        ))
                    }
                }
            }
            if !c.is_rational() && target.ext() != self.ring.ext() {
                return Err(AlgebraError::BadExtension("target ring has a different √d".into()));
            }
            terms.push((Monomial(exps), c.clone()));
        }
        Self::from_terms(target, terms)
    }

    /// Indices of variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.ring.nvars())
            .filter(|&i| self.terms.keys().any(|m| m.0[i] != 0))
            .collect()
    }
}

fn accumulate(terms: &mut BTreeMap<Monomial, Coefficient>, m: Monomial, c: &Coefficient) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match terms.entry(m) {
        Entry::Vacant(v) => {
            v.insert(c.clone());
        }
        Entry::Occupied(mut o) => {
            o.get_mut().add_assign(c);
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$try(rhs).expect("ring mismatch")
            }
        }
        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$try(&rhs).expect("ring mismatch")
            }
        }
        impl $trait<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$try(rhs).expect("ring mismatch")
            }
        }
        impl $trait<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                self.$try(&rhs).expect("ring mismatch")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<Ring> {
        Ring::with_names(&["u1", "v1", "x", "y"], &["u1"], None).unwrap()
    }

    fn v(r: &Arc<Ring>, n: &str) -> Polynomial {
        Polynomial::var(r, n).unwrap()
    }

    #[test]
    fn cancellation() {
        let r = ring();
        let (x, y) = (v(&r, "x"), v(&r, "y"));
        assert_eq!(&(&x + &y) + &(&x - &y), x.scale_int(2));
    }

    #[test]
    fn laurent_inverse_pair() {
        let r = ring();
        let inv = Polynomial::var_pow(&r, "u1", -1).unwrap();
        assert!((&inv * &v(&r, "u1")).is_one());
        assert!(Polynomial::var_pow(&r, "x", -1).is_err());
    }

    #[test]
    fn derivatives() {
        let r = ring();
        let (u, w) = (v(&r, "u1"), v(&r, "v1"));
        let p = &u.pow(2) * &w;
        assert_eq!(p.derivative("u1").unwrap(), (&u * &w).scale_int(2));
        let inv = Polynomial::var_pow(&r, "u1", -1).unwrap();
        assert_eq!(
            inv.derivative("u1").unwrap(),
            -Polynomial::var_pow(&r, "u1", -2).unwrap()
        );
        assert!((&u * &w).derivative("y").unwrap().is_zero());
        assert!(p.derivative("nope").is_err());
    }

    #[test]
    fn exact_division() {
        let r = ring();
        let (x, y) = (v(&r, "x"), v(&r, "y"));
        let p = &x.pow(2) - &y.pow(2);
        assert_eq!(p.exact_divide(&(&x - &y)).unwrap(), &x + &y);
        assert_eq!(p.exact_divide(&Polynomial::one(&r)).unwrap(), p);
        match (&x + &Polynomial::one(&r)).exact_divide(&y) {
            Err(AlgebraError::NotDivisible { remainder }) => assert!(!remainder.is_empty()),
            other => panic!("{other:?}"),
        }
        assert!(matches!(p.exact_divide(&Polynomial::zero(&r)), Err(AlgebraError::DivisionByZero)));
    }

    #[test]
    fn laurent_division_terminates() {
        let r = ring();
        let u = v(&r, "u1");
        let one = Polynomial::one(&r);
        // 1/(1+u) is not a Laurent polynomial
        assert!(one.exact_divide(&(&one + &u)).is_err());
        let p = &(&u.pow(3) - &one) * &Polynomial::var_pow(&r, "u1", -2).unwrap();
        let q = &u - &one;
        let h = p.exact_divide(&q).unwrap();
        assert_eq!(&h * &q, p);
    }

    #[test]
    fn mismatched_rings() {
        let a = ring();
        let b = Ring::with_names(&["x"], &[], None).unwrap();
        assert!(matches!(
            v(&a, "x").try_add(&v(&b, "x")),
            Err(AlgebraError::RingMismatch)
        ));
        assert_eq!(v(&b, "x").embed(&a).unwrap(), v(&a, "x"));
        assert!(v(&a, "y").embed(&b).is_err());
    }
}

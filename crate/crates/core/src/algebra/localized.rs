//! Fractions `numerator / pivot^power` over a fixed pivot polynomial.
//!
//! No gcd-based normalization happens: equality is decided by
//! cross-multiplication, and zero-testing only looks at the numerator.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::{AlgebraError, Polynomial, Ring, VarKind};

#[derive(Clone, Debug)]
pub struct Localized {
    numerator: Polynomial,
    pivot: Polynomial,
    power: u32,
}

impl Localized {
    pub fn new(numerator: Polynomial, pivot: Polynomial, power: u32) -> Result<Self, AlgebraError> {
        if !Ring::same(numerator.ring(), pivot.ring()) {
            return Err(AlgebraError::RingMismatch);
        }
        if pivot.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self { numerator, pivot, power })
    }

    /// A polynomial viewed as a fraction with denominator `pivot^0`.
    pub fn from_poly(p: Polynomial, pivot: &Polynomial) -> Self {
        Self::new(p, pivot.clone(), 0).expect("pivot in the same ring")
    }

    /// The trivial localization (pivot 1): plain polynomial arithmetic.
    pub fn plain(p: Polynomial) -> Self {
        let one = Polynomial::one(p.ring());
        Self { numerator: p, pivot: one, power: 0 }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn pivot(&self) -> &Polynomial {
        &self.pivot
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.numerator.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    fn check_pivot(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.pivot == other.pivot {
            Ok(())
        } else if !Ring::same(self.ring(), other.ring()) {
            Err(AlgebraError::RingMismatch)
        } else {
            Err(AlgebraError::PivotMismatch)
        }
    }

    /// Numerator rewritten over `pivot^power` for `power >= self.power`.
    fn lifted(&self, power: u32) -> Polynomial {
        debug_assert!(power >= self.power);
        &self.numerator * &self.pivot.pow(power - self.power)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_pivot(other)?;
        let k = self.power.max(other.power);
        let numerator = self.lifted(k).try_add(&other.lifted(k))?;
        Ok(Self { numerator, pivot: self.pivot.clone(), power: k })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_pivot(other)?;
        Ok(Self {
            numerator: self.numerator.try_mul(&other.numerator)?,
            pivot: self.pivot.clone(),
            power: self.power + other.power,
        })
    }

    pub fn pow(&self, e: u32) -> Self {
        Self { numerator: self.numerator.pow(e), pivot: self.pivot.clone(), power: self.power * e }
    }

    pub fn scale_poly(&self, p: &Polynomial) -> Self {
        Self { numerator: &self.numerator * p, pivot: self.pivot.clone(), power: self.power }
    }

    /// Quotient rule: `d(p/s^k) = (p'·s − k·p·s') / s^(k+1)`.
    pub fn derivative(&self, var: &str) -> Result<Self, AlgebraError> {
        let dp = self.numerator.derivative(var)?;
        if self.power == 0 {
            return Ok(Self { numerator: dp, pivot: self.pivot.clone(), power: 0 });
        }
        let ds = self.pivot.derivative(var)?;
        let numerator =
            &(&dp * &self.pivot) - &(&self.numerator * &ds).scale_int(self.power as i64);
        Ok(Self { numerator, pivot: self.pivot.clone(), power: self.power + 1 })
    }

    /// `p/s^j == q/s^k` iff `p·s^k == q·s^j`.
    pub fn equals(&self, other: &Self) -> Result<bool, AlgebraError> {
        self.check_pivot(other)?;
        if self.power == other.power {
            return Ok(self.numerator == other.numerator);
        }
        let k = self.power.max(other.power);
        Ok(self.lifted(k) == other.lifted(k))
    }

    /// Cancels pivot factors from the numerator while they divide exactly.
    pub fn reduce(&self) -> Self {
        let mut out = self.clone();
        if out.numerator.is_zero() {
            out.power = 0;
            return out;
        }
        while out.power > 0 {
            match out.numerator.exact_divide(&out.pivot) {
                Ok(q) => {
                    out.numerator = q;
                    out.power -= 1;
                }
                Err(_) => break,
            }
        }
        out
    }

    /// The value as a polynomial, if it is one.
    pub fn to_polynomial(&self) -> Option<Polynomial> {
        let r = self.reduce();
        (r.power == 0).then_some(r.numerator)
    }

    /// Inverse, available when the numerator is a unit times a power of the
    /// pivot: a single term whose variables are all Laurent, or the pivot
    /// power itself.
    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        let r = self.reduce();
        let ring = r.ring().clone();
        if r.numerator.len() == 1 {
            let (m, c) = r.numerator.terms().next().unwrap();
            let unit = m
                .exponents()
                .iter()
                .enumerate()
                .all(|(i, &e)| e == 0 || ring.vars().get(i).kind == VarKind::Laurent);
            if unit {
                let c_inv = c.inverse(ring.ext()).ok_or(AlgebraError::DivisionByZero)?;
                let inv = Polynomial::term(&ring, m.inverse(), c_inv);
                return Ok(Self {
                    numerator: &inv * &r.pivot.pow(r.power),
                    pivot: r.pivot,
                    power: 0,
                });
            }
        }
        if r.pivot.constant_value().is_some() {
            return Err(AlgebraError::NotInvertible);
        }
        // numerator = unit · pivot^j
        let mut j = 0;
        let mut rest = r.numerator.clone();
        while let Ok(q) = rest.exact_divide(&r.pivot) {
            rest = q;
            j += 1;
        }
        if j > 0 {
            let unit_inv = Self::plain(rest.clone()).inverse().map_err(|_| AlgebraError::NotInvertible)?;
            return Ok(Self {
                numerator: &unit_inv.numerator * &r.pivot.pow(r.power),
                pivot: r.pivot,
                power: j,
            });
        }
        Err(AlgebraError::NotInvertible)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&Localized> for &Localized {
            type Output = Localized;
            fn $method(self, rhs: &Localized) -> Localized {
                self.$try(rhs).expect("pivot mismatch")
            }
        }
        impl $trait<Localized> for Localized {
            type Output = Localized;
            fn $method(self, rhs: Localized) -> Localized {
                (&self).$try(&rhs).expect("pivot mismatch")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Localized {
    type Output = Localized;
    fn neg(self) -> Localized {
        Localized { numerator: -&self.numerator, pivot: self.pivot.clone(), power: self.power }
    }
}

impl Neg for Localized {
    type Output = Localized;
    fn neg(self) -> Localized {
        -&self
    }
}

impl fmt::Display for Localized {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.power {
            0 => write!(f, "{}", self.numerator),
            1 => write!(f, "({}) / ({})", self.numerator, self.pivot),
            k => write!(f, "({}) / ({})^{k}", self.numerator, self.pivot),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (Arc<Ring>, Polynomial) {
        let r = Ring::with_names(&["u1", "u2", "v1", "v2"], &["u1", "u2"], None).unwrap();
        let s = &(&Polynomial::var(&r, "u1").unwrap() * &Polynomial::var(&r, "v1").unwrap())
            - &(&Polynomial::var(&r, "u2").unwrap() * &Polynomial::var(&r, "v2").unwrap());
        (r, s)
    }

    #[test]
    fn add_without_powers() {
        let (r, s) = setup();
        let p = Localized::from_poly(Polynomial::var(&r, "u1").unwrap(), &s);
        let q = Localized::from_poly(Polynomial::var(&r, "v2").unwrap(), &s);
        let sum = &p + &q;
        assert_eq!(sum.power(), 0);
        assert_eq!(
            sum.numerator(),
            &(&Polynomial::var(&r, "u1").unwrap() + &Polynomial::var(&r, "v2").unwrap())
        );
    }

    #[test]
    fn cross_multiplication_equality() {
        let (r, s) = setup();
        let a = Localized::new(Polynomial::one(&r), s.clone(), 1).unwrap();
        let b = Localized::from_poly(s.clone(), &s);
        let prod = &a * &b;
        assert_eq!(prod.power(), 1);
        assert!(prod.equals(&Localized::from_poly(Polynomial::one(&r), &s)).unwrap());
        assert!(prod.to_polynomial().unwrap().is_one());
    }

    #[test]
    fn quotient_rule() {
        let (r, s) = setup();
        let u1 = Polynomial::var(&r, "u1").unwrap();
        let v1 = Polynomial::var(&r, "v1").unwrap();
        let x = Localized::new(u1.clone(), s.clone(), 1).unwrap();
        let d = x.derivative("u1").unwrap();
        assert_eq!(d.power(), 2);
        assert_eq!(d.numerator(), &(&s - &(&u1 * &v1)));
    }

    #[test]
    fn pivot_mismatch() {
        let (r, s) = setup();
        let a = Localized::from_poly(Polynomial::one(&r), &s);
        let b = Localized::plain(Polynomial::one(&r));
        assert!(matches!(a.try_add(&b), Err(AlgebraError::PivotMismatch)));
    }

    #[test]
    fn inverses() {
        let (r, s) = setup();
        let u1 = Localized::from_poly(Polynomial::var(&r, "u1").unwrap(), &s);
        let inv = u1.inverse().unwrap();
        assert!((&u1 * &inv).to_polynomial().unwrap().is_one());
        let sp = Localized::from_poly(s.pow(2), &s);
        let inv = sp.inverse().unwrap();
        assert_eq!(inv.power(), 2);
        assert!((&sp * &inv).to_polynomial().unwrap().is_one());
        let v1 = Localized::from_poly(Polynomial::var(&r, "v1").unwrap(), &s);
        assert!(matches!(v1.inverse(), Err(AlgebraError::NotInvertible)));
    }
}

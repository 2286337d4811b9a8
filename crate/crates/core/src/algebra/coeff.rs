//! Exact coefficients `a + b√d` in a quadratic extension of the rationals.
//!
//! The value `d` is not stored per coefficient: it belongs to the ring the
//! coefficient lives in, and every operation that needs it (multiplication,
//! inversion) takes the extension explicitly.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::AlgebraError;

/// The adjoined square root `√d`, with `d` a positive rational that is not a
/// rational square (so `Q(√d)` is a field).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticExtension {
    d: BigRational,
}

impl QuadraticExtension {
    pub fn new(d: BigRational) -> Result<Self, AlgebraError> {
        if !d.is_positive() {
            return Err(AlgebraError::BadExtension(format!("d = {d} is not positive")));
        }
        if is_rational_square(&d) {
            return Err(AlgebraError::BadExtension(format!("d = {d} is a rational square")));
        }
        Ok(Self { d })
    }

    pub fn from_int(d: i64) -> Result<Self, AlgebraError> {
        Self::new(BigRational::from_integer(BigInt::from(d)))
    }

    pub fn d(&self) -> &BigRational {
        &self.d
    }
}

fn is_rational_square(q: &BigRational) -> bool {
    let sq = |n: &BigInt| {
        let s = n.sqrt();
        &s * &s == *n
    };
    sq(q.numer()) && sq(q.denom())
}

/// `rational + radical·√d`. Both parts are kept in lowest terms by
/// `BigRational`; in rings without an extension the radical part is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coefficient {
    rational: BigRational,
    radical: BigRational,
}

impl Coefficient {
    pub fn new(rational: BigRational, radical: BigRational) -> Self {
        Self { rational, radical }
    }

    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(n))
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_rational(rational: BigRational) -> Self {
        Self { rational, radical: BigRational::zero() }
    }

    /// The pure radical `q·√d`.
    pub fn radical(q: BigRational) -> Self {
        Self { rational: BigRational::zero(), radical: q }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn radical_part(&self) -> &BigRational {
        &self.radical
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.radical.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.radical.is_zero() && self.rational.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.radical.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            rational: &self.rational + &other.rational,
            radical: if self.radical.is_zero() && other.radical.is_zero() {
                BigRational::zero()
            } else {
                &self.radical + &other.radical
            },
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.rational += &other.rational;
        if !other.radical.is_zero() {
            self.radical += &other.radical;
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { rational: -&self.rational, radical: -&self.radical }
    }

    /// `(a+b√d)(a'+b'√d) = (aa' + bb'd) + (ab' + a'b)√d`.
    ///
    /// Panics if a radical part is present but `ext` is `None`.
    pub fn mul(&self, other: &Self, ext: Option<&QuadraticExtension>) -> Self {
        if self.radical.is_zero() && other.radical.is_zero() {
            return Self::from_rational(&self.rational * &other.rational);
        }
        let d = ext.expect("radical coefficient in a ring without extension").d();
        let rational = &self.rational * &other.rational + &self.radical * &other.radical * d;
        let radical = &self.rational * &other.radical + &self.radical * &other.rational;
        Self { rational, radical }
    }

    /// `a² − b²d`.
    pub fn norm(&self, ext: Option<&QuadraticExtension>) -> BigRational {
        if self.radical.is_zero() {
            return &self.rational * &self.rational;
        }
        let d = ext.expect("radical coefficient in a ring without extension").d();
        &self.rational * &self.rational - &self.radical * &self.radical * d
    }

    /// `(a − b√d) / (a² − b²d)`; `None` for zero.
    pub fn inverse(&self, ext: Option<&QuadraticExtension>) -> Option<Self> {
        let n = self.norm(ext);
        if n.is_zero() {
            return None;
        }
        Some(Self { rational: &self.rational / &n, radical: -&self.radical / &n })
    }

    pub fn div(&self, other: &Self, ext: Option<&QuadraticExtension>) -> Option<Self> {
        other.inverse(ext).map(|inv| self.mul(&inv, ext))
    }

    pub fn pow(&self, e: u32, ext: Option<&QuadraticExtension>) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, ext);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, ext);
            }
        }
        acc
    }

    /// True when the printed form starts with a minus sign and can be
    /// rendered as `- |c|` inside a sum.
    pub(crate) fn is_negative_rational(&self) -> bool {
        self.radical.is_zero() && self.rational.is_negative()
    }
}

fn fmt_rational(q: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.denom().is_one() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

/// Coefficient text without knowledge of `d`; the ring-aware printer in
/// [`super::text`] is the canonical form. This one prints `√d` as `√`.
impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radical.is_zero() {
            return fmt_rational(&self.rational, f);
        }
        if self.rational.is_zero() {
            write!(f, "(")?;
            fmt_rational(&self.radical, f)?;
            return write!(f, ")√");
        }
        write!(f, "(")?;
        fmt_rational(&self.rational, f)?;
        write!(f, " + (")?;
        fmt_rational(&self.radical, f)?;
        write!(f, ")√)")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn square_extension_rejected() {
        assert!(QuadraticExtension::new(q(4, 9)).is_err());
        assert!(QuadraticExtension::new(q(-2, 1)).is_err());
        assert!(QuadraticExtension::from_int(12).is_ok());
    }

    #[test]
    fn sqrt_squares_to_d() {
        let ext = QuadraticExtension::from_int(12).unwrap();
        let s = Coefficient::radical(q(1, 1));
        assert_eq!(s.mul(&s, Some(&ext)), Coefficient::from_int(12));
        // c = √d/d satisfies c²·d = 1
        let c = Coefficient::radical(q(1, 12));
        let c2 = c.mul(&c, Some(&ext));
        assert_eq!(c2.mul(&Coefficient::from_int(12), Some(&ext)), Coefficient::one());
    }

    #[test]
    fn inverse_in_extension() {
        let ext = QuadraticExtension::from_int(2).unwrap();
        let a = Coefficient::new(q(3, 1), q(-5, 7));
        let inv = a.inverse(Some(&ext)).unwrap();
        assert!(a.mul(&inv, Some(&ext)).is_one());
        assert!(Coefficient::zero().inverse(Some(&ext)).is_none());
    }
}

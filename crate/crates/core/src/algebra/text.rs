//! Canonical text form of polynomials.
//!
//! Terms are printed leading term first (descending lex order). A term is
//! `coeff*var^exp*...`; exponent 1 is omitted, unit rational coefficients are
//! omitted in front of a nonconstant monomial, and negative rational
//! coefficients are folded into the separator (`a - 3*x`). Radical
//! coefficients are parenthesised: `(1/12)√12*x1` or `(1 + (2)√2)*w`.
//! `parse(print(p)) == p` and `print(parse(s)) == s` for canonical `s`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{AlgebraError, Coefficient, Monomial, Polynomial, Ring};

fn write_rational(q: &BigRational, out: &mut String) {
    if q.denom().is_one() {
        out.push_str(&q.numer().to_string());
    } else {
        out.push_str(&format!("{}/{}", q.numer(), q.denom()));
    }
}

fn write_coefficient(c: &Coefficient, d: Option<&BigRational>, out: &mut String) {
    if c.is_rational() {
        write_rational(c.rational_part(), out);
        return;
    }
    let d = d.expect("radical coefficient in a ring without extension");
    let mut root = String::from("√");
    write_rational(d, &mut root);
    if c.rational_part().is_zero() {
        out.push('(');
        write_rational(c.radical_part(), out);
        out.push(')');
        out.push_str(&root);
    } else {
        out.push('(');
        write_rational(c.rational_part(), out);
        out.push_str(" + (");
        write_rational(c.radical_part(), out);
        out.push(')');
        out.push_str(&root);
        out.push(')');
    }
}

fn write_monomial(ring: &Ring, m: &Monomial, out: &mut String) {
    let mut first = true;
    for (i, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            out.push('*');
        }
        first = false;
        out.push_str(&ring.vars().get(i).name);
        if e != 1 {
            out.push_str(&format!("^{e}"));
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let ring = self.ring();
        let d = ring.ext().map(|e| e.d());
        let mut out = String::new();
        for (k, (m, c)) in self.terms().rev().enumerate() {
            let negative = c.is_negative_rational();
            let c = if negative { c.neg() } else { c.clone() };
            match (k, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if m.is_one() {
                write_coefficient(&c, d, &mut out);
            } else {
                if !c.is_one() {
                    write_coefficient(&c, d, &mut out);
                    out.push('*');
                }
                write_monomial(ring, m, &mut out);
            }
        }
        f.write_str(&out)
    }
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.s[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.s[self.pos..].starts_with(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<(), AlgebraError> {
        if self.eat(lit) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{lit}`")))
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c == ' ') {
            self.pos += 1;
        }
    }

    fn error(&self, msg: &str) -> AlgebraError {
        AlgebraError::Parse { position: self.pos, message: msg.to_string() }
    }

    fn digits(&mut self) -> Result<BigInt, AlgebraError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        Ok(self.s[start..self.pos].parse().expect("ascii digits"))
    }

    fn rational(&mut self) -> Result<BigRational, AlgebraError> {
        let neg = self.eat("-");
        let p = self.digits()?;
        let q = if self.eat("/") { self.digits()? } else { BigInt::one() };
        if q.is_zero() {
            return Err(self.error("zero denominator"));
        }
        let r = BigRational::new(p, q);
        Ok(if neg { -r } else { r })
    }

    fn ident(&mut self) -> Option<&'a str> {
        let start = self.pos;
        if !self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
            return None;
        }
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        Some(&self.s[start..self.pos])
    }
}

fn parse_root(cur: &mut Cursor<'_>, ring: &Ring) -> Result<(), AlgebraError> {
    cur.expect("√")?;
    let d = cur.rational()?;
    match ring.ext() {
        Some(e) if e.d() == &d => Ok(()),
        _ => Err(cur.error(&format!("√{d} does not match the ring"))),
    }
}

/// `(q)√d` or `(a + (b)√d)`; the opening parenthesis is already consumed.
fn parse_paren_coefficient(cur: &mut Cursor<'_>, ring: &Ring) -> Result<Coefficient, AlgebraError> {
    let a = cur.rational()?;
    if cur.eat(")") {
        parse_root(cur, ring)?;
        return Ok(Coefficient::radical(a));
    }
    cur.expect(" + (")?;
    let b = cur.rational()?;
    cur.expect(")")?;
    parse_root(cur, ring)?;
    cur.expect(")")?;
    Ok(Coefficient::new(a, b))
}

fn parse_term(cur: &mut Cursor<'_>, ring: &Arc<Ring>) -> Result<(Monomial, Coefficient), AlgebraError> {
    let mut coeff = Coefficient::one();
    let mut exps = vec![0; ring.nvars()];
    let mut need_factor = true;
    if cur.eat("(") {
        coeff = parse_paren_coefficient(cur, ring)?;
        need_factor = cur.eat("*");
    } else if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
        coeff = Coefficient::from_rational(cur.rational()?);
        need_factor = cur.eat("*");
    }
    if need_factor {
        loop {
            let name = cur.ident().ok_or_else(|| cur.error("expected variable"))?;
            let idx = ring.index_of(name)?;
            let e = if cur.eat("^") {
                let neg = cur.eat("-");
                let n = cur.digits()?;
                let n: i32 = n.try_into().map_err(|_| cur.error("exponent too large"))?;
                if neg {
                    -n
                } else {
                    n
                }
            } else {
                1
            };
            exps[idx] += e;
            if !cur.eat("*") {
                break;
            }
        }
    }
    Ok((Monomial::from_exponents(exps), coeff))
}

impl Polynomial {
    /// Parses the canonical text form (and the looser forms it implies, such
    /// as unsorted terms or explicit unit coefficients).
    pub fn parse(ring: &Arc<Ring>, s: &str) -> Result<Self, AlgebraError> {
        let mut cur = Cursor { s: s.trim(), pos: 0 };
        if cur.s == "0" {
            return Ok(Self::zero(ring));
        }
        let mut terms = Vec::new();
        let mut negate = cur.eat("-");
        loop {
            let (m, c) = parse_term(&mut cur, ring)?;
            terms.push((m, if negate { c.neg() } else { c }));
            cur.skip_ws();
            match cur.bump() {
                None => break,
                Some('+') => negate = false,
                Some('-') => negate = true,
                Some(_) => return Err(cur.error("expected `+` or `-`")),
            }
            cur.skip_ws();
        }
        Self::from_terms(ring, terms)
    }
}

/// Canonical text of a bare coefficient in the given ring.
pub fn coefficient_text(c: &Coefficient, ring: &Ring) -> String {
    let mut out = String::new();
    if c.is_negative_rational() {
        out.push('-');
        write_coefficient(&c.neg(), None, &mut out);
    } else {
        write_coefficient(c, ring.ext().map(|e| e.d()), &mut out);
    }
    out
}

/// Canonical text of a rational number (`p` or `p/q`).
pub fn rational_text(q: &BigRational) -> String {
    let mut out = String::new();
    if q.is_negative() {
        out.push('-');
        write_rational(&-q, &mut out);
    } else {
        write_rational(q, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::QuadraticExtension;

    fn ring() -> Arc<Ring> {
        Ring::with_names(&["x", "y", "u"], &["u"], Some(QuadraticExtension::from_int(12).unwrap()))
            .unwrap()
    }

    #[test]
    fn prints_canonically() {
        let r = ring();
        let p = Polynomial::parse(&r, "y + x^2 - 3/2 + 1*u^-2*y").unwrap();
        assert_eq!(p.to_string(), "x^2 + y + y*u^-2 - 3/2");
        let q = Polynomial::parse(&r, "(1/12)√12*x - (1 + (-2)√12)").unwrap();
        assert_eq!(q.to_string(), "(1/12)√12*x + (-1 + (2)√12)");
        assert_eq!(Polynomial::zero(&r).to_string(), "0");
        assert_eq!(Polynomial::from_int(&r, -1).to_string(), "-1");
        assert_eq!((-Polynomial::var(&r, "x").unwrap()).to_string(), "-x");
    }

    #[test]
    fn round_trip_fixed() {
        let r = ring();
        for s in ["-x^3*y + 2/3*y - 1", "(5)√12*x*u^-1 - 7", "x + (1/2 + (1/3)√12)*u^2", "0"] {
            let p = Polynomial::parse(&r, s).unwrap();
            assert_eq!(p.to_string(), s);
            assert_eq!(Polynomial::parse(&r, &p.to_string()).unwrap(), p);
        }
    }

    #[test]
    fn parse_errors() {
        let r = ring();
        assert!(Polynomial::parse(&r, "x + z").is_err());
        assert!(Polynomial::parse(&r, "(1)√2*x").is_err());
        assert!(Polynomial::parse(&r, "x^-1").is_err());
        assert!(Polynomial::parse(&r, "1/0").is_err());
        assert!(Polynomial::parse(&r, "x +").is_err());
    }
}

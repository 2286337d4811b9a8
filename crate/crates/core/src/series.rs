//! Truncated power series in `t` and rational closed forms `N(t) / Π (1-t^k)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

/// Default truncation degree for Hilbert-series comparisons.
pub const DEFAULT_CAP: usize = 40;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("cap mismatch: {left} vs {right}")]
    CapMismatch { left: usize, right: usize },
    #[error("denominator factor (1-t^0) is not allowed")]
    ZeroFactor,
}

/// Coefficients `c_0..c_D` of a power series truncated after degree `D`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    pub fn zero(cap: usize) -> Self {
        Self { coeffs: vec![BigInt::zero(); cap + 1] }
    }

    /// Pads with zeros or truncates so that exactly `cap + 1` coefficients remain.
    pub fn from_coeffs(cap: usize, coeffs: impl IntoIterator<Item = BigInt>) -> Self {
        let mut coeffs: Vec<BigInt> = coeffs.into_iter().take(cap + 1).collect();
        coeffs.resize(cap + 1, BigInt::zero());
        Self { coeffs }
    }

    pub fn from_i64(cap: usize, coeffs: &[i64]) -> Self {
        Self::from_coeffs(cap, coeffs.iter().map(|&c| BigInt::from(c)))
    }

    /// `t^k` truncated at `cap` (zero if `k > cap`).
    pub fn monomial(cap: usize, k: usize) -> Self {
        let mut s = Self::zero(cap);
        if k <= cap {
            s.coeffs[k] = BigInt::one();
        }
        s
    }

    pub fn cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &BigInt {
        &self.coeffs[k]
    }

    pub fn add_assign(&mut self, other: &Self) -> Result<(), SeriesError> {
        self.check_cap(other)?;
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, SeriesError> {
        let mut out = self.clone();
        out.add_assign(other)?;
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_cap(other)?;
        let cap = self.cap();
        let mut out = Self::zero(cap);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=cap - i].iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Multiplies in place by `1/(1-t^k)`, i.e. prefix sums with stride `k`.
    fn divide_by_binomial(&mut self, k: usize) {
        for i in k..self.coeffs.len() {
            let prev = self.coeffs[i - k].clone();
            self.coeffs[i] += prev;
        }
    }

    fn check_cap(&self, other: &Self) -> Result<(), SeriesError> {
        if self.cap() == other.cap() {
            Ok(())
        } else {
            Err(SeriesError::CapMismatch { left: self.cap(), right: other.cap() })
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// JSON integer array (coefficients beyond `i64` are emitted as strings).
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.coeffs.iter().map(bigint_json).collect())
    }
}

pub(crate) fn bigint_json(c: &BigInt) -> serde_json::Value {
    match c.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(c.to_string()),
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{mag} t")?,
                _ => write!(f, "{mag} t^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(t^{})", self.cap() + 1)
    }
}

/// Outcome of comparing two truncated series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SeriesComparison {
    Equal,
    Mismatch { degree: usize, left: String, right: String },
}

impl SeriesComparison {
    pub fn is_equal(&self) -> bool {
        matches!(self, Self::Equal)
    }
}

/// Coefficientwise comparison with the smallest mismatching degree as witness.
pub fn series_equal(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<SeriesComparison, SeriesError> {
    a.check_cap(b)?;
    Ok(a.coeffs
        .iter()
        .zip(&b.coeffs)
        .position(|(x, y)| x != y)
        .map_or(SeriesComparison::Equal, |k| SeriesComparison::Mismatch {
            degree: k,
            left: a.coeffs[k].to_string(),
            right: b.coeffs[k].to_string(),
        }))
}

/// Dense integer polynomial in `t`, trailing zeros trimmed.
fn trim(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// `p · (1 - t^k)`.
fn times_binomial(p: &[BigInt], k: usize) -> Vec<BigInt> {
    let mut out = p.to_vec();
    out.resize(p.len() + k, BigInt::zero());
    for (i, c) in p.iter().enumerate() {
        out[i + k] -= c;
    }
    trim(out)
}

/// `p / (1 - t^k)` if the quotient is a polynomial.
fn divide_binomial(p: &[BigInt], k: usize) -> Option<Vec<BigInt>> {
    if p.is_empty() {
        return Some(Vec::new());
    }
    if p.len() <= k {
        return None;
    }
    // q_i = p_i + q_{i-k}; exact iff the tail p_i + q_{i-k} vanishes past deg p - k.
    let qlen = p.len() - k;
    let mut q: Vec<BigInt> = Vec::with_capacity(p.len());
    for i in 0..p.len() {
        let mut c = p[i].clone();
        if i >= k {
            c += &q[i - k];
        }
        q.push(c);
    }
    if q[qlen..].iter().any(|c| !c.is_zero()) {
        return None;
    }
    q.truncate(qlen);
    Some(trim(q))
}

fn binomial_product(factors: &[u32]) -> Vec<BigInt> {
    factors
        .iter()
        .fold(vec![BigInt::one()], |acc, &k| times_binomial(&acc, k as usize))
}

fn multiset(factors: &[u32]) -> BTreeMap<u32, usize> {
    let mut m = BTreeMap::new();
    for &k in factors {
        *m.entry(k).or_insert(0) += 1;
    }
    m
}

/// `N(t) / Π_k (1 - t^k)` with integer numerator and a sorted multiset of
/// positive exponents `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClosedForm {
    numerator: Vec<BigInt>,
    denominator: Vec<u32>,
}

impl ClosedForm {
    pub fn new(numerator: Vec<BigInt>, mut denominator: Vec<u32>) -> Result<Self, SeriesError> {
        if denominator.contains(&0) {
            return Err(SeriesError::ZeroFactor);
        }
        denominator.sort_unstable();
        Ok(Self { numerator: trim(numerator), denominator })
    }

    /// Numerator given sparsely as `(exponent, coefficient)` pairs.
    pub fn from_sparse(numerator: &[(usize, i64)], denominator: &[u32]) -> Result<Self, SeriesError> {
        let len = numerator.iter().map(|&(e, _)| e + 1).max().unwrap_or(0);
        let mut num = vec![BigInt::zero(); len];
        for &(e, c) in numerator {
            num[e] += c;
        }
        Self::new(num, denominator.to_vec())
    }

    pub fn one() -> Self {
        Self { numerator: vec![BigInt::one()], denominator: Vec::new() }
    }

    /// `t^k`.
    pub fn monomial(k: usize) -> Self {
        let mut num = vec![BigInt::zero(); k + 1];
        num[k] = BigInt::one();
        Self { numerator: num, denominator: Vec::new() }
    }

    /// `1 / Π_k (1 - t^k)`.
    pub fn inverse_binomials(denominator: &[u32]) -> Result<Self, SeriesError> {
        Self::new(vec![BigInt::one()], denominator.to_vec())
    }

    pub fn numerator(&self) -> &[BigInt] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[u32] {
        &self.denominator
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut denominator = self.denominator.clone();
        denominator.extend_from_slice(&other.denominator);
        denominator.sort_unstable();
        Self { numerator: poly_mul(&self.numerator, &other.numerator), denominator }
    }

    /// Multiplies the numerator by an integer polynomial.
    pub fn mul_numerator(&self, p: &[BigInt]) -> Self {
        Self { numerator: poly_mul(&self.numerator, p), denominator: self.denominator.clone() }
    }

    /// Maclaurin coefficients through degree `cap`: the numerator truncated,
    /// then each `1/(1-t^k)` applied as a geometric series.
    pub fn expand(&self, cap: usize) -> TruncatedSeries {
        let mut s = TruncatedSeries::from_coeffs(cap, self.numerator.iter().cloned());
        for &k in &self.denominator {
            s.divide_by_binomial(k as usize);
        }
        s
    }

    /// `N(t) · Π_{k ∈ extra} (1-t^k)` over the larger denominator `self.den ∪ extra`.
    fn over(&self, common: &BTreeMap<u32, usize>) -> Vec<BigInt> {
        let own = multiset(&self.denominator);
        let mut extra = Vec::new();
        for (&k, &n) in common {
            let have = own.get(&k).copied().unwrap_or(0);
            extra.extend(std::iter::repeat_n(k, n - have));
        }
        poly_mul(&self.numerator, &binomial_product(&extra))
    }

    /// Exact sum of closed forms over the least common denominator
    /// (multiset maximum of the factor multiplicities).
    pub fn sum(forms: &[ClosedForm]) -> Self {
        let mut common: BTreeMap<u32, usize> = BTreeMap::new();
        for cf in forms {
            for (k, n) in multiset(&cf.denominator) {
                let e = common.entry(k).or_insert(0);
                *e = (*e).max(n);
            }
        }
        let mut numerator: Vec<BigInt> = Vec::new();
        for cf in forms {
            let lifted = cf.over(&common);
            if numerator.len() < lifted.len() {
                numerator.resize(lifted.len(), BigInt::zero());
            }
            for (a, b) in numerator.iter_mut().zip(lifted) {
                *a += b;
            }
        }
        let denominator = common.iter().flat_map(|(&k, &n)| std::iter::repeat_n(k, n)).collect();
        Self { numerator: trim(numerator), denominator }
    }

    /// Degree of the numerator after clearing both forms to a common
    /// denominator; series agreeing through this degree have equal closed forms.
    pub fn comparison_degree(&self, other: &Self) -> usize {
        let deg = |p: &[BigInt]| p.len().saturating_sub(1);
        let sum = |d: &[u32]| d.iter().map(|&k| k as usize).sum::<usize>();
        (deg(&self.numerator) + sum(&other.denominator)).max(deg(&other.numerator) + sum(&self.denominator))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "numerator": self.numerator.iter().map(bigint_json).collect::<Vec<_>>(),
            "denominator": self.denominator,
        })
    }
}

/// Exact equality of rational functions: `N_a · Π den_b = N_b · Π den_a`
/// after cancelling the shared part of the two denominators.
pub fn closed_form_equal(a: &ClosedForm, b: &ClosedForm) -> bool {
    let ma = multiset(&a.denominator);
    let mb = multiset(&b.denominator);
    let only = |x: &BTreeMap<u32, usize>, y: &BTreeMap<u32, usize>| -> Vec<u32> {
        x.iter()
            .flat_map(|(&k, &n)| std::iter::repeat_n(k, n.saturating_sub(y.get(&k).copied().unwrap_or(0))))
            .collect()
    };
    let lhs = poly_mul(&a.numerator, &binomial_product(&only(&mb, &ma)));
    let rhs = poly_mul(&b.numerator, &binomial_product(&only(&ma, &mb)));
    lhs == rhs
}

fn write_int_poly(p: &[BigInt], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for (k, c) in p.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        match (first, c.is_negative()) {
            (true, true) => f.write_str("-")?,
            (true, false) => {}
            (false, true) => f.write_str(" - ")?,
            (false, false) => f.write_str(" + ")?,
        }
        first = false;
        let unit = mag.is_one();
        match (k, unit) {
            (0, _) => write!(f, "{mag}")?,
            (1, true) => f.write_str("t")?,
            (1, false) => write!(f, "{mag}*t")?,
            (_, true) => write!(f, "t^{k}")?,
            (_, false) => write!(f, "{mag}*t^{k}")?,
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        write_int_poly(&self.numerator, f)?;
        f.write_str(") / (")?;
        if self.denominator.is_empty() {
            f.write_str("1")?;
        }
        for (i, (k, n)) in multiset(&self.denominator).into_iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "(1-t^{k})")?;
            if n > 1 {
                write!(f, "^{n}")?;
            }
        }
        f.write_str(")")
    }
}

/// Result of trying to put a closed form in complete-intersection shape
/// `Π (1-t^a) / Π (1-t^b)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum CiDiagnostic {
    CompleteIntersectionShape { numerator_factors: Vec<u32>, denominator_factors: Vec<u32> },
    Obstruction { degree: usize, coefficient: String, remaining_numerator: String },
}

impl CiDiagnostic {
    pub fn is_obstruction(&self) -> bool {
        matches!(self, Self::Obstruction { .. })
    }
}

const CI_ITERATION_BOUND: usize = 256;

/// Strips binomial factors from the numerator, lowest degree first. With
/// lowest nonconstant term `c·t^k`: `c = -1` divides by `(1-t^k)`, `c = +1`
/// multiplies numerator and denominator by `(1-t^k)`, anything else is an
/// obstruction. Heuristic: a success proves the shape, an obstruction does not
/// prove its absence.
pub fn ci_diagnostic(h: &ClosedForm) -> CiDiagnostic {
    let mut n = h.numerator.clone();
    let mut num_factors: Vec<u32> = Vec::new();
    let mut den_factors = h.denominator.clone();
    let obstruction = |n: &[BigInt], k: usize| CiDiagnostic::Obstruction {
        degree: k,
        coefficient: n.get(k).cloned().unwrap_or_default().to_string(),
        remaining_numerator: ClosedForm { numerator: n.to_vec(), denominator: Vec::new() }
            .numerator_text(),
    };
    for _ in 0..CI_ITERATION_BOUND {
        if n.first().is_none_or(|c| !c.is_one()) {
            return obstruction(&n, 0);
        }
        let Some(k) = (1..n.len()).find(|&k| !n[k].is_zero()) else {
            // cancel factors present on both sides
            let mut den = multiset(&den_factors);
            num_factors.retain(|k| match den.get_mut(k) {
                Some(c) if *c > 0 => {
                    *c -= 1;
                    false
                }
                _ => true,
            });
            num_factors.sort_unstable();
            let denominator_factors = den.into_iter().flat_map(|(k, c)| std::iter::repeat_n(k, c)).collect();
            return CiDiagnostic::CompleteIntersectionShape { numerator_factors: num_factors, denominator_factors };
        };
        let c = &n[k];
        if *c == BigInt::from(-1) {
            match divide_binomial(&n, k) {
                Some(q) => {
                    n = q;
                    num_factors.push(k as u32);
                }
                None => return obstruction(&n, k),
            }
        } else if c.is_one() {
            n = times_binomial(&n, k);
            den_factors.push(k as u32);
        } else {
            return obstruction(&n, k);
        }
    }
    obstruction(&n, n.len().saturating_sub(1))
}

impl ClosedForm {
    /// Numerator alone in `t` notation.
    pub fn numerator_text(&self) -> String {
        struct N<'a>(&'a [BigInt]);
        impl fmt::Display for N<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write_int_poly(self.0, f)
            }
        }
        N(&self.numerator).to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &TruncatedSeries) -> Vec<i64> {
        s.coeffs().iter().map(|c| c.to_i64().unwrap()).collect()
    }

    #[test]
    fn geometric_series() {
        let cf = ClosedForm::inverse_binomials(&[2]).unwrap();
        assert_eq!(ints(&cf.expand(6)), [1, 0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn telescoping_quotient() {
        let cf = ClosedForm::from_sparse(&[(0, 1), (4, -1)], &[2, 2]).unwrap();
        assert_eq!(ints(&cf.expand(6)), [1, 0, 2, 0, 2, 0, 2]);
        let other = ClosedForm::from_sparse(&[(0, 1), (2, 1)], &[2]).unwrap();
        assert!(closed_form_equal(&cf, &other));
        let changed = ClosedForm::from_sparse(&[(0, 1), (4, -1)], &[2, 3]).unwrap();
        assert!(!closed_form_equal(&cf, &changed));
    }

    #[test]
    fn comparison_witness() {
        let a = TruncatedSeries::from_i64(3, &[1, 2, 3, 4]);
        assert_eq!(series_equal(&a, &a).unwrap(), SeriesComparison::Equal);
        let b = TruncatedSeries::from_i64(3, &[0, 2, 3, 4]);
        assert!(matches!(series_equal(&a, &b).unwrap(), SeriesComparison::Mismatch { degree: 0, .. }));
        let c = TruncatedSeries::from_i64(4, &[1, 2, 3, 4]);
        assert_eq!(series_equal(&a, &c), Err(SeriesError::CapMismatch { left: 3, right: 4 }));
    }

    #[test]
    fn printing() {
        let cf = ClosedForm::from_sparse(&[(0, 1), (8, -1)], &[2, 2, 2, 3, 3]).unwrap();
        assert_eq!(cf.to_string(), "(1 - t^8) / ((1-t^2)^3 (1-t^3)^2)");
        assert_eq!(cf.expand(3).to_string(), "1 + 3 t^2 + 2 t^3 + O(t^4)");
        assert_eq!(cf.expand(3).to_json().to_string(), "[1,0,3,2]");
    }

    #[test]
    fn sums_over_common_denominator() {
        // 1/(1-t) + t/(1-t) = (1+t)/(1-t)
        let a = ClosedForm::inverse_binomials(&[1]).unwrap();
        let b = ClosedForm::monomial(1).mul(&a);
        let s = ClosedForm::sum(&[a, b]);
        assert_eq!(s, ClosedForm::from_sparse(&[(0, 1), (1, 1)], &[1]).unwrap());
    }

    #[test]
    fn ci_shapes() {
        let geo = ClosedForm::inverse_binomials(&[1]).unwrap();
        assert_eq!(
            ci_diagnostic(&geo),
            CiDiagnostic::CompleteIntersectionShape { numerator_factors: vec![], denominator_factors: vec![1] }
        );
        let ci = ClosedForm::from_sparse(&[(0, 1), (8, -1)], &[2, 2, 2, 3, 3]).unwrap();
        assert_eq!(
            ci_diagnostic(&ci),
            CiDiagnostic::CompleteIntersectionShape {
                numerator_factors: vec![8],
                denominator_factors: vec![2, 2, 2, 3, 3]
            }
        );
        // (1+t^2)/(1-t^2) = (1-t^4)/(1-t^2)^2
        let lifted = ClosedForm::from_sparse(&[(0, 1), (2, 1)], &[2]).unwrap();
        assert_eq!(
            ci_diagnostic(&lifted),
            CiDiagnostic::CompleteIntersectionShape { numerator_factors: vec![4], denominator_factors: vec![2, 2] }
        );
        let bad = ClosedForm::from_sparse(&[(0, 1), (3, 2)], &[1]).unwrap();
        assert!(matches!(ci_diagnostic(&bad), CiDiagnostic::Obstruction { degree: 3, .. }));
    }
}

//! Dense matrices of polynomials with exact determinants.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::{AlgebraError, Coefficient, Polynomial, Ring};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("size mismatch: {0}x{1} vs {2}x{3}")]
    SizeMismatch(usize, usize, usize, usize),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("determinant methods disagree: difference {0}")]
    DeterminantMismatch(String),
}

impl PolyMatrix {
    pub fn zero(ring: &Arc<Ring>, rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![Polynomial::zero(ring); rows * cols] }
    }

    pub fn identity(ring: &Arc<Ring>, n: usize) -> Self {
        let mut m = Self::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, Polynomial::one(ring));
        }
        m
    }

    pub fn from_fn(ring: &Arc<Ring>, rows: usize, cols: usize, f: impl Fn(usize, usize) -> Polynomial) -> Self {
        let mut m = Self::zero(ring, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.entries[0].ring()
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    /// First nonzero entry as `(i, j): p` with 1-based indices.
    pub fn nonzero_witness(&self) -> Option<String> {
        self.entries.iter().position(|p| !p.is_zero()).map(|k| {
            let (i, j) = (k / self.cols, k % self.cols);
            format!("entry ({}, {}): {}", i + 1, j + 1, self.entries[k])
        })
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero(self.ring(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    fn check_same(&self, other: &Self) -> Result<(), MatrixError> {
        if self.rows == other.rows && self.cols == other.cols {
            Ok(())
        } else {
            Err(MatrixError::SizeMismatch(self.rows, self.cols, other.rows, other.cols))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_same(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.try_add(b)).collect::<Result<_, _>>()?;
        Ok(Self { rows: self.rows, cols: self.cols, entries })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_same(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.try_sub(b)).collect::<Result<_, _>>()?;
        Ok(Self { rows: self.rows, cols: self.cols, entries })
    }

    pub fn scale(&self, c: &Coefficient) -> Self {
        Self { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|p| p.scale(c)).collect() }
    }

    /// Product skipping zero entries; rows are computed in parallel.
    pub fn try_mul(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::SizeMismatch(self.rows, self.cols, other.rows, other.cols));
        }
        let ring = self.ring().clone();
        let rows: Vec<Vec<Polynomial>> = (0..self.rows)
            .into_par_iter()
            .map(|i| {
                let mut row = vec![Polynomial::zero(&ring); other.cols];
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    for (j, slot) in row.iter_mut().enumerate() {
                        let b = other.get(k, j);
                        if !b.is_zero() {
                            *slot = &*slot + &(a * b);
                        }
                    }
                }
                row
            })
            .collect();
        Ok(Self { rows: self.rows, cols: other.cols, entries: rows.into_iter().flatten().collect() })
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Result<Self, MatrixError> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    pub fn trace(&self) -> Result<Polynomial, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NotSquare(self.rows, self.cols));
        }
        let mut t = Polynomial::zero(self.ring());
        for i in 0..self.rows {
            t = &t + self.get(i, i);
        }
        Ok(t)
    }

    /// Leading `rows × cols` block.
    pub fn block(&self, rows: usize, cols: usize) -> Self {
        let mut m = Self::zero(self.ring(), rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        m
    }

    /// Applies `f` to every entry.
    pub fn try_map(&self, f: impl Fn(&Polynomial) -> Result<Polynomial, AlgebraError> + Sync + Send) -> Result<Self, MatrixError> {
        let entries = self.entries.par_iter().map(f).collect::<Result<_, _>>()?;
        Ok(Self { rows: self.rows, cols: self.cols, entries })
    }

    fn check_square(&self) -> Result<usize, MatrixError> {
        if self.rows == self.cols {
            Ok(self.rows)
        } else {
            Err(MatrixError::NotSquare(self.rows, self.cols))
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination with row pivoting.
    /// Each step divides by the previous pivot; those divisions are exact in
    /// an integral domain, so a failing division is an internal error.
    pub fn det_fraction_free(&self) -> Result<Polynomial, MatrixError> {
        let n = self.check_square()?;
        let ring = self.ring().clone();
        if n == 0 {
            return Ok(Polynomial::one(&ring));
        }
        let mut m: Vec<Vec<Polynomial>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut negate = false;
        let mut prev = Polynomial::one(&ring);
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                // Swap in the row with the sparsest nonzero pivot.
                let Some(p) = (k + 1..n).filter(|&i| !m[i][k].is_zero()).min_by_key(|&i| m[i][k].len()) else {
                    return Ok(Polynomial::zero(&ring));
                };
                m.swap(k, p);
                negate = !negate;
            }
            let (upper, lower) = m.split_at_mut(k + 1);
            let pivot_row = &upper[k];
            let pivot = &pivot_row[k];
            lower
                .par_iter_mut()
                .map(|row| -> Result<(), AlgebraError> {
                    let factor = row[k].clone();
                    for j in k + 1..n {
                        let mut v = &row[j] * pivot;
                        if !factor.is_zero() && !pivot_row[j].is_zero() {
                            v = &v - &(&factor * &pivot_row[j]);
                        }
                        row[j] = v.exact_divide(&prev)?;
                    }
                    row[k] = Polynomial::zero(pivot.ring());
                    Ok(())
                })
                .collect::<Result<(), AlgebraError>>()?;
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        Ok(if negate { -det } else { det })
    }

    /// Determinant by Laplace expansion along rows, memoized over the set of
    /// remaining columns (`O(2^n · n)` products). Independent reference
    /// implementation for cross-checking.
    pub fn det_cofactor(&self) -> Result<Polynomial, MatrixError> {
        let n = self.check_square()?;
        assert!(n <= 20, "cofactor expansion limited to small matrices");
        let ring = self.ring().clone();
        let mut memo: HashMap<u32, Polynomial> = HashMap::new();
        fn minor(
            m: &PolyMatrix,
            row: usize,
            cols: u32,
            memo: &mut HashMap<u32, Polynomial>,
            ring: &Arc<Ring>,
        ) -> Polynomial {
            if row == m.rows {
                return Polynomial::one(ring);
            }
            if let Some(p) = memo.get(&cols) {
                return p.clone();
            }
            let mut acc = Polynomial::zero(ring);
            let mut sign_pos = true;
            for j in 0..m.cols {
                if cols & (1 << j) == 0 {
                    continue;
                }
                let a = m.get(row, j);
                if !a.is_zero() {
                    let sub = minor(m, row + 1, cols & !(1 << j), memo, ring);
                    let t = a * &sub;
                    acc = if sign_pos { &acc + &t } else { &acc - &t };
                }
                sign_pos = !sign_pos;
            }
            memo.insert(cols, acc.clone());
            acc
        }
        Ok(minor(self, 0, (1u32 << n) - 1, &mut memo, &ring))
    }

    /// Fraction-free determinant, cross-checked against cofactor expansion
    /// when `n ≤ 6`.
    pub fn determinant(&self) -> Result<Polynomial, MatrixError> {
        let det = self.det_fraction_free()?;
        if self.rows <= 6 {
            let reference = self.det_cofactor()?;
            if reference != det {
                return Err(MatrixError::DeterminantMismatch((&det - &reference).to_string()));
            }
        }
        Ok(det)
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

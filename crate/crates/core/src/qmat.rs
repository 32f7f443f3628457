//! Exact matrices over Q.
//!
//! These live in the residue field of the valuation at infinity: residue
//! matrices of integral matrices over Q(t), specializations at rational
//! points, and the row-span computations behind flags in vertex links.
//! Everything is plain fraction arithmetic — no pivoting heuristics, no
//! tolerance thresholds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

use crate::error::{Error, Result};

/// A dense matrix over Q, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl QMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(QMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        QMat::from_rows(
            rows.iter()
                .map(|row| {
                    row.iter()
                        .map(|&v| BigRational::from_integer(BigInt::from(v)))
                        .collect()
                })
                .collect(),
        )
        .expect("rectangular integer literal")
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, rhs: &QMat) -> Result<QMat> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = QMat::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = &out[(i, j)] + &(a * &rhs[(k, j)]);
                    out[(i, j)] = v;
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> QMat {
        let mut out = QMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Stacks two matrices with equal column counts, `self` on top.
    pub fn vstack(&self, below: &QMat) -> Result<QMat> {
        if self.cols != below.cols {
            return Err(Error::Dimension("vstack column mismatch".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&below.data);
        Ok(QMat {
            rows: self.rows + below.rows,
            cols: self.cols,
            data,
        })
    }

    /// Reduced row echelon form: unit pivots, zeros above and below, zero
    /// rows trimmed. Two row-spans are equal iff their rrefs are equal,
    /// which makes this the canonical representative of a subspace.
    pub fn rref(&self) -> QMat {
        let mut m = self.clone();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            let Some(src) = (pivot_row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(pivot_row, src);
            let inv = m[(pivot_row, col)].recip();
            for j in col..m.cols {
                let v = &m[(pivot_row, j)] * &inv;
                m[(pivot_row, j)] = v;
            }
            for r in 0..m.rows {
                if r == pivot_row || m[(r, col)].is_zero() {
                    continue;
                }
                let f = m[(r, col)].clone();
                for j in col..m.cols {
                    let v = &m[(r, j)] - &(&f * &m[(pivot_row, j)]);
                    m[(r, j)] = v;
                }
            }
            pivot_row += 1;
            if pivot_row == m.rows {
                break;
            }
        }
        // Trim zero rows so equal spans are structurally equal.
        let rows: Vec<Vec<BigRational>> = (0..pivot_row).map(|i| m.row(i).to_vec()).collect();
        QMat {
            rows: pivot_row,
            cols: m.cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rows
    }

    /// Determinant by fraction arithmetic Gaussian elimination.
    pub fn det(&self) -> Result<BigRational> {
        if self.rows != self.cols {
            return Err(Error::Dimension("determinant of non-square matrix".into()));
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = BigRational::one();
        for col in 0..n {
            let Some(src) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
                return Ok(BigRational::zero());
            };
            if src != col {
                m.swap_rows(col, src);
                det = -det;
            }
            let pivot = m[(col, col)].clone();
            det = &det * &pivot;
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let f = &m[(r, col)] / &pivot;
                for j in col..n {
                    let v = &m[(r, j)] - &(&f * &m[(col, j)]);
                    m[(r, j)] = v;
                }
            }
        }
        Ok(det)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.det().map(|d| !d.is_zero()).unwrap_or(false)
    }

    /// Inverse by Gauss-Jordan elimination. Errors on singular input.
    pub fn inverse(&self) -> Result<QMat> {
        if self.rows != self.cols {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = QMat::identity(n);
        for col in 0..n {
            let Some(src) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
                return Err(Error::Singular);
            };
            m.swap_rows(col, src);
            inv.swap_rows(col, src);
            let p = m[(col, col)].recip();
            for j in 0..n {
                let a = &m[(col, j)] * &p;
                m[(col, j)] = a;
                let b = &inv[(col, j)] * &p;
                inv[(col, j)] = b;
            }
            for r in 0..n {
                if r == col || m[(r, col)].is_zero() {
                    continue;
                }
                let f = m[(r, col)].clone();
                for j in 0..n {
                    let a = &m[(r, j)] - &(&f * &m[(col, j)]);
                    m[(r, j)] = a;
                    let b = &inv[(r, j)] - &(&f * &inv[(col, j)]);
                    inv[(r, j)] = b;
                }
            }
        }
        Ok(inv)
    }

    /// True when every entry is 0 except a shared nonzero diagonal value:
    /// the projective identity test.
    pub fn is_scalar(&self) -> bool {
        if self.rows != self.cols || self.rows == 0 {
            return false;
        }
        let d = &self[(0, 0)];
        if d.is_zero() {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want_diag = i == j;
                if want_diag && &self[(i, j)] != d {
                    return false;
                }
                if !want_diag && !self[(i, j)].is_zero() {
                    return false;
                }
            }
        }
        true
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Rows rendered as exact `p/q` strings, for reports.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(BigRational::to_string).collect())
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for QMat {
    type Output = BigRational;

    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for QMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl serde::Serialize for QMat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.to_string_rows())
    }
}

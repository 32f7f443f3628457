//! Matrices over Q(t) and their valuation-theoretic shadows.
//!
//! The determinant clears denominators row by row and runs fraction-free
//! Bareiss elimination over Q[t], so intermediate entries stay polynomial
//! and every division is exact. Inverses go through the adjugate, the
//! characteristic polynomial through Faddeev-LeVerrier — both reduce to
//! determinant-sized work at the 3x3 and 4x4 shapes this crate lives at.

use num_rational::BigRational;
use std::fmt;

use crate::error::{Error, Result};
use crate::extint::ExtInt;
use crate::poly::Poly;
use crate::qmat::QMat;
use crate::ratfn::RatFn;

/// A dense matrix over Q(t), row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatK {
    rows: usize,
    cols: usize,
    data: Vec<RatFn>,
}

impl MatK {
    pub fn zero(rows: usize, cols: usize) -> Self {
        MatK {
            rows,
            cols,
            data: vec![RatFn::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = MatK::zero(n, n);
        for i in 0..n {
            m[(i, i)] = RatFn::one();
        }
        m
    }

    pub fn diagonal(entries: Vec<RatFn>) -> Self {
        let n = entries.len();
        let mut m = MatK::zero(n, n);
        for (i, e) in entries.into_iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    /// The translation diag(π^{a_1}, ..., π^{a_n}).
    pub fn pi_diagonal(exps: &[i64]) -> Self {
        MatK::diagonal(exps.iter().map(|&k| RatFn::pi_pow(k)).collect())
    }

    pub fn from_rows(rows: Vec<Vec<RatFn>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(MatK {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[RatFn] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<F: Fn(&RatFn) -> RatFn>(&self, f: F) -> MatK {
        MatK {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn mul(&self, rhs: &MatK) -> Result<MatK> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = MatK::zero(self.rows, rhs.cols);
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

    pub fn add(&self, rhs: &MatK) -> Result<MatK> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension("addition shape mismatch".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a = &*a + b;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &RatFn) -> MatK {
        self.map(|e| e * c)
    }

    pub fn trace(&self) -> RatFn {
        let mut acc = RatFn::zero();
        for i in 0..self.rows.min(self.cols) {
            acc = &acc + &self[(i, i)];
        }
        acc
    }

    /// Determinant by fraction-free Bareiss elimination over Q[t] after
    /// clearing each row's denominators.
    pub fn det(&self) -> Result<RatFn> {
        if !self.is_square() {
            return Err(Error::Dimension("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(RatFn::one());
        }
        // Clear denominators: row i of self times clear_i has polynomial
        // entries, and det(self) = det(poly matrix) / prod(clear_i).
        let mut cleared = RatFn::one();
        let mut m: Vec<Vec<Poly>> = Vec::with_capacity(n);
        for i in 0..n {
            let lcm = self
                .row(i)
                .iter()
                .fold(Poly::one(), |acc, e| poly_lcm(&acc, e.den()));
            cleared = &cleared * &RatFn::from_poly(lcm.clone());
            m.push(
                self.row(i)
                    .iter()
                    .map(|e| e.num() * &lcm.exact_div(e.den()))
                    .collect(),
            );
        }
        let mut sign = false;
        let mut prev = Poly::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(src) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                    return Ok(RatFn::zero());
                };
                m.swap(k, src);
                sign = !sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = num.exact_div(&prev);
                }
                m[i][k] = Poly::zero();
            }
            prev = m[k][k].clone();
        }
        let mut det = RatFn::from_poly(m[n - 1][n - 1].clone()).div(&cleared)?;
        if sign {
            det = -&det;
        }
        Ok(det)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.det().map(|d| !d.is_zero()).unwrap_or(false)
    }

    /// True when every entry is 0 except a shared nonzero diagonal value:
    /// the projective identity test.
    pub fn is_scalar(&self) -> bool {
        if !self.is_square() || self.rows == 0 {
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

    /// Inverse via the adjugate: inv = adj / det. Errors on singular or
    /// non-square input.
    pub fn inverse(&self) -> Result<MatK> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let det = self.det()?;
        if det.is_zero() {
            return Err(Error::Singular);
        }
        let n = self.rows;
        let det_inv = det.recip()?;
        let mut out = MatK::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut minor = self.minor(i, j).det()?;
                if (i + j) % 2 == 1 {
                    minor = -&minor;
                }
                // Adjugate transposes the cofactor matrix.
                out[(j, i)] = &minor * &det_inv;
            }
        }
        Ok(out)
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> MatK {
        let rows: Vec<Vec<RatFn>> = (0..self.rows)
            .filter(|&i| i != skip_row)
            .map(|i| {
                (0..self.cols)
                    .filter(|&j| j != skip_col)
                    .map(|j| self[(i, j)].clone())
                    .collect()
            })
            .collect();
        MatK::from_rows(rows).expect("minor is rectangular")
    }

    /// Entrywise valuation at infinity.
    pub fn val_matrix(&self) -> ValMat {
        ValMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(RatFn::val_inf).collect(),
        }
    }

    /// All entries in the valuation ring.
    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|e| e.val_inf() >= ExtInt::Finite(0))
    }

    /// Membership in GL_n(O): integral entries and unit determinant.
    pub fn is_gl_o(&self) -> Result<bool> {
        if !self.is_square() {
            return Err(Error::Dimension("GL membership of non-square matrix".into()));
        }
        Ok(self.is_integral() && self.det()?.val_inf() == ExtInt::Finite(0))
    }

    /// Entrywise residue. Errors unless the matrix is integral.
    pub fn residue_matrix(&self) -> Result<QMat> {
        let rows: Result<Vec<Vec<BigRational>>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(RatFn::residue_inf).collect())
            .collect();
        QMat::from_rows(rows?)
    }

    /// Entrywise evaluation at a rational point. Errors on any pole.
    pub fn substitute(&self, x: &BigRational) -> Result<QMat> {
        let rows: Result<Vec<Vec<BigRational>>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|e| e.substitute(x)).collect())
            .collect();
        QMat::from_rows(rows?)
    }

    /// The automorphism t -> -t applied entrywise.
    pub fn negate_t(&self) -> MatK {
        self.map(RatFn::negate_t)
    }

    /// Characteristic polynomial det(x·I - self) by Faddeev-LeVerrier:
    /// trace recurrences only, no polynomial-matrix elimination.
    pub fn char_poly(&self) -> Result<KPoly> {
        if !self.is_square() {
            return Err(Error::Dimension(
                "characteristic polynomial of non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut aux = MatK::identity(n);
        // coeffs[k] multiplies x^(n-k); filled in descending order.
        let mut desc = vec![RatFn::one()];
        for k in 1..=n {
            let m = self.mul(&aux)?;
            let c = m.trace().scale(&-BigRational::new(1.into(), (k as i64).into()));
            let mut next = m;
            for i in 0..n {
                next[(i, i)] = &next[(i, i)] + &c;
            }
            aux = next;
            desc.push(c);
        }
        desc.reverse();
        Ok(KPoly::from_coeffs(desc))
    }
}

impl std::ops::Index<(usize, usize)> for MatK {
    type Output = RatFn;

    fn index(&self, (i, j): (usize, usize)) -> &RatFn {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for MatK {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut RatFn {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for MatK {
    /// Matrix text form: entries joined by `, `, rows by `; `. Re-parses
    /// to the same matrix.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(", ")
            })
            .collect();
        write!(f, "{}", rows.join("; "))
    }
}

impl serde::Serialize for MatK {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect();
        s.collect_seq(rows)
    }
}

fn poly_lcm(a: &Poly, b: &Poly) -> Poly {
    let g = a.gcd(b);
    (&a.exact_div(&g) * b).monic()
}

/// An entrywise valuation matrix.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ValMat {
    rows: usize,
    cols: usize,
    data: Vec<ExtInt>,
}

impl ValMat {
    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn from_rows(rows: &[&[ExtInt]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        ValMat {
            rows: r,
            cols: c,
            data: rows.iter().flat_map(|row| row.iter().copied()).collect(),
        }
    }

    pub fn from_finite(rows: &[&[i64]]) -> Self {
        let conv: Vec<Vec<ExtInt>> = rows
            .iter()
            .map(|row| row.iter().map(|&v| ExtInt::Finite(v)).collect())
            .collect();
        ValMat::from_rows(&conv.iter().map(Vec::as_slice).collect::<Vec<_>>())
    }
}

impl std::ops::Index<(usize, usize)> for ValMat {
    type Output = ExtInt;

    fn index(&self, (i, j): (usize, usize)) -> &ExtInt {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Display for ValMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A monic-or-not polynomial in x with coefficients in Q(t); the output
/// type of `char_poly`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KPoly {
    coeffs: Vec<RatFn>, // ascending powers of x, trailing nonzero
}

impl KPoly {
    pub fn from_coeffs(mut coeffs: Vec<RatFn>) -> Self {
        while coeffs.last().is_some_and(RatFn::is_zero) {
            coeffs.pop();
        }
        KPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[RatFn] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Applies t -> -t to every coefficient.
    pub fn negate_t(&self) -> KPoly {
        KPoly::from_coeffs(self.coeffs.iter().map(RatFn::negate_t).collect())
    }

    /// Evaluates at x = v over Q(t).
    pub fn eval(&self, v: &RatFn) -> RatFn {
        let mut acc = RatFn::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * v) + c;
        }
        acc
    }
}

impl fmt::Display for KPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extint::ExtInt::{Finite, Infinity};

    fn r(n: i64) -> RatFn {
        RatFn::from_int(n)
    }

    fn t() -> RatFn {
        RatFn::t()
    }

    #[test]
    fn determinant_spot_checks() {
        // diag(t, 1/t) has determinant 1.
        let d = MatK::diagonal(vec![t(), RatFn::t_pow(-1)]);
        assert!(d.det().unwrap().is_one());
        assert!(MatK::identity(4).det().unwrap().is_one());
        // Row swap sign: [[0,1],[1,0]] -> -1.
        let swap = MatK::from_rows(vec![
            vec![r(0), r(1)],
            vec![r(1), r(0)],
        ])
        .unwrap();
        assert_eq!(swap.det().unwrap(), r(-1));
        // Singular: equal rows.
        let sing = MatK::from_rows(vec![
            vec![t(), r(1)],
            vec![t(), r(1)],
        ])
        .unwrap();
        assert!(sing.det().unwrap().is_zero());
        assert_eq!(sing.inverse(), Err(Error::Singular));
    }

    #[test]
    fn determinant_with_denominators() {
        // [[1/(t-1), 1], [1, t-1]] has det 1/(t-1)*(t-1) - 1 = 0.
        let tm1 = RatFn::from_poly(Poly::from_ints(&[-1, 1]));
        let m = MatK::from_rows(vec![
            vec![tm1.recip().unwrap(), r(1)],
            vec![r(1), tm1.clone()],
        ])
        .unwrap();
        assert!(m.det().unwrap().is_zero());
        // Perturb one corner: det = t/(t-1) - 1 = 1/(t-1).
        let mut m2 = m.clone();
        m2[(1, 1)] = t();
        assert_eq!(m2.det().unwrap(), tm1.recip().unwrap());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = MatK::from_rows(vec![
            vec![t(), r(1), r(0)],
            vec![r(0), r(1), RatFn::t_pow(-1)],
            vec![r(1), r(0), r(1)],
        ])
        .unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), MatK::identity(3));
        assert_eq!(inv.mul(&m).unwrap(), MatK::identity(3));
    }

    #[test]
    fn valuation_matrix_and_integrality() {
        let m = MatK::from_rows(vec![
            vec![t(), r(1)],
            vec![RatFn::t_pow(-2), RatFn::zero()],
        ])
        .unwrap();
        let v = m.val_matrix();
        assert_eq!(v[(0, 0)], Finite(-1));
        assert_eq!(v[(0, 1)], Finite(0));
        assert_eq!(v[(1, 0)], Finite(2));
        assert_eq!(v[(1, 1)], Infinity);
        assert!(!m.is_integral());
        // GL(O) membership: unimodular integral matrix.
        let u = MatK::from_rows(vec![
            vec![r(1), RatFn::t_pow(-1)],
            vec![r(0), r(1)],
        ])
        .unwrap();
        assert!(u.is_gl_o().unwrap());
        // Integral but with determinant in the maximal ideal: not a unit.
        let nu = MatK::diagonal(vec![r(1), RatFn::t_pow(-1)]);
        assert!(nu.is_integral());
        assert!(!nu.is_gl_o().unwrap());
        // diag(t, 1/t) has unit det but a non-integral entry.
        assert!(!MatK::diagonal(vec![t(), RatFn::t_pow(-1)]).is_gl_o().unwrap());
    }

    #[test]
    fn residue_matrix_values() {
        let m = MatK::from_rows(vec![
            vec![r(2), RatFn::t_pow(-1)],
            vec![RatFn::zero(), RatFn::new(
                Poly::from_ints(&[1, 3]),
                Poly::from_ints(&[0, 1]),
            )
            .unwrap()],
        ])
        .unwrap();
        let q = m.residue_matrix().unwrap();
        assert_eq!(q, QMat::from_ints(&[&[2, 0], &[0, 3]]));
        let bad = MatK::diagonal(vec![t()]);
        assert_eq!(bad.residue_matrix(), Err(Error::NotIntegral));
    }

    #[test]
    fn char_poly_of_diagonal_translation() {
        // diag(1, -1/t, -t): char poly (x-1)(x+1/t)(x+t).
        let f = MatK::diagonal(vec![r(1), -&RatFn::t_pow(-1), -&t()]);
        let cp = f.char_poly().unwrap();
        assert_eq!(cp.degree(), Some(3));
        // Monic, and the constant term is -det = -1.
        assert!(cp.coeffs()[3].is_one());
        assert_eq!(cp.coeffs()[0], r(-1));
        // Each eigenvalue is a root.
        for ev in [r(1), -&RatFn::t_pow(-1), -&t()] {
            assert!(cp.eval(&ev).is_zero());
        }
        // Trace coefficient: -(1 - 1/t - t).
        let expect = -&(&(&r(1) - &RatFn::t_pow(-1)) - &t());
        assert_eq!(cp.coeffs()[2], expect);
    }

    #[test]
    fn char_poly_conjugation_invariance() {
        let a = MatK::from_rows(vec![
            vec![t(), r(1)],
            vec![r(1), RatFn::t_pow(-1)],
        ])
        .unwrap();
        let g = MatK::from_rows(vec![
            vec![r(1), t()],
            vec![r(0), r(1)],
        ])
        .unwrap();
        let conj = g.mul(&a).unwrap().mul(&g.inverse().unwrap()).unwrap();
        assert_eq!(a.char_poly().unwrap(), conj.char_poly().unwrap());
    }

    #[test]
    fn display_roundtrip_shape() {
        let m = MatK::from_rows(vec![
            vec![t(), RatFn::t_pow(-1)],
            vec![r(-3), RatFn::zero()],
        ])
        .unwrap();
        assert_eq!(m.to_string(), "t, (1)/(t); -3, 0");
    }
}

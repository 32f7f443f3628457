//! Dense univariate polynomials over Q in the variable `t`.
//!
//! Coefficients are arbitrary-precision rationals stored in ascending
//! degree order with no trailing zero, so the zero polynomial is the empty
//! vector and structural equality is value equality. The gcd runs a
//! subresultant pseudo-remainder sequence over Z after clearing
//! denominators, which keeps intermediate coefficient growth polynomial
//! instead of exponential.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// A polynomial in Q[t], coefficients ascending, last coefficient nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// The monomial `t`.
    pub fn t() -> Self {
        Poly::from_coeffs(vec![BigRational::zero(), BigRational::one()])
    }

    /// The monomial `t^k`.
    pub fn t_pow(k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = BigRational::one();
        Poly { coeffs }
    }

    /// Builds from ascending coefficients, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Convenience constructor from ascending integer coefficients.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Ascending coefficients (empty for zero).
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `t^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let lc = self.leading();
        self.scale(&lc.recip())
    }

    /// Quotient and remainder with `deg r < deg d`. Errors on zero divisor.
    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lc = d.leading();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let q = rem.last().unwrap() / &lc;
            for (i, dc) in d.coeffs.iter().enumerate() {
                let v = &rem[k + i] - &(&q * dc);
                rem[k + i] = v;
            }
            debug_assert!(rem.last().unwrap().is_zero());
            rem.pop();
            quo[k] = q;
            while rem.last().is_some_and(Zero::is_zero) && rem.len() > dd {
                rem.pop();
            }
        }
        Ok((Poly::from_coeffs(quo), Poly::from_coeffs(rem)))
    }

    /// Exact quotient; panics if the division leaves a remainder, which
    /// would mean a broken caller invariant (Bareiss pivots divide exactly).
    pub fn exact_div(&self, d: &Poly) -> Poly {
        let (q, r) = self.divrem(d).expect("exact_div by zero");
        assert!(r.is_zero(), "exact_div left a remainder");
        q
    }

    /// Monic gcd via a subresultant pseudo-remainder sequence over Z.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let a = self.primitive_int();
        let b = other.primitive_int();
        let (mut a, mut b) = if int_deg(&a) >= int_deg(&b) { (a, b) } else { (b, a) };
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        loop {
            let d = int_deg(&a) - int_deg(&b);
            let r = pseudo_rem(&a, &b);
            if r.is_empty() {
                return Poly::from_int_coeffs(&int_primitive(&b)).monic();
            }
            if int_deg(&r) == 0 {
                return Poly::one();
            }
            // Exact subresultant divisor g * h^d keeps coefficients small.
            let divisor = &g * h.pow(d as u32);
            let b_next: Vec<BigInt> = r
                .iter()
                .map(|c| {
                    let (q, rem) = c.div_rem(&divisor);
                    debug_assert!(rem.is_zero());
                    q
                })
                .collect();
            a = b;
            b = b_next;
            g = a.last().unwrap().clone();
            h = if d == 0 {
                h
            } else {
                let (q, rem) = g.pow(d as u32).div_rem(&h.pow((d - 1) as u32));
                debug_assert!(rem.is_zero());
                q
            };
        }
    }

    /// Evaluates at a rational point by Horner's rule.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * x + c;
        }
        acc
    }

    /// The substitution t -> -t: negates odd-degree coefficients.
    pub fn negate_t(&self) -> Poly {
        Poly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        }
    }

    /// Clears denominators and content: a primitive Z[t] image with
    /// positive leading coefficient. Caller guarantees nonzero input.
    fn primitive_int(&self) -> Vec<BigInt> {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * &lcm).to_integer()).collect();
        int_primitive(&ints)
    }

    fn from_int_coeffs(coeffs: &[BigInt]) -> Poly {
        Poly::from_coeffs(
            coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }
}

fn int_deg(p: &[BigInt]) -> usize {
    debug_assert!(!p.is_empty());
    p.len() - 1
}

/// Content-free copy with positive leading coefficient.
fn int_primitive(p: &[BigInt]) -> Vec<BigInt> {
    let mut content = p.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if p.last().unwrap().is_negative() {
        content = -content;
    }
    p.iter().map(|c| c / &content).collect()
}

/// Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a modulo b, exact in Z[t].
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = int_deg(b);
    let lb = b.last().unwrap();
    let mut r = a.to_vec();
    let mut e = (int_deg(a) - db + 1) as i64;
    while !r.is_empty() && r.len() - 1 >= db {
        let k = r.len() - 1 - db;
        let lr = r.last().unwrap().clone();
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (i, bc) in b.iter().enumerate() {
            let v = &r[k + i] - &lr * bc;
            r[k + i] = v;
        }
        debug_assert!(r.last().unwrap().is_zero());
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
        e -= 1;
    }
    if e > 0 && !r.is_empty() {
        let f = lb.pow(e as u32);
        for c in r.iter_mut() {
            *c *= &f;
        }
    }
    r
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + rhs.coeff(k));
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs =
            vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let v = &coeffs[i + j] + &(a * b);
                coeffs[i + j] = v;
            }
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    /// Descending terms: `2*t^3 - t + 1/2`. The output re-parses to the
    /// same polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit = mag.is_one();
            if !unit || k == 0 {
                write!(f, "{mag}")?;
            }
            if k > 0 {
                if !unit {
                    write!(f, "*")?;
                }
                write!(f, "t")?;
                if k > 1 {
                    write!(f, "^{k}")?;
                }
            }
        }
        Ok(())
    }
}

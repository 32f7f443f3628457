//! The field Q(t) of rational functions, with the discrete valuation at
//! infinity.
//!
//! Elements are kept in canonical form — numerator and denominator
//! coprime, denominator monic — so structural equality is value equality
//! and hashing is consistent. The valuation is `val(p/q) = deg q - deg p`
//! with `val(0) = ∞`; its uniformizer is `1/t`, its valuation ring is the
//! set of elements of nonnegative valuation, and its residue field is Q,
//! reached by taking the ratio of leading coefficients at valuation zero.

use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::extint::ExtInt;
use crate::poly::Poly;

/// An element of Q(t) in canonical reduced form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: Poly,
    den: Poly, // monic, coprime to num; exactly 1 when num is 0
}

impl RatFn {
    pub fn zero() -> Self {
        RatFn {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFn::from_poly(Poly::one())
    }

    /// The variable `t`.
    pub fn t() -> Self {
        RatFn::from_poly(Poly::t())
    }

    /// `t^k` for any integer k; negative powers land in the maximal ideal.
    pub fn t_pow(k: i64) -> Self {
        if k >= 0 {
            RatFn::from_poly(Poly::t_pow(k as usize))
        } else {
            RatFn {
                num: Poly::one(),
                den: Poly::t_pow((-k) as usize),
            }
        }
    }

    /// The uniformizer π = 1/t, of valuation 1.
    pub fn pi_pow(k: i64) -> Self {
        RatFn::t_pow(-k)
    }

    pub fn from_poly(num: Poly) -> Self {
        RatFn {
            num,
            den: Poly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        RatFn::from_poly(Poly::from_ints(&[n]))
    }

    pub fn from_rational(q: BigRational) -> Self {
        RatFn::from_poly(Poly::constant(q))
    }

    /// Canonicalizing constructor. Errors on a zero denominator.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFn::zero());
        }
        let g = num.gcd(&den);
        let num = num.exact_div(&g);
        let den = den.exact_div(&g);
        let lc = den.leading();
        Ok(RatFn {
            num: num.scale(&lc.recip()),
            den: den.monic(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == Poly::one() && self.den == Poly::one()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    /// Multiplicative inverse. Errors on zero.
    pub fn recip(&self) -> Result<RatFn> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFn::new(self.den.clone(), self.num.clone())
    }

    /// Checked division.
    pub fn div(&self, rhs: &RatFn) -> Result<RatFn> {
        Ok(self * &rhs.recip()?)
    }

    /// The valuation at infinity: deg(den) - deg(num), with val(0) = ∞.
    pub fn val_inf(&self) -> ExtInt {
        match (self.num.degree(), self.den.degree()) {
            (Some(dn), Some(dd)) => ExtInt::Finite(dd as i64 - dn as i64),
            _ => ExtInt::Infinity,
        }
    }

    /// Image in the residue field Q. Defined on the valuation ring only:
    /// zero for positive valuation, ratio of leading coefficients at
    /// valuation zero, and an error below the ring.
    pub fn residue_inf(&self) -> Result<BigRational> {
        match self.val_inf() {
            ExtInt::Infinity => Ok(BigRational::zero()),
            ExtInt::Finite(v) if v > 0 => Ok(BigRational::zero()),
            ExtInt::Finite(0) => Ok(self.num.leading() / self.den.leading()),
            _ => Err(Error::NotIntegral),
        }
    }

    /// Evaluates at a rational point. Coprimality makes a vanishing
    /// denominator a genuine pole.
    pub fn substitute(&self, x: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::Pole);
        }
        Ok(self.num.eval(x) / d)
    }

    /// The field automorphism t -> -t. Only the denominator's leading
    /// sign can break canonical form, so renormalize by it.
    pub fn negate_t(&self) -> RatFn {
        let num = self.num.negate_t();
        let den = self.den.negate_t();
        let lc = den.leading();
        if lc.is_one() {
            RatFn { num, den }
        } else {
            RatFn {
                num: num.scale(&lc.recip()),
                den: den.monic(),
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> RatFn {
        if c.is_zero() {
            return RatFn::zero();
        }
        RatFn {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }
}

impl Add for &RatFn {
    type Output = RatFn;

    fn add(self, rhs: &RatFn) -> RatFn {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFn::new(num, &self.den * &rhs.den).expect("nonzero denominator product")
    }
}

impl Sub for &RatFn {
    type Output = RatFn;

    fn sub(self, rhs: &RatFn) -> RatFn {
        self + &(-rhs)
    }
}

impl Mul for &RatFn {
    type Output = RatFn;

    fn mul(self, rhs: &RatFn) -> RatFn {
        RatFn::new(&self.num * &rhs.num, &self.den * &rhs.den)
            .expect("nonzero denominator product")
    }
}

impl Neg for &RatFn {
    type Output = RatFn;

    fn neg(self) -> RatFn {
        RatFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Add for RatFn {
    type Output = RatFn;
    fn add(self, rhs: RatFn) -> RatFn {
        &self + &rhs
    }
}

impl Sub for RatFn {
    type Output = RatFn;
    fn sub(self, rhs: RatFn) -> RatFn {
        &self - &rhs
    }
}

impl Mul for RatFn {
    type Output = RatFn;
    fn mul(self, rhs: RatFn) -> RatFn {
        &self * &rhs
    }
}

impl Neg for RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        -&self
    }
}

impl fmt::Display for RatFn {
    /// Canonical text form: `num` when the denominator is 1, otherwise
    /// `(num)/(den)`. Both halves are parenthesized so the output
    /// re-parses to the same element regardless of operator precedence.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl serde::Serialize for RatFn {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

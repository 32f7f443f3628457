//! Seeded random generators shared by the property suites.
//!
//! Everything is driven by ChaCha with fixed seeds so a failure names a
//! reproducible counterexample, never a flake.

// Each suite uses its own slice of these helpers.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use schottky::poly::Poly;
use schottky::{MatK, QMat, RatFn};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rational(rng: &mut ChaCha8Rng) -> BigRational {
    let num = rng.gen_range(-9i64..=9);
    let den = rng.gen_range(1i64..=9);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn poly(rng: &mut ChaCha8Rng, max_deg: usize) -> Poly {
    let deg = rng.gen_range(0..=max_deg);
    Poly::from_coeffs((0..=deg).map(|_| rational(rng)).collect())
}

pub fn nonzero_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> Poly {
    loop {
        let p = poly(rng, max_deg);
        if !p.is_zero() {
            return p;
        }
    }
}

/// A polynomial of exactly the requested degree.
pub fn exact_deg_poly(rng: &mut ChaCha8Rng, deg: usize) -> Poly {
    let mut coeffs: Vec<BigRational> = (0..=deg).map(|_| rational(rng)).collect();
    while coeffs[deg].is_zero() {
        coeffs[deg] = rational(rng);
    }
    Poly::from_coeffs(coeffs)
}

pub fn ratfn(rng: &mut ChaCha8Rng) -> RatFn {
    RatFn::new(poly(rng, 3), nonzero_poly(rng, 3)).unwrap()
}

pub fn nonzero_ratfn(rng: &mut ChaCha8Rng) -> RatFn {
    loop {
        let x = ratfn(rng);
        if !x.is_zero() {
            return x;
        }
    }
}

/// An element of the valuation ring: deg num ≤ deg den, so val ≥ 0.
/// Monomial denominators keep downstream eliminations cheap.
pub fn integral_ratfn(rng: &mut ChaCha8Rng) -> RatFn {
    let d = rng.gen_range(0..=2usize);
    RatFn::new(poly(rng, d), Poly::t_pow(d)).unwrap()
}

/// A unit of the valuation ring: exact degrees match, so val = 0.
pub fn unit_ratfn(rng: &mut ChaCha8Rng) -> RatFn {
    let d = rng.gen_range(0..=2usize);
    RatFn::new(exact_deg_poly(rng, d), Poly::t_pow(d)).unwrap()
}

pub fn matk(rng: &mut ChaCha8Rng, n: usize) -> MatK {
    let rows = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let d = rng.gen_range(0..=2usize);
                    RatFn::new(poly(rng, 2), Poly::t_pow(d)).unwrap()
                })
                .collect()
        })
        .collect();
    MatK::from_rows(rows).unwrap()
}

pub fn invertible_matk(rng: &mut ChaCha8Rng, n: usize) -> MatK {
    loop {
        let m = matk(rng, n);
        if m.is_invertible() {
            return m;
        }
    }
}

/// A random element of GL_n(O): a permutation, unit row scalings, and a
/// few integral shears. Stays invertible over the valuation ring by
/// construction, which the assert documents.
pub fn gl_o(rng: &mut ChaCha8Rng, n: usize) -> MatK {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let mut rows = vec![vec![RatFn::zero(); n]; n];
    for (i, &j) in perm.iter().enumerate() {
        rows[i][j] = unit_ratfn(rng);
    }
    let mut m = MatK::from_rows(rows).unwrap();
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        let mut srows: Vec<Vec<RatFn>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| if r == c { RatFn::one() } else { RatFn::zero() })
                    .collect()
            })
            .collect();
        srows[i][j] = integral_ratfn(rng);
        let shear = MatK::from_rows(srows).unwrap();
        m = shear.mul(&m).unwrap();
    }
    assert!(m.is_gl_o().unwrap(), "construction must land in GL_n(O)");
    m
}

pub fn qmat(rng: &mut ChaCha8Rng, n: usize) -> QMat {
    let rows = (0..n)
        .map(|_| (0..n).map(|_| rational(rng)).collect())
        .collect();
    QMat::from_rows(rows).unwrap()
}

pub fn invertible_qmat(rng: &mut ChaCha8Rng, n: usize) -> QMat {
    loop {
        let m = qmat(rng, n);
        if m.is_invertible() {
            return m;
        }
    }
}

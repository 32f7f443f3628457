//! The Burau representation of the braid groups B_n over Q(t), its
//! reduced quotient, and the two-parameter family of generator pairs.
//!
//! The unreduced representation realizes the standard action σ_i(e_i) =
//! (1-t)e_i + e_{i+1}, σ_i(e_{i+1}) = t·e_i on Q(t)^n. Every generator
//! fixes the vector e = Σe_i, so the action descends to V/Ke; the reduced
//! matrices are built by an explicit section/projection sandwich around
//! that quotient rather than transcribed from the literature, which keeps
//! them correct by construction. [`family_pair`] produces the diagonal
//! translation f = diag(1, -t⁻¹, -t) together with the conjugator s(α, β)
//! whose conjugate k = s·f·s⁻¹ completes the two-parameter generator
//! family fed to the certification pipeline.

use num_rational::BigRational;
use std::fmt;

use crate::error::{Error, Result};
use crate::matk::MatK;
use crate::poly::Poly;
use crate::ratfn::RatFn;

/// A formal word in the braid generators s_1, ..., s_{n-1}: a sequence of
/// signed generator indices. Words are not freely reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<(usize, i8)>,
}

impl BraidWord {
    /// Validates 2 ≤ n strands, indices in 1..n, and signs in {-1, +1}.
    pub fn new(strands: usize, letters: Vec<(usize, i8)>) -> Result<Self> {
        if strands < 2 {
            return Err(Error::Invalid("braid words need at least 2 strands".into()));
        }
        for &(i, sign) in &letters {
            if i == 0 || i >= strands {
                return Err(Error::Invalid(format!(
                    "generator index {i} out of range 1..{}",
                    strands - 1
                )));
            }
            if sign != 1 && sign != -1 {
                return Err(Error::Invalid("letter signs must be ±1".into()));
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn empty(strands: usize) -> Result<Self> {
        BraidWord::new(strands, Vec::new())
    }

    /// Parses `s3 s1^-1`-style text: tokens `s<k>` with an optional
    /// integer exponent, separated by whitespace or `*`. An exponent of
    /// magnitude m expands to m copies of the letter.
    pub fn parse(strands: usize, src: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for token in src.split(|c: char| c.is_whitespace() || c == '*') {
            if token.is_empty() {
                continue;
            }
            let body = token
                .strip_prefix('s')
                .ok_or_else(|| Error::Invalid(format!("expected s<k>, found \"{token}\"")))?;
            let (index, exp) = match body.split_once('^') {
                Some((i, e)) => (i, e),
                None => (body, "1"),
            };
            let index: usize = index
                .parse()
                .map_err(|_| Error::Invalid(format!("bad generator index in \"{token}\"")))?;
            let exp: i64 = exp
                .parse()
                .map_err(|_| Error::Invalid(format!("bad exponent in \"{token}\"")))?;
            let sign = if exp < 0 { -1 } else { 1 };
            for _ in 0..exp.unsigned_abs() {
                letters.push((index, sign));
            }
        }
        BraidWord::new(strands, letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.letters
    }

    /// The group inverse: letters reversed and sign-flipped.
    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|&(i, s)| (i, -s)).collect(),
        }
    }

    /// Concatenation of words on the same strand count.
    pub fn concat(&self, other: &BraidWord) -> Result<BraidWord> {
        if self.strands != other.strands {
            return Err(Error::Dimension("concatenating words on different strand counts".into()));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord {
            strands: self.strands,
            letters,
        })
    }
}

impl fmt::Display for BraidWord {
    /// One token per letter: `s3 s1^-1`. Re-parses to the same word.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &(i, sign) in &self.letters {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if sign < 0 {
                write!(f, "s{i}^-1")?;
            } else {
                write!(f, "s{i}")?;
            }
        }
        Ok(())
    }
}

/// Which Burau representation a word evaluates in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BurauKind {
    Unreduced,
    Reduced,
}

/// The unreduced Burau generators of B_n acting on Q(t)^n: columns
/// realize σ_i(e_i) = (1-t)e_i + e_{i+1}, σ_i(e_{i+1}) = t·e_i, fixing
/// the other basis vectors. Requires n ≥ 2.
pub fn burau_unreduced(n: usize) -> Vec<MatK> {
    assert!(n >= 2, "Burau needs at least 2 strands");
    let one_minus_t = RatFn::from_poly(Poly::from_ints(&[1, -1]));
    (1..n)
        .map(|i| {
            let mut m = MatK::identity(n);
            m[(i - 1, i - 1)] = one_minus_t.clone();
            m[(i, i - 1)] = RatFn::one();
            m[(i - 1, i)] = RatFn::t();
            m[(i, i)] = RatFn::zero();
            m
        })
        .collect()
}

/// Projection Q(t)^n -> Q(t)^{n-1} onto the quotient by the fixed vector
/// e = Σe_i, in the basis of the images of e_1, ..., e_{n-1}: the last
/// basis vector maps to -(e_1 + ... + e_{n-1}).
fn quotient_projection(n: usize) -> MatK {
    let mut p = MatK::zero(n - 1, n);
    for i in 0..n - 1 {
        p[(i, i)] = RatFn::one();
        p[(i, n - 1)] = RatFn::from_int(-1);
    }
    p
}

/// Section Q(t)^{n-1} -> Q(t)^n splitting the projection: quotient basis
/// vectors lift to e_1, ..., e_{n-1}.
fn quotient_section(n: usize) -> MatK {
    let mut s = MatK::zero(n, n - 1);
    for i in 0..n - 1 {
        s[(i, i)] = RatFn::one();
    }
    s
}

/// The reduced Burau generators of B_n: the unreduced action pushed to
/// the quotient V/Ke through the section/projection sandwich b = P·σ·S.
/// Each generator has determinant -t. Requires n ≥ 2.
pub fn burau_reduced(n: usize) -> Vec<MatK> {
    let p = quotient_projection(n);
    let s = quotient_section(n);
    burau_unreduced(n)
        .into_iter()
        .map(|sigma| {
            p.mul(&sigma)
                .and_then(|ps| ps.mul(&s))
                .expect("sandwich shapes agree")
        })
        .collect()
}

/// Evaluates a braid word as an exact matrix product of generators and
/// their inverses in the chosen representation.
pub fn braid_eval(w: &BraidWord, kind: BurauKind) -> MatK {
    let gens = match kind {
        BurauKind::Unreduced => burau_unreduced(w.strands),
        BurauKind::Reduced => burau_reduced(w.strands),
    };
    let mut invs: Vec<Option<MatK>> = vec![None; gens.len()];
    let mut acc = MatK::identity(gens[0].nrows());
    for &(i, sign) in &w.letters {
        let factor = if sign > 0 {
            &gens[i - 1]
        } else {
            invs[i - 1].get_or_insert_with(|| {
                gens[i - 1].inverse().expect("braid generators have determinant -t")
            })
        };
        acc = acc.mul(factor).expect("square factors of equal size");
    }
    acc
}

/// The two-parameter generator family: the diagonal translation
/// f = diag(1, -t⁻¹, -t) and the conjugator
///
/// ```text
/// s(α, β) = (1-t)⁻² · [ -(1+t)   1+t²    -t(1+t²) ]
///                     [    1      -t      t+β·t²  ]
///                     [    1    -1+α·t      t²    ]
/// ```
///
/// The group pair under study is (f, s·f·s⁻¹). The point (α, β) = (0, 0)
/// is the normalized Burau case: f shares its characteristic polynomial
/// with the reduced image of s_3 s_1⁻¹ exactly, and varying (α, β)
/// deforms the conjugator inside GL_3(Q(t)).
pub fn family_pair(alpha: &BigRational, beta: &BigRational) -> (MatK, MatK) {
    let f = MatK::diagonal(vec![
        RatFn::one(),
        -&RatFn::t_pow(-1),
        -&RatFn::t(),
    ]);
    let den = Poly::from_ints(&[1, -2, 1]); // (1-t)²
    let entry = |num: Poly| RatFn::new(num, den.clone()).expect("nonzero denominator");
    let zero = BigRational::from_integer(0.into());
    let one = BigRational::from_integer(1.into());
    let s = MatK::from_rows(vec![
        vec![
            entry(Poly::from_ints(&[-1, -1])),
            entry(Poly::from_ints(&[1, 0, 1])),
            entry(Poly::from_ints(&[0, -1, 0, -1])),
        ],
        vec![
            entry(Poly::one()),
            entry(Poly::from_ints(&[0, -1])),
            entry(Poly::from_coeffs(vec![zero.clone(), one.clone(), beta.clone()])),
        ],
        vec![
            entry(Poly::one()),
            entry(Poly::from_coeffs(vec![-&one, alpha.clone()])),
            entry(Poly::from_ints(&[0, 0, 1])),
        ],
    ])
    .expect("fixed 3x3 shape");
    (f, s)
}

//! Brute-force freeness oracle for a pair of invertible matrices.
//!
//! Enumerates freely reduced words in two generators, shortest first and
//! lexicographically (`a < A < b < B`) within each length, hunting for a
//! projectively trivial image: a word whose matrix product is scalar. A hit
//! refutes freeness in PGL; an empty scan up to `max_len` is one-sided
//! evidence that complements an exact certificate.
//!
//! The default strategy screens every word twice — exact rational arithmetic
//! at the first pole-free point of a fixed retry sequence, then modular
//! arithmetic at the next usable point mod a fixed prime — and confirms the
//! rare survivors over the function field. Both screens are sound for
//! refutation: a trivial word stays trivial under every specialization, so a
//! word rejected by either screen is certainly nontrivial, and the exact
//! confirmation removes the false candidates the screens let through.

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::building::{relative_position, VertexClass};
use crate::error::{Error, Result};
use crate::matk::MatK;
use crate::poly::Poly;
use crate::qmat::QMat;
use crate::ratfn::RatFn;

/// One of the four generator letters, in the fixed order `a < A < b < B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    /// `a`: the first generator.
    G1,
    /// `A`: inverse of the first generator.
    G1Inv,
    /// `b`: the second generator.
    G2,
    /// `B`: inverse of the second generator.
    G2Inv,
}

impl Letter {
    /// All letters in enumeration order.
    pub const ALL: [Letter; 4] = [Letter::G1, Letter::G1Inv, Letter::G2, Letter::G2Inv];

    pub fn inverse(self) -> Letter {
        match self {
            Letter::G1 => Letter::G1Inv,
            Letter::G1Inv => Letter::G1,
            Letter::G2 => Letter::G2Inv,
            Letter::G2Inv => Letter::G2,
        }
    }

    /// Position in the fixed order; also the index into generator tables.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn symbol(self) -> char {
        match self {
            Letter::G1 => 'a',
            Letter::G1Inv => 'A',
            Letter::G2 => 'b',
            Letter::G2Inv => 'B',
        }
    }

    pub fn from_symbol(c: char) -> Option<Letter> {
        match c {
            'a' => Some(Letter::G1),
            'A' => Some(Letter::G1Inv),
            'b' => Some(Letter::G2),
            'B' => Some(Letter::G2Inv),
            _ => None,
        }
    }
}

/// A freely reduced word in the two generators. The empty word is the
/// identity and renders as `1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct F2Word {
    letters: Vec<Letter>,
}

impl F2Word {
    pub fn empty() -> F2Word {
        F2Word {
            letters: Vec::new(),
        }
    }

    /// Wraps a letter sequence that must already be freely reduced.
    pub fn new(letters: Vec<Letter>) -> Result<F2Word> {
        for w in letters.windows(2) {
            if w[1] == w[0].inverse() {
                return Err(Error::Invalid(format!(
                    "word is not freely reduced: contains {}{}",
                    w[0].symbol(),
                    w[1].symbol()
                )));
            }
        }
        Ok(F2Word { letters })
    }

    /// Freely reduces an arbitrary letter sequence by cancelling adjacent
    /// inverse pairs until none remain.
    pub fn reduce(letters: &[Letter]) -> F2Word {
        let mut stack: Vec<Letter> = Vec::with_capacity(letters.len());
        for &l in letters {
            if stack.last().copied() == Some(l.inverse()) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        F2Word { letters: stack }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Reverse the letters and invert each; reduced words stay reduced.
    pub fn inverse(&self) -> F2Word {
        F2Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Concatenation followed by free reduction.
    pub fn concat(&self, other: &F2Word) -> F2Word {
        let mut all = self.letters.clone();
        all.extend_from_slice(&other.letters);
        F2Word::reduce(&all)
    }
}

impl fmt::Display for F2Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for &l in &self.letters {
            f.write_char(l.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for F2Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<F2Word> {
        let t = s.trim();
        if t.is_empty() || t == "1" {
            return Ok(F2Word::empty());
        }
        let mut letters = Vec::with_capacity(t.len());
        for c in t.chars() {
            let l = Letter::from_symbol(c).ok_or_else(|| {
                Error::Invalid(format!("unknown letter '{c}' in word (expected a, A, b, B)"))
            })?;
            letters.push(l);
        }
        F2Word::new(letters)
    }
}

impl serde::Serialize for F2Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// All freely reduced words of length 1..=`max_len`, shortest first and
/// lexicographic within each length. Lengths count 4·3^(len−1) words.
pub fn reduced_words(max_len: usize) -> Vec<F2Word> {
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 1..=max_len {
        let mut next = Vec::with_capacity(frontier.len() * 3);
        for stem in &frontier {
            let last = stem.last().copied();
            for l in Letter::ALL {
                if last == Some(l.inverse()) {
                    continue;
                }
                let mut w = stem.clone();
                w.push(l);
                next.push(w);
            }
        }
        out.extend(next.iter().cloned().map(|letters| F2Word { letters }));
        frontier = next;
    }
    out
}

/// Number of freely reduced words of length 1..=`max_len`: 2·(3^max_len − 1).
pub fn reduced_word_count(max_len: usize) -> u64 {
    (1..=max_len).map(|l| 4 * 3u64.pow(l as u32 - 1)).sum()
}

/// A square matrix over Z/p for the modular screen; entries are reduced
/// representatives in `[0, p)` and `p` is prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModMat {
    n: usize,
    p: u64,
    data: Vec<u64>,
}

impl ModMat {
    pub fn identity(n: usize, p: u64) -> ModMat {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1 % p;
        }
        ModMat { n, p, data }
    }

    /// Entrywise evaluation of a function-field matrix at `t = point` mod
    /// `p`. Errors when a denominator vanishes mod `p`, which prompts the
    /// caller to retry at the next point of the sequence.
    pub fn from_matk(m: &MatK, point: u64, p: u64) -> Result<ModMat> {
        if p < 2 {
            return Err(Error::Modular(format!("modulus {p} is not prime")));
        }
        if m.nrows() != m.ncols() {
            return Err(Error::Dimension("modular screen needs a square matrix".into()));
        }
        let n = m.nrows();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(ratfn_mod(&m[(i, j)], point % p, p)?);
            }
        }
        Ok(ModMat { n, p, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.n + j]
    }

    pub fn mul(&self, rhs: &ModMat) -> ModMat {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        assert_eq!(self.p, rhs.p, "modulus mismatch");
        let n = self.n;
        let mut data = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let cell = &mut data[i * n + j];
                    *cell = (*cell + mul_mod(a, rhs.data[k * n + j], self.p)) % self.p;
                }
            }
        }
        ModMat { n, p: self.p, data }
    }

    /// True when every entry is 0 except a shared nonzero diagonal value:
    /// the projective identity test mod p.
    pub fn is_scalar(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let d = self.data[0];
        if d == 0 {
            return false;
        }
        for i in 0..self.n {
            for j in 0..self.n {
                let e = self.data[i * self.n + j];
                if (i == j && e != d) || (i != j && e != 0) {
                    return false;
                }
            }
        }
        true
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse mod a prime via Fermat; the caller guarantees `a != 0 mod p`.
fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

fn int_mod(x: &BigInt, p: u64) -> u64 {
    use num_integer::Integer;
    x.mod_floor(&BigInt::from(p))
        .to_u64()
        .expect("residue fits in u64")
}

fn rational_mod(c: &BigRational, p: u64) -> Result<u64> {
    let d = int_mod(c.denom(), p);
    if d == 0 {
        return Err(Error::Modular(format!(
            "denominator of {c} vanishes mod {p}"
        )));
    }
    Ok(mul_mod(int_mod(c.numer(), p), inv_mod(d, p), p))
}

fn poly_eval_mod(q: &Poly, x: u64, p: u64) -> Result<u64> {
    let mut acc = 0u64;
    for c in q.coeffs().iter().rev() {
        acc = (mul_mod(acc, x, p) + rational_mod(c, p)?) % p;
    }
    Ok(acc)
}

fn ratfn_mod(f: &RatFn, x: u64, p: u64) -> Result<u64> {
    let nv = poly_eval_mod(f.num(), x, p)?;
    let dv = poly_eval_mod(f.den(), x, p)?;
    if dv == 0 {
        return Err(Error::Modular(format!(
            "denominator vanishes at t = {x} mod {p}"
        )));
    }
    Ok(mul_mod(nv, inv_mod(dv, p), p))
}

/// How a word image is computed: exactly over the function field, or at a
/// rational point (optionally reduced mod a prime).
#[derive(Debug, Clone, PartialEq)]
pub enum EvalMode {
    Exact,
    Specialized {
        point: BigRational,
        modulus: Option<u64>,
    },
}

/// A word image in whichever arithmetic the evaluation mode selected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordImage {
    Exact(MatK),
    Rational(QMat),
    Modular(ModMat),
}

/// The four letter images `[g1, g1⁻¹, g2, g2⁻¹]`, indexed by `Letter::index`.
fn generator_images(pair: &(MatK, MatK)) -> Result<[MatK; 4]> {
    let (g1, g2) = pair;
    if !g1.is_square() || !g2.is_square() || g1.nrows() != g2.nrows() {
        return Err(Error::Dimension(
            "generator pair must be square matrices of equal size".into(),
        ));
    }
    Ok([g1.clone(), g1.inverse()?, g2.clone(), g2.inverse()?])
}

fn eval_letters(letters: &[Letter], gens: &[MatK; 4]) -> MatK {
    let mut acc = MatK::identity(gens[0].nrows());
    for &l in letters {
        acc = acc.mul(&gens[l.index()]).expect("generators share dimensions");
    }
    acc
}

/// Evaluates a reduced word at the generator pair. Returns the image and its
/// projective-triviality flag: whether the image is a nonzero scalar matrix.
/// Specialized evaluation errors on a pole or a modular failure, prompting a
/// different specialization point.
pub fn eval_word(word: &F2Word, pair: &(MatK, MatK), mode: &EvalMode) -> Result<(WordImage, bool)> {
    let gens = generator_images(pair)?;
    let n = gens[0].nrows();
    match mode {
        EvalMode::Exact => {
            let img = eval_letters(word.letters(), &gens);
            let trivial = img.is_scalar();
            Ok((WordImage::Exact(img), trivial))
        }
        EvalMode::Specialized {
            point,
            modulus: None,
        } => {
            let spec: Vec<QMat> = gens
                .iter()
                .map(|g| g.substitute(point))
                .collect::<Result<_>>()?;
            let mut img = QMat::identity(n);
            for &l in word.letters() {
                img = img.mul(&spec[l.index()]).expect("generators share dimensions");
            }
            let trivial = img.is_scalar();
            Ok((WordImage::Rational(img), trivial))
        }
        EvalMode::Specialized {
            point,
            modulus: Some(p),
        } => {
            let x = rational_mod(point, *p)?;
            let spec: Vec<ModMat> = gens
                .iter()
                .map(|g| ModMat::from_matk(g, x, *p))
                .collect::<Result<_>>()?;
            let mut img = ModMat::identity(n, *p);
            for &l in word.letters() {
                img = img.mul(&spec[l.index()]);
            }
            let trivial = img.is_scalar();
            Ok((WordImage::Modular(img), trivial))
        }
    }
}

/// Screening strategy: specialize-and-confirm (the default; fast screens
/// with exact confirmation of candidates) or exact evaluation of every word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanStrategy {
    SpecializeThenConfirm,
    Exact,
}

/// Result of a freeness scan. `relation` is the earliest projectively
/// trivial word in (length, lex) order, or None when the scan comes up
/// empty; the screening points are recorded for reproducibility.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ScanOutcome {
    pub relation: Option<F2Word>,
    pub words_checked: u64,
    pub max_len: usize,
    pub strategy: ScanStrategy,
    pub rational_point: Option<String>,
    pub modular_point: Option<u64>,
    pub modulus: Option<u64>,
}

/// Deterministic retry sequence of specialization points.
const SCREEN_POINTS: [u64; 12] = [7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

/// Prime modulus of the modular screen.
const SCREEN_MODULUS: u64 = 1_000_003;

/// First pole-free point of the retry sequence, with the four generator
/// images specialized there. Both screens pick their point once, up front,
/// so every word of the scan is tested at the same places.
fn rational_screen(gens: &[MatK; 4]) -> Result<(usize, Vec<QMat>)> {
    for (i, &c) in SCREEN_POINTS.iter().enumerate() {
        let x = BigRational::from_integer(BigInt::from(c));
        let spec: Result<Vec<QMat>> = gens.iter().map(|g| g.substitute(&x)).collect();
        if let Ok(qs) = spec {
            return Ok((i, qs));
        }
    }
    Err(Error::Invalid(
        "every point of the screening sequence hits a pole".into(),
    ))
}

/// First point strictly after the rational one where all generators reduce
/// mod the screen modulus. A second screen at the same point would add
/// nothing, so the sequence continues instead.
fn modular_screen(gens: &[MatK; 4], start: usize) -> Result<(u64, Vec<ModMat>)> {
    for &c in SCREEN_POINTS.iter().skip(start) {
        let spec: Result<Vec<ModMat>> = gens
            .iter()
            .map(|g| ModMat::from_matk(g, c, SCREEN_MODULUS))
            .collect();
        if let Ok(ms) = spec {
            return Ok((c, ms));
        }
    }
    Err(Error::Modular(
        "every point of the screening sequence fails to reduce".into(),
    ))
}

struct ScanCtx<'a> {
    counter: &'a AtomicU64,
    total: u64,
    progress: Option<&'a (dyn Fn(u64, u64, usize) + Sync)>,
}

impl ScanCtx<'_> {
    fn tick(&self, len: usize) {
        let done = self.counter.fetch_add(1, Ordering::Relaxed) + 1;
        if done % 4096 == 0 {
            if let Some(cb) = self.progress {
                cb(done, self.total, len);
            }
        }
    }
}

/// Depth-first extension of `path` to words of exactly `target` length, in
/// lexicographic order; returns the first confirmed trivial word. Counting
/// happens at the leaves, and a hit prunes the rest of the subtree, so the
/// final count is deterministic.
fn dfs<S>(
    ctx: &ScanCtx<'_>,
    path: &mut Vec<Letter>,
    state: &S,
    target: usize,
    step: &(impl Fn(&S, Letter) -> S + Sync),
    candidate: &(impl Fn(&S) -> bool + Sync),
    confirm: &(impl Fn(&F2Word) -> Result<bool> + Sync),
) -> Result<Option<F2Word>> {
    if path.len() == target {
        ctx.tick(target);
        if candidate(state) {
            let w = F2Word {
                letters: path.clone(),
            };
            if confirm(&w)? {
                return Ok(Some(w));
            }
        }
        return Ok(None);
    }
    let last = path.last().copied();
    for l in Letter::ALL {
        if last == Some(l.inverse()) {
            continue;
        }
        let child = step(state, l);
        path.push(l);
        let hit = dfs(ctx, path, &child, target, step, candidate, confirm)?;
        path.pop();
        if hit.is_some() {
            return Ok(hit);
        }
    }
    Ok(None)
}

/// The twelve valid two-letter prefixes, in lexicographic order; each is one
/// parallel shard of a fixed-length scan.
fn shard_prefixes() -> Vec<(Letter, Letter)> {
    let mut out = Vec::with_capacity(12);
    for l1 in Letter::ALL {
        for l2 in Letter::ALL {
            if l2 == l1.inverse() {
                continue;
            }
            out.push((l1, l2));
        }
    }
    out
}

/// Scans lengths in increasing order; within a length, shards run in
/// parallel and the earliest hit is taken in shard (= lexicographic) order,
/// so the reported relation is the global (length, lex) minimum.
fn scan_all<S>(
    init: &S,
    max_len: usize,
    ctx: &ScanCtx<'_>,
    step: &(impl Fn(&S, Letter) -> S + Sync),
    candidate: &(impl Fn(&S) -> bool + Sync),
    confirm: &(impl Fn(&F2Word) -> Result<bool> + Sync),
) -> Result<Option<F2Word>>
where
    S: Clone + Send + Sync,
{
    for len in 1..=max_len {
        if let Some(cb) = ctx.progress {
            cb(ctx.counter.load(Ordering::Relaxed), ctx.total, len);
        }
        let hit = if len == 1 {
            dfs(ctx, &mut Vec::new(), init, 1, step, candidate, confirm)?
        } else {
            let per_shard: Result<Vec<Option<F2Word>>> = shard_prefixes()
                .par_iter()
                .map(|&(l1, l2)| {
                    let s1 = step(init, l1);
                    let s2 = step(&s1, l2);
                    let mut path = vec![l1, l2];
                    dfs(ctx, &mut path, &s2, len, step, candidate, confirm)
                })
                .collect();
            per_shard?.into_iter().flatten().next()
        };
        if hit.is_some() {
            return Ok(hit);
        }
    }
    Ok(None)
}

/// Hunts for the earliest projectively trivial reduced word up to `max_len`.
/// The optional callback receives `(words done, total, current length)`
/// every few thousand words and at each length change; word counts are
/// deterministic for a given input. Errors on singular generators or when
/// no screening point works.
pub fn freeness_scan(
    pair: &(MatK, MatK),
    max_len: usize,
    strategy: ScanStrategy,
    progress: Option<&(dyn Fn(u64, u64, usize) + Sync)>,
) -> Result<ScanOutcome> {
    let gens = generator_images(pair)?;
    let n = gens[0].nrows();
    let counter = AtomicU64::new(0);
    let ctx = ScanCtx {
        counter: &counter,
        total: reduced_word_count(max_len),
        progress,
    };

    let mut rational_point = None;
    let mut modular_point = None;
    let mut modulus = None;

    let relation = match strategy {
        ScanStrategy::Exact => {
            let step = |s: &MatK, l: Letter| {
                s.mul(&gens[l.index()]).expect("generators share dimensions")
            };
            let candidate = |s: &MatK| s.is_scalar();
            let confirm = |_: &F2Word| -> Result<bool> { Ok(true) };
            scan_all(&MatK::identity(n), max_len, &ctx, &step, &candidate, &confirm)?
        }
        ScanStrategy::SpecializeThenConfirm => {
            let (idx, qgens) = rational_screen(&gens)?;
            let (mpoint, mgens) = modular_screen(&gens, idx + 1)?;
            rational_point = Some(SCREEN_POINTS[idx].to_string());
            modular_point = Some(mpoint);
            modulus = Some(SCREEN_MODULUS);
            let init = (QMat::identity(n), ModMat::identity(n, SCREEN_MODULUS));
            let step = |s: &(QMat, ModMat), l: Letter| {
                (
                    s.0.mul(&qgens[l.index()]).expect("generators share dimensions"),
                    s.1.mul(&mgens[l.index()]),
                )
            };
            let candidate = |s: &(QMat, ModMat)| s.0.is_scalar() && s.1.is_scalar();
            let confirm =
                |w: &F2Word| -> Result<bool> { Ok(eval_letters(w.letters(), &gens).is_scalar()) };
            scan_all(&init, max_len, &ctx, &step, &candidate, &confirm)?
        }
    };

    Ok(ScanOutcome {
        relation,
        words_checked: counter.load(Ordering::SeqCst),
        max_len,
        strategy,
        rational_point,
        modular_point,
        modulus,
    })
}

/// Building displacement of every word up to `max_len` at a basepoint: rows
/// `(word, distance(x, w·x))` in enumeration order, the empty word first.
pub fn displacement_profile(
    pair: &(MatK, MatK),
    basepoint: &VertexClass,
    max_len: usize,
) -> Result<Vec<(F2Word, i64)>> {
    let gens = generator_images(pair)?;
    let mut rows = Vec::new();
    for word in std::iter::once(F2Word::empty()).chain(reduced_words(max_len)) {
        let img = eval_letters(word.letters(), &gens);
        let moved = basepoint.translate(&img)?;
        let rel = relative_position(basepoint, &moved)?;
        rows.push((word, rel.distance()));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::building::ApartmentVertex;
    use crate::burau::family_pair;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn w(s: &str) -> F2Word {
        s.parse().unwrap()
    }

    /// The flagship generator pair (f, s f s⁻¹) at the given parameters.
    fn family_generators(alpha: i64, beta: i64) -> (MatK, MatK) {
        let (f, s) = family_pair(&q(alpha), &q(beta));
        let k = s
            .mul(&f)
            .unwrap()
            .mul(&s.inverse().unwrap())
            .unwrap();
        (f, k)
    }

    /// A pair of commuting diagonal matrices whose only short relations are
    /// commutators: exponent vectors (0,1,3) and (0,2,5) are independent.
    fn commuting_pair() -> (MatK, MatK) {
        (MatK::pi_diagonal(&[0, -1, -3]), MatK::pi_diagonal(&[0, -2, -5]))
    }

    #[test]
    fn letter_order_inverse_and_symbols() {
        let symbols: Vec<char> = Letter::ALL.iter().map(|l| l.symbol()).collect();
        assert_eq!(symbols, vec!['a', 'A', 'b', 'B']);
        for (i, l) in Letter::ALL.into_iter().enumerate() {
            assert_eq!(l.index(), i);
            assert_eq!(l.inverse().inverse(), l);
            assert_eq!(Letter::from_symbol(l.symbol()), Some(l));
        }
        assert!(Letter::G1 < Letter::G1Inv && Letter::G1Inv < Letter::G2 && Letter::G2 < Letter::G2Inv);
        assert_eq!(Letter::from_symbol('x'), None);
    }

    #[test]
    fn word_reduction_parse_and_display() {
        assert!(F2Word::reduce(&[Letter::G1, Letter::G1Inv]).is_empty());
        assert_eq!(
            F2Word::reduce(&[Letter::G1, Letter::G2, Letter::G2Inv, Letter::G1]),
            w("aa")
        );
        assert!(F2Word::new(vec![Letter::G1, Letter::G1Inv]).is_err());
        assert!("aA".parse::<F2Word>().is_err());
        assert!("xz".parse::<F2Word>().is_err());
        assert_eq!(w("1"), F2Word::empty());
        assert_eq!(F2Word::empty().to_string(), "1");
        for s in ["a", "aB", "abAB", "BAba"] {
            assert_eq!(w(s).to_string(), s);
        }
        assert_eq!(w("abA").inverse(), w("aBA"));
        assert_eq!(w("ab").concat(&w("BA")), F2Word::empty());
        assert_eq!(w("ab").concat(&w("Ba")), w("aa"));
    }

    #[test]
    fn enumeration_counts_and_order() {
        let words = reduced_words(3);
        assert_eq!(words.len(), 4 + 12 + 36);
        assert_eq!(words.len() as u64, reduced_word_count(3));
        assert_eq!(words[0], w("a"));
        assert_eq!(words[3], w("B"));
        assert_eq!(words[4], w("aa"));
        assert_eq!(words[6], w("aB"));
        // Within each length the order is strictly lexicographic.
        for len in 1..=3 {
            let block: Vec<&F2Word> = words.iter().filter(|x| x.len() == len).collect();
            assert_eq!(block.len(), 4 * 3usize.pow(len as u32 - 1));
            for pair in block.windows(2) {
                let key = |x: &F2Word| x.letters().iter().map(|l| l.index()).collect::<Vec<_>>();
                assert!(key(pair[0]) < key(pair[1]));
            }
        }
        // No word contains an adjacent inverse pair.
        for word in &words {
            assert!(F2Word::new(word.letters().to_vec()).is_ok());
        }
        let long = reduced_words(10);
        assert_eq!(long.len() as u64, reduced_word_count(10));
        assert_eq!(reduced_word_count(10), 118_096);
        assert_eq!(reduced_word_count(8), 13_120);
    }

    #[test]
    fn mod_mat_arithmetic() {
        let p = 101;
        let (f, _) = family_pair(&q(0), &q(0));
        let m = ModMat::from_matk(&f, 7, p).unwrap();
        // f(7) = diag(1, -1/7, -7): -inv(7) = -29 = 72, -7 = 94 mod 101.
        assert_eq!(m.entry(0, 0), 1);
        assert_eq!(m.entry(1, 1), 72);
        assert_eq!(m.entry(2, 2), 94);
        assert!(!m.is_scalar());
        let minv = ModMat::from_matk(&f.inverse().unwrap(), 7, p).unwrap();
        assert_eq!(m.mul(&minv), ModMat::identity(3, p));
        assert!(ModMat::identity(3, p).is_scalar());
        // Denominator vanishing mod p is reported, not mis-evaluated.
        assert!(ModMat::from_matk(&f, 0, p).is_err());
    }

    #[test]
    fn eval_word_exact_and_triviality() {
        let pair = family_generators(0, 0);
        let (img, trivial) = eval_word(&w("aa"), &pair, &EvalMode::Exact).unwrap();
        assert_eq!(img, WordImage::Exact(pair.0.mul(&pair.0).unwrap()));
        assert!(!trivial);
        let (_, trivial) = eval_word(&F2Word::empty(), &pair, &EvalMode::Exact).unwrap();
        assert!(trivial);
        let (_, trivial) = eval_word(&w("aB"), &pair, &EvalMode::Exact).unwrap();
        assert!(!trivial);
    }

    #[test]
    fn eval_word_specialized_matches_exact() {
        let pair = family_generators(2, 3);
        let x = q(7);
        let word = w("abA");
        let (exact, _) = eval_word(&word, &pair, &EvalMode::Exact).unwrap();
        let (rational, _) = eval_word(
            &word,
            &pair,
            &EvalMode::Specialized {
                point: x.clone(),
                modulus: None,
            },
        )
        .unwrap();
        match (exact, rational) {
            (WordImage::Exact(m), WordImage::Rational(s)) => {
                assert_eq!(m.substitute(&x).unwrap(), s);
            }
            _ => panic!("unexpected image kinds"),
        }
        // t = 0 is a pole of the diagonal generator.
        let err = eval_word(
            &word,
            &pair,
            &EvalMode::Specialized {
                point: q(0),
                modulus: None,
            },
        );
        assert!(matches!(err, Err(Error::Pole)));
        // A point whose denominator hits the modulus is a modular failure.
        let bad = BigRational::new(1.into(), BigInt::from(SCREEN_MODULUS));
        let err = eval_word(
            &word,
            &pair,
            &EvalMode::Specialized {
                point: bad,
                modulus: Some(SCREEN_MODULUS),
            },
        );
        assert!(matches!(err, Err(Error::Modular(_))));
    }

    #[test]
    fn screens_are_sound_on_trivial_words() {
        // Exactly trivial words stay trivial under both screens.
        let (f, _) = family_pair(&q(0), &q(0));
        let cases = [
            ((f.clone(), f.clone()), vec!["aB", "abAB", "aabABA"]),
            (commuting_pair(), vec!["abAB", "aabABA", "aabbAABB"]),
        ];
        for (pair, words) in cases {
            for s in words {
                let word = w(s);
                let (_, exact) = eval_word(&word, &pair, &EvalMode::Exact).unwrap();
                assert!(exact, "{s} should be trivial");
                let (_, rational) = eval_word(
                    &word,
                    &pair,
                    &EvalMode::Specialized {
                        point: q(7),
                        modulus: None,
                    },
                )
                .unwrap();
                let (_, modular) = eval_word(
                    &word,
                    &pair,
                    &EvalMode::Specialized {
                        point: q(11),
                        modulus: Some(SCREEN_MODULUS),
                    },
                )
                .unwrap();
                assert!(rational && modular, "screens must keep {s} trivial");
            }
        }
    }

    #[test]
    fn scan_finds_planted_relation_at_length_two() {
        let (f, _) = family_pair(&q(0), &q(0));
        let pair = (f.clone(), f);
        let got = freeness_scan(&pair, 3, ScanStrategy::SpecializeThenConfirm, None).unwrap();
        assert_eq!(got.relation, Some(w("aB")));
        // 4 length-1 words, then one word in each of the 12 length-2 shards.
        assert_eq!(got.words_checked, 16);
        assert_eq!(got.rational_point.as_deref(), Some("7"));
        assert_eq!(got.modular_point, Some(11));
        assert_eq!(got.modulus, Some(SCREEN_MODULUS));

        let exact = freeness_scan(&pair, 3, ScanStrategy::Exact, None).unwrap();
        assert_eq!(exact.relation, Some(w("aB")));
        assert_eq!(exact.words_checked, 16);
        assert_eq!(exact.rational_point, None);
        assert_eq!(exact.modulus, None);
    }

    #[test]
    fn scan_finds_commutator_at_length_four() {
        let got = freeness_scan(&commuting_pair(), 6, ScanStrategy::SpecializeThenConfirm, None)
            .unwrap();
        assert_eq!(got.relation, Some(w("abAB")));
        // Lengths 1..3 run in full (52 words). At length 4 each shard prunes
        // at its own earliest commutator: the four shards without one check
        // all 9 of their words, the rest stop after 6, 5, 3, 2, 8, 7, 5 and
        // 4 — a total of 76 — and the merge keeps the earliest hit, abAB.
        assert_eq!(got.words_checked, 52 + 76);
    }

    #[test]
    fn scan_free_pair_comes_up_empty() {
        let got = freeness_scan(
            &family_generators(2, 3),
            3,
            ScanStrategy::SpecializeThenConfirm,
            None,
        )
        .unwrap();
        assert_eq!(got.relation, None);
        assert_eq!(got.words_checked, reduced_word_count(3));
    }

    #[test]
    fn scan_reports_progress() {
        use std::sync::Mutex;
        let seen = Mutex::new(Vec::new());
        let cb = |done: u64, total: u64, len: usize| {
            seen.lock().unwrap().push((done, total, len));
        };
        let got = freeness_scan(
            &family_generators(2, 3),
            2,
            ScanStrategy::SpecializeThenConfirm,
            Some(&cb),
        )
        .unwrap();
        assert_eq!(got.relation, None);
        let seen = seen.into_inner().unwrap();
        // One report per length change, each carrying the full total.
        assert_eq!(seen.len(), 2);
        assert_eq!(seen[0], (0, 16, 1));
        assert_eq!(seen[1], (4, 16, 2));
    }

    #[test]
    fn displacement_profile_matches_translation_lengths() {
        let pair = family_generators(0, 0);
        let base = VertexClass::from_apartment(&ApartmentVertex::new(vec![-1, 0, 0]));
        let rows = displacement_profile(&pair, &base, 2).unwrap();
        assert_eq!(rows.len(), 1 + 4 + 12);
        assert_eq!(rows[0], (F2Word::empty(), 0));
        // Both generators translate along axes through the basepoint.
        for (word, dist) in &rows[1..5] {
            assert_eq!(*dist, 2, "letter {word}");
        }
        assert_eq!(rows[5], (w("aa"), 4));
        // Distance is symmetric, so a word and its inverse displace equally.
        for (word, dist) in &rows {
            let inv = word.inverse();
            let (_, inv_dist) = rows.iter().find(|(x, _)| *x == inv).unwrap();
            assert_eq!(dist, inv_dist, "word {word}");
        }
    }
}

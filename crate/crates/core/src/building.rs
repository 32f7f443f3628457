//! The Bruhat-Tits building of GL_n over Q(t) at the valuation at
//! infinity: vertices are homothety classes of O-lattices.
//!
//! The standard apartment consists of classes [L_a] with L_a spanned by
//! π^{a_i} e_i. Two flavors of vertex coexist: [`ApartmentVertex`] stores
//! exponents directly (canonical representative: minimum exponent 0),
//! while [`VertexClass`] carries an arbitrary lattice basis. Relative
//! position is read off a Smith normal form over the valuation ring, and
//! the central solver [`apartment_intersection`] finds every pair (a, b)
//! with diag(π^a)·s·diag(π^b) ∈ GL_n(O) — the apartment-coordinate
//! description of which standard-apartment images under s meet the
//! standard apartment, vertexwise: [s·L_b] = [L_{-a}].
//!
//! The solver reasons tropically; [`intersection_box_scan`] re-derives
//! the same answers by brute force and direct membership tests, and the
//! test suites hold the two against each other.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::extint::ExtInt;
use crate::matk::{MatK, ValMat};
use crate::ratfn::RatFn;

/// A standard-apartment vertex [L_a], stored with min exponent 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ApartmentVertex {
    exps: Vec<i64>,
}

impl ApartmentVertex {
    /// Canonicalizes by subtracting the minimum exponent: homothetic
    /// lattices name the same vertex.
    pub fn new(exps: Vec<i64>) -> Self {
        let min = exps.iter().copied().min().unwrap_or(0);
        ApartmentVertex {
            exps: exps.iter().map(|&e| e - min).collect(),
        }
    }

    pub fn origin(n: usize) -> Self {
        ApartmentVertex { exps: vec![0; n] }
    }

    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    pub fn exps(&self) -> &[i64] {
        &self.exps
    }

    /// A lattice basis for the canonical representative: diag(π^{a_i}).
    pub fn lattice_basis(&self) -> MatK {
        MatK::pi_diagonal(&self.exps)
    }
}

impl fmt::Display for ApartmentVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exps.iter().map(i64::to_string).collect();
        write!(f, "L[{}]", parts.join(","))
    }
}

impl serde::Serialize for ApartmentVertex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A vertex given by an arbitrary lattice basis: the class of the
/// O-span of the basis columns.
#[derive(Debug, Clone)]
pub struct VertexClass {
    basis: MatK,
}

impl VertexClass {
    /// Errors unless the basis is square and invertible over Q(t).
    pub fn new(basis: MatK) -> Result<Self> {
        if !basis.is_square() {
            return Err(Error::Dimension("lattice basis must be square".into()));
        }
        if !basis.is_invertible() {
            return Err(Error::Singular);
        }
        Ok(VertexClass { basis })
    }

    pub fn from_apartment(v: &ApartmentVertex) -> Self {
        VertexClass {
            basis: v.lattice_basis(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &MatK {
        &self.basis
    }

    /// The image vertex g·[L]: basis columns are mapped through g.
    pub fn translate(&self, g: &MatK) -> Result<VertexClass> {
        VertexClass::new(g.mul(&self.basis)?)
    }
}

/// Equality of vertices: the transition matrix must be a scalar π-power
/// times a unit of the lattice ring, i.e. π^k·GL_n(O) for some k.
pub fn vertex_eq(x: &VertexClass, y: &VertexClass) -> Result<bool> {
    let m = x.basis.inverse()?.mul(&y.basis)?;
    let d = m.det()?.val_inf().unwrap_finite();
    let n = m.nrows() as i64;
    if d % n != 0 {
        return Ok(false);
    }
    m.scale(&RatFn::pi_pow(-d / n)).is_gl_o()
}

/// Translates an apartment vertex by an invertible diagonal matrix:
/// exponents shift by the diagonal valuations.
pub fn diag_translate(v: &ApartmentVertex, d: &MatK) -> Result<ApartmentVertex> {
    let n = v.dim();
    if d.nrows() != n || d.ncols() != n {
        return Err(Error::Dimension("diagonal translation shape mismatch".into()));
    }
    let mut exps = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..n {
            if i != j && !d[(i, j)].is_zero() {
                return Err(Error::Invalid("diag_translate needs a diagonal matrix".into()));
            }
        }
        let val = d[(i, i)]
            .val_inf()
            .finite()
            .ok_or(Error::Singular)?;
        exps.push(v.exps[i] + val);
    }
    Ok(ApartmentVertex::new(exps))
}

/// Smith normal form over the valuation ring: left·m·right = diag(π^e)
/// with left, right in GL_n(O) and exponents ascending.
#[derive(Debug, Clone)]
pub struct SnfDvr {
    pub exps: Vec<i64>,
    pub left: MatK,
    pub right: MatK,
}

/// Computes the Smith normal form of an invertible matrix over the
/// valuation ring by pivoting on a minimal-valuation entry of the
/// remaining block; the elimination quotients are then integral, so the
/// accumulated row and column operations stay in GL_n(O).
pub fn snf_dvr(m: &MatK) -> Result<SnfDvr> {
    if !m.is_square() {
        return Err(Error::Dimension("Smith form of non-square matrix".into()));
    }
    let n = m.nrows();
    let mut w = m.clone();
    let mut left = MatK::identity(n);
    let mut right = MatK::identity(n);
    let mut exps = Vec::with_capacity(n);
    for k in 0..n {
        // Minimal valuation in the trailing block, row-major tie break.
        let mut best: Option<(i64, usize, usize)> = None;
        for i in k..n {
            for j in k..n {
                if let Some(v) = w[(i, j)].val_inf().finite() {
                    if best.map_or(true, |(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, pi, pj)) = best else {
            return Err(Error::Singular);
        };
        swap_rows(&mut w, k, pi);
        swap_rows(&mut left, k, pi);
        swap_cols(&mut w, k, pj);
        swap_cols(&mut right, k, pj);
        let pivot = w[(k, k)].clone();
        for i in k + 1..n {
            if w[(i, k)].is_zero() {
                continue;
            }
            let f = w[(i, k)].div(&pivot)?;
            debug_assert!(f.val_inf() >= ExtInt::Finite(0));
            for j in 0..n {
                let v = &w[(i, j)] - &(&f * &w[(k, j)]);
                w[(i, j)] = v;
                let l = &left[(i, j)] - &(&f * &left[(k, j)]);
                left[(i, j)] = l;
            }
        }
        for j in k + 1..n {
            if w[(k, j)].is_zero() {
                continue;
            }
            let f = w[(k, j)].div(&pivot)?;
            debug_assert!(f.val_inf() >= ExtInt::Finite(0));
            for i in 0..n {
                let v = &w[(i, j)] - &(&f * &w[(i, k)]);
                w[(i, j)] = v;
                let r = &right[(i, j)] - &(&f * &right[(i, k)]);
                right[(i, j)] = r;
            }
        }
        // Normalize the pivot to exactly π^v by a unit row scaling.
        let unit = RatFn::pi_pow(v).div(&pivot)?;
        debug_assert_eq!(unit.val_inf(), ExtInt::Finite(0));
        for j in 0..n {
            let v = &w[(k, j)] * &unit;
            w[(k, j)] = v;
            let l = &left[(k, j)] * &unit;
            left[(k, j)] = l;
        }
        exps.push(v);
    }
    debug_assert!(exps.windows(2).all(|p| p[0] <= p[1]));
    Ok(SnfDvr { exps, left, right })
}

fn swap_rows(m: &mut MatK, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.ncols() {
        let x = m[(a, j)].clone();
        m[(a, j)] = m[(b, j)].clone();
        m[(b, j)] = x;
    }
}

fn swap_cols(m: &mut MatK, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.nrows() {
        let x = m[(i, a)].clone();
        m[(i, a)] = m[(i, b)].clone();
        m[(i, b)] = x;
    }
}

/// The relative position of an ordered vertex pair: Smith exponents of
/// the transition matrix, normalized to decreasing with minimum 0 so the
/// representative is homothety-independent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize)]
pub struct RelPos {
    exps: Vec<i64>,
}

impl RelPos {
    pub fn exps(&self) -> &[i64] {
        &self.exps
    }

    /// Graph distance in the building's 1-skeleton between the two
    /// vertices: the exponent spread.
    pub fn distance(&self) -> i64 {
        self.exps.first().copied().unwrap_or(0)
    }
}

impl fmt::Display for RelPos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exps.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Relative position of y as seen from x.
pub fn relative_position(x: &VertexClass, y: &VertexClass) -> Result<RelPos> {
    let m = x.basis().inverse()?.mul(y.basis())?;
    let snf = snf_dvr(&m)?;
    let mut exps = snf.exps;
    exps.reverse();
    let min = *exps.last().expect("nonempty Smith form");
    for e in exps.iter_mut() {
        *e -= min;
    }
    Ok(RelPos { exps })
}

/// Minimum of Σ_i V[i, σ(i)] over permutations σ, together with every
/// minimizing permutation in lexicographic order. Infinity when no
/// permutation avoids an infinite entry.
pub fn tropical_assignment(v: &ValMat) -> (ExtInt, Vec<Vec<usize>>) {
    let n = v.nrows();
    assert_eq!(n, v.ncols(), "tropical assignment needs a square matrix");
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = ExtInt::Infinity;
    let mut argmins: Vec<Vec<usize>> = Vec::new();
    loop {
        let mut sum = ExtInt::Finite(0);
        for (i, &j) in perm.iter().enumerate() {
            sum = sum + v[(i, j)];
        }
        if sum < best {
            best = sum;
            argmins.clear();
        }
        if sum == best && best.is_finite() {
            argmins.push(perm.clone());
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    (best, argmins)
}

/// Advances to the next lexicographic permutation; false after the last.
fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// Shape of an apartment-intersection solution set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IntersectionStatus {
    Empty,
    Unique,
    Finite,
    Unbounded,
}

/// Solution data for diag(π^a)·s·diag(π^b) ∈ GL_n(O).
///
/// Solutions are canonical representatives of shift classes — the family
/// (a + c·1, b - c·1) names one geometric configuration — normalized to
/// min(a) = 0 and sorted. `UNBOUNDED` and `EMPTY` carry no solutions.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Intersection {
    pub status: IntersectionStatus,
    pub solutions: Vec<(Vec<i64>, Vec<i64>)>,
    pub tropical_min: ExtInt,
    pub det_val: i64,
}

impl Intersection {
    /// The common vertex [s·L_b] = [L_{-a}] of a UNIQUE solution.
    pub fn unique_vertex(&self) -> Option<ApartmentVertex> {
        if self.status != IntersectionStatus::Unique {
            return None;
        }
        let (a, _) = &self.solutions[0];
        Some(ApartmentVertex::new(a.iter().map(|&e| -e).collect()))
    }
}

/// Finds all (a, b) with diag(π^a)·s·diag(π^b) ∈ GL_n(O).
///
/// Such pairs exist iff the tropical assignment minimum of the valuation
/// matrix equals val(det s) — one inequality direction is the ultrametric
/// bound, the other is assignment-LP duality. When they exist, every
/// minimizing permutation is tight at every solution, so the solution set
/// is cut out by one difference-constraint system; Floyd-Warshall bounds
/// then make the enumeration finite (or prove it unbounded).
pub fn apartment_intersection(s: &MatK) -> Result<Intersection> {
    if !s.is_square() {
        return Err(Error::Dimension("apartment intersection of non-square matrix".into()));
    }
    let n = s.nrows();
    let det = s.det()?;
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let det_val = det.val_inf().unwrap_finite();
    let v = s.val_matrix();
    let (tropical_min, argmins) = tropical_assignment(&v);
    debug_assert!(tropical_min <= ExtInt::Finite(det_val));
    if tropical_min != ExtInt::Finite(det_val) {
        return Ok(Intersection {
            status: IntersectionStatus::Empty,
            solutions: Vec::new(),
            tropical_min,
            det_val,
        });
    }
    // Tightness at one minimizing permutation, plus the inequality
    // constraints, becomes a difference system in b alone:
    //   b_{σ(i)} - b_j ≤ V[i,j] - V[i,σ(i)]   for finite V[i,j].
    let sigma = &argmins[0];
    const INF: i64 = i64::MAX / 4;
    let mut dist = vec![vec![INF; n]; n];
    for (d, row) in dist.iter_mut().enumerate() {
        row[d] = 0;
    }
    for i in 0..n {
        let base = v[(i, sigma[i])].unwrap_finite();
        for j in 0..n {
            if let Some(vij) = v[(i, j)].finite() {
                let w = vij - base;
                // Edge tail j, head σ(i): bounds b_{σ(i)} - b_j.
                if w < dist[j][sigma[i]] {
                    dist[j][sigma[i]] = w;
                }
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if dist[i][k] < INF && dist[k][j] < INF && dist[i][k] + dist[k][j] < dist[i][j] {
                    dist[i][j] = dist[i][k] + dist[k][j];
                }
            }
        }
    }
    // A negative diagonal would mean an infeasible tight system, which
    // duality rules out once the minima agree.
    debug_assert!((0..n).all(|i| dist[i][i] == 0));
    // Differences b_j - b_g are boxed iff every node reaches and is
    // reached by the gauge node; otherwise solutions escape to infinity.
    let g = n - 1;
    if (0..n).any(|j| dist[g][j] >= INF || dist[j][g] >= INF) {
        return Ok(Intersection {
            status: IntersectionStatus::Unbounded,
            solutions: Vec::new(),
            tropical_min,
            det_val,
        });
    }
    let lows: Vec<i64> = (0..n).map(|j| -dist[j][g]).collect();
    let highs: Vec<i64> = (0..n).map(|j| dist[g][j]).collect();
    let mut solutions = BTreeSet::new();
    let mut b = lows.clone();
    b[g] = 0;
    'scan: loop {
        if satisfies_all(&v, sigma, &b) {
            let a: Vec<i64> = (0..n)
                .map(|i| -b[sigma[i]] - v[(i, sigma[i])].unwrap_finite())
                .collect();
            solutions.insert(canonical_pair(a, b.clone()));
        }
        // Odometer over the box, gauge coordinate pinned at 0.
        for j in 0..n {
            if j == g {
                continue;
            }
            if b[j] < highs[j] {
                b[j] += 1;
                continue 'scan;
            }
            b[j] = lows[j];
        }
        break;
    }
    let solutions: Vec<(Vec<i64>, Vec<i64>)> = solutions.into_iter().collect();
    let status = match solutions.len() {
        0 => IntersectionStatus::Empty,
        1 => IntersectionStatus::Unique,
        _ => IntersectionStatus::Finite,
    };
    Ok(Intersection {
        status,
        solutions,
        tropical_min,
        det_val,
    })
}

/// All inequality constraints a_i + b_j + V[i,j] ≥ 0 at the point with
/// a determined from tightness along σ.
fn satisfies_all(v: &ValMat, sigma: &[usize], b: &[i64]) -> bool {
    let n = b.len();
    for i in 0..n {
        let a_i = -b[sigma[i]] - v[(i, sigma[i])].unwrap_finite();
        for j in 0..n {
            if let Some(vij) = v[(i, j)].finite() {
                if a_i + b[j] + vij < 0 {
                    return false;
                }
            }
        }
    }
    true
}

/// Canonical representative of the shift class: min(a) = 0.
fn canonical_pair(a: Vec<i64>, b: Vec<i64>) -> (Vec<i64>, Vec<i64>) {
    let c = a.iter().copied().min().unwrap_or(0);
    (
        a.iter().map(|&e| e - c).collect(),
        b.iter().map(|&e| e + c).collect(),
    )
}

/// Brute-force reference solver: scans (a, b) over an integer box with
/// b_n pinned to 0 and tests diag(π^a)·s·diag(π^b) ∈ GL_n(O) candidate by
/// candidate, with no assignment-problem reasoning. Scaling entry (i, j)
/// by the monomial π^(a_i+b_j) shifts its valuation by exactly a_i + b_j
/// and the determinant's by Σa + Σb, so membership is decided from the
/// valuation data; survivors are confirmed by direct matrix membership.
/// Returns canonical shift representatives, sorted.
///
/// Every shift class meets the b_n = 0 slice exactly once, so within the
/// box the scan sees exactly the classes whose pinned representative
/// fits; callers compare against [`apartment_intersection`] with a box
/// that the solver's solutions demonstrably fit inside.
pub fn intersection_box_scan(s: &MatK, bound: i64) -> Result<Vec<(Vec<i64>, Vec<i64>)>> {
    if !s.is_square() {
        return Err(Error::Dimension("box scan of non-square matrix".into()));
    }
    let n = s.nrows();
    let v = s.val_matrix();
    let det_val = s.det()?.val_inf();
    let mut found = BTreeSet::new();
    let mut vars = vec![-bound; 2 * n - 1]; // a_1..a_n, b_1..b_{n-1}
    'scan: loop {
        let a = &vars[..n];
        let mut b = vars[n..].to_vec();
        b.push(0);
        if monomial_scaling_in_gl_o(&v, det_val, a, &b) && candidate_in_gl_o(s, a, &b)? {
            found.insert(canonical_pair(a.to_vec(), b));
        }
        for v in vars.iter_mut() {
            if *v < bound {
                *v += 1;
                continue 'scan;
            }
            *v = -bound;
        }
        break;
    }
    Ok(found.into_iter().collect())
}

/// Exact GL_n(O) membership for diag(π^a)·s·diag(π^b) from valuation data
/// alone: every shifted entry valuation a_i + V[i,j] + b_j must be ≥ 0
/// and the shifted determinant valuation Σa + Σb + val(det s) must be 0.
fn monomial_scaling_in_gl_o(v: &ValMat, det_val: ExtInt, a: &[i64], b: &[i64]) -> bool {
    let n = a.len();
    for i in 0..n {
        for j in 0..n {
            if let Some(vij) = v[(i, j)].finite() {
                if a[i] + vij + b[j] < 0 {
                    return false;
                }
            }
        }
    }
    let shift: i64 = a.iter().sum::<i64>() + b.iter().sum::<i64>();
    det_val + ExtInt::Finite(shift) == ExtInt::Finite(0)
}

/// Builds diag(π^a)·s·diag(π^b) entry by entry, abandoning on the first
/// non-integral entry, then checks the determinant is a unit.
fn candidate_in_gl_o(s: &MatK, a: &[i64], b: &[i64]) -> Result<bool> {
    let n = s.nrows();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let e = &s[(i, j)] * &RatFn::pi_pow(a[i] + b[j]);
            if e.val_inf() < ExtInt::Finite(0) {
                return Ok(false);
            }
            row.push(e);
        }
        rows.push(row);
    }
    let m = MatK::from_rows(rows)?;
    Ok(m.det()?.val_inf() == ExtInt::Finite(0))
}

//! The freeness certification pipeline.
//!
//! A presentation is a pair (f, conj) standing for the generators
//! g_1 = f (diagonal, acting on the standard apartment by translation)
//! and g_2 = conj·f·conj⁻¹ (acting on the conj-image apartment the same
//! way). Certification walks the geometry end to end: both generators
//! must be generic (translation along no wall), the two invariant
//! apartments must meet in exactly one vertex x, and at x the leading
//! chambers of the attracting/repelling sectors of g_1 must be opposite
//! to those of g_2 as the chosen policy demands. When every step
//! succeeds the pair plays ping-pong on the building and generates a
//! free group of rank 2 — the verdict `CERTIFIED_FREE` is exact.
//!
//! The two policies differ in what they ask of the four chamber pairs:
//! `matched_ends` accepts either end-matching of the two axes (replacing
//! g_2 by g_2⁻¹ swaps its ends and is free-ness neutral), while
//! `all_pairs` demands all four pairs opposite.

use num_rational::BigRational;
use num_traits::One;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::building::{apartment_intersection, ApartmentVertex, IntersectionStatus};
use crate::burau::family_pair;
use crate::error::{Error, Result};
use crate::link::{opposite, sector_flags, transport_flags, Flag};
use crate::matk::MatK;

/// Which oppositeness pattern certifies a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    MatchedEnds,
    AllPairs,
}

impl Default for Policy {
    fn default() -> Self {
        Policy::MatchedEnds
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Policy::MatchedEnds => write!(f, "matched_ends"),
            Policy::AllPairs => write!(f, "all_pairs"),
        }
    }
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Policy> {
        match s {
            "matched_ends" | "matched-ends" => Ok(Policy::MatchedEnds),
            "all_pairs" | "all-pairs" => Ok(Policy::AllPairs),
            other => Err(Error::Invalid(format!("unknown policy \"{other}\""))),
        }
    }
}

/// Outcome of a certification run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CertStatus {
    CertifiedFree,
    NotCertified,
    Degenerate,
}

impl fmt::Display for CertStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertStatus::CertifiedFree => write!(f, "CERTIFIED_FREE"),
            CertStatus::NotCertified => write!(f, "NOT_CERTIFIED"),
            CertStatus::Degenerate => write!(f, "DEGENERATE"),
        }
    }
}

/// A generator pair in conjugated-diagonal form: (f, conj·f·conj⁻¹).
#[derive(Debug, Clone)]
pub struct Presentation {
    f_diag: MatK,
    conj: MatK,
}

impl Presentation {
    /// Validates shapes, diagonality and invertibility of f, and
    /// invertibility of the conjugator.
    pub fn new(f_diag: MatK, conj: MatK) -> Result<Self> {
        let n = f_diag.nrows();
        if !f_diag.is_square() || !conj.is_square() || conj.nrows() != n {
            return Err(Error::Dimension("presentation matrices must be square of equal size".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && !f_diag[(i, j)].is_zero() {
                    return Err(Error::Invalid("presentation needs a diagonal first generator".into()));
                }
            }
            if f_diag[(i, i)].is_zero() {
                return Err(Error::Singular);
            }
        }
        if !conj.is_invertible() {
            return Err(Error::Singular);
        }
        Ok(Presentation { f_diag, conj })
    }

    pub fn f_diag(&self) -> &MatK {
        &self.f_diag
    }

    pub fn conj(&self) -> &MatK {
        &self.conj
    }

    pub fn dim(&self) -> usize {
        self.f_diag.nrows()
    }

    /// The concrete generator pair (g_1, g_2) = (f, conj·f·conj⁻¹).
    pub fn generators(&self) -> (MatK, MatK) {
        let inv = self.conj.inverse().expect("validated invertible");
        let g2 = self
            .conj
            .mul(&self.f_diag)
            .and_then(|m| m.mul(&inv))
            .expect("validated shapes");
        (self.f_diag.clone(), g2)
    }
}

/// The valuations of the diagonal entries: how the translation moves the
/// standard-apartment exponents, meaningful modulo a uniform shift.
/// Errors on non-diagonal or singular input.
pub fn translation_vector(f_diag: &MatK) -> Result<Vec<i64>> {
    if !f_diag.is_square() {
        return Err(Error::Dimension("translation vector of a non-square matrix".into()));
    }
    let n = f_diag.nrows();
    let mut vals = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..n {
            if i != j && !f_diag[(i, j)].is_zero() {
                return Err(Error::Invalid("translation vector needs a diagonal matrix".into()));
            }
        }
        vals.push(f_diag[(i, i)].val_inf().finite().ok_or(Error::Singular)?);
    }
    Ok(vals)
}

/// A translation is generic when no axis lies in a wall: pairwise
/// distinct diagonal valuations.
pub fn is_generic(f_diag: &MatK) -> Result<bool> {
    let v = translation_vector(f_diag)?;
    let mut sorted = v.clone();
    sorted.sort_unstable();
    sorted.dedup();
    Ok(sorted.len() == v.len())
}

/// The four leading-chamber flags at the common vertex, g_1's from its
/// own sectors and g_2's transported from the far base vertex.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct CertFlags {
    pub g1_plus: Flag,
    pub g1_minus: Flag,
    pub g2_plus: Flag,
    pub g2_minus: Flag,
}

/// The full, serializable outcome of a certification run. Geometry
/// fields are present exactly when the pipeline reached them.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Certificate {
    pub status: CertStatus,
    pub policy: Policy,
    pub intersection_status: Option<IntersectionStatus>,
    /// Common vertex of the two apartments when it is unique.
    pub vertex: Option<ApartmentVertex>,
    /// The exponent pair (a, b) with diag(π^a)·conj·diag(π^b) ∈ GL(O),
    /// canonicalized to min(a) = 0.
    pub solution: Option<(Vec<i64>, Vec<i64>)>,
    pub translation_g1: Vec<i64>,
    pub translation_g2: Vec<i64>,
    pub flags: Option<CertFlags>,
    /// Oppositeness of the chamber pairs, keyed "++", "+-", "-+", "--"
    /// (g_1's end first).
    pub pair_verdicts: Option<BTreeMap<String, bool>>,
    pub notes: Vec<String>,
}

impl Certificate {
    fn early(
        status: CertStatus,
        policy: Policy,
        intersection_status: Option<IntersectionStatus>,
        translation: Vec<i64>,
        notes: Vec<String>,
    ) -> Certificate {
        Certificate {
            status,
            policy,
            intersection_status,
            vertex: None,
            solution: None,
            translation_g1: translation.clone(),
            translation_g2: translation,
            flags: None,
            pair_verdicts: None,
            notes,
        }
    }
}

/// Runs the full pipeline on a presentation.
///
/// Stops with `DEGENERATE` on a non-generic translation or a singular
/// residue change-of-basis, with `NOT_CERTIFIED` when the apartment
/// intersection is not a single vertex, and otherwise decides by the
/// policy on the four oppositeness verdicts.
pub fn certify_pair(p: &Presentation, policy: Policy) -> Result<Certificate> {
    let translation = translation_vector(p.f_diag())?;
    // g_2 = conj·f·conj⁻¹ translates the conj-image apartment by the
    // same exponent vector, so one genericity check covers both.
    if !is_generic(p.f_diag())? {
        return Ok(Certificate::early(
            CertStatus::Degenerate,
            policy,
            None,
            translation,
            vec![
                "translation vector has repeated entries: the generator axes lie in a wall"
                    .into(),
            ],
        ));
    }
    let inter = apartment_intersection(p.conj())?;
    match inter.status {
        IntersectionStatus::Empty => {
            return Ok(Certificate::early(
                CertStatus::NotCertified,
                policy,
                Some(inter.status),
                translation,
                vec!["the invariant apartments share no vertex".into()],
            ));
        }
        IntersectionStatus::Unbounded => {
            return Ok(Certificate::early(
                CertStatus::NotCertified,
                policy,
                Some(inter.status),
                translation,
                vec!["the invariant apartments share an unbounded set of vertices".into()],
            ));
        }
        IntersectionStatus::Finite => {
            return Ok(Certificate::early(
                CertStatus::NotCertified,
                policy,
                Some(inter.status),
                translation,
                vec![format!(
                    "unsupported configuration: the apartments meet in a bounded segment of {} vertices",
                    inter.solutions.len()
                )],
            ));
        }
        IntersectionStatus::Unique => {}
    }
    let (a, b) = inter.solutions[0].clone();
    let x = inter.unique_vertex().expect("UNIQUE carries a vertex");
    // The far base vertex: conj maps [L_b] to x, so g_2's sector data
    // lives over [L_b] and transports to link(x) through the residue of
    // the unit m = diag(π^a)·conj·diag(π^b).
    let y = ApartmentVertex::new(b.clone());
    let (g1_plus, g1_minus) = sector_flags(p.f_diag(), &x)?;
    let far = sector_flags(p.f_diag(), &y)?;
    let m = MatK::pi_diagonal(&a)
        .mul(p.conj())?
        .mul(&MatK::pi_diagonal(&b))?;
    let m_bar = match m.residue_matrix() {
        Ok(q) if q.is_invertible() => q,
        _ => {
            let mut cert = Certificate::early(
                CertStatus::Degenerate,
                policy,
                Some(inter.status),
                translation,
                vec!["the residue change-of-basis at the common vertex is singular".into()],
            );
            cert.vertex = Some(x);
            cert.solution = Some((a, b));
            return Ok(cert);
        }
    };
    let (g2_plus, g2_minus) = transport_flags(&m_bar, &far)?;
    let mut verdicts = BTreeMap::new();
    verdicts.insert("++".to_string(), opposite(&g1_plus, &g2_plus)?);
    verdicts.insert("+-".to_string(), opposite(&g1_plus, &g2_minus)?);
    verdicts.insert("-+".to_string(), opposite(&g1_minus, &g2_plus)?);
    verdicts.insert("--".to_string(), opposite(&g1_minus, &g2_minus)?);
    let matched_same = verdicts["++"] && verdicts["--"];
    let matched_swapped = verdicts["+-"] && verdicts["-+"];
    let satisfied = match policy {
        Policy::MatchedEnds => matched_same || matched_swapped,
        Policy::AllPairs => verdicts.values().all(|&v| v),
    };
    let mut notes = Vec::new();
    if satisfied {
        if policy == Policy::MatchedEnds {
            if matched_same {
                notes.push("ends matched identically: ++ and -- are opposite".into());
            } else {
                notes.push(
                    "ends matched after inverting the second generator: +- and -+ are opposite"
                        .into(),
                );
            }
        }
        notes.push(
            "translation length exceeds the intersection diameter automatically: \
             the intersection is a single vertex and the translations are nonzero"
                .into(),
        );
    } else {
        let failing: Vec<&str> = verdicts
            .iter()
            .filter(|(_, &v)| !v)
            .map(|(k, _)| k.as_str())
            .collect();
        notes.push(format!(
            "oppositeness fails for chamber pairs: {}",
            failing.join(", ")
        ));
    }
    Ok(Certificate {
        status: if satisfied {
            CertStatus::CertifiedFree
        } else {
            CertStatus::NotCertified
        },
        policy,
        intersection_status: Some(inter.status),
        vertex: Some(x),
        solution: Some((a, b)),
        translation_g1: translation.clone(),
        translation_g2: translation,
        flags: Some(CertFlags {
            g1_plus,
            g1_minus,
            g2_plus,
            g2_minus,
        }),
        pair_verdicts: Some(verdicts),
        notes,
    })
}

/// Certifies the two-parameter family point (α, β), annotating the
/// certificate with the residue-determinant diagnostic when the
/// structural determinant (α+1)(β−1) vanishes.
pub fn certify_family(
    alpha: &BigRational,
    beta: &BigRational,
    policy: Policy,
) -> Result<Certificate> {
    let (f, s) = family_pair(alpha, beta);
    let p = Presentation::new(f, s)?;
    let mut cert = certify_pair(&p, policy)?;
    let one = BigRational::one();
    if (alpha + &one) * (beta - &one) == BigRational::from_integer(0.into()) {
        cert.notes.push(format!(
            "residue change-of-basis determinant (alpha+1)(beta-1) vanishes at alpha={alpha}, beta={beta}"
        ));
    }
    Ok(cert)
}

/// One grid point of a family sweep.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct SweepEntry {
    pub alpha: String,
    pub beta: String,
    pub certificate: Certificate,
}

/// Certifies every point of a rational grid, row-major in the given
/// order: deterministic input, deterministic table.
pub fn sweep_family(
    alphas: &[BigRational],
    betas: &[BigRational],
    policy: Policy,
) -> Result<Vec<SweepEntry>> {
    let mut out = Vec::with_capacity(alphas.len() * betas.len());
    for alpha in alphas {
        for beta in betas {
            out.push(SweepEntry {
                alpha: alpha.to_string(),
                beta: beta.to_string(),
                certificate: certify_family(alpha, beta, policy)?,
            });
        }
    }
    Ok(out)
}

//! Chamber flags in the spherical link of a building vertex.
//!
//! The link of a vertex [L] is the flag complex of the residue space
//! L/πL ≅ Q^n: chambers are complete flags. A lattice chain strictly
//! between πL and L projects to such a flag, and a generic diagonal
//! translation singles out two of them at each apartment vertex — the
//! leading chambers of its attracting and repelling sectors. Transport
//! along a residue matrix moves flags between the links of two vertices,
//! and oppositeness (general position) is the geometric condition the
//! ping-pong certificate needs.
//!
//! Subspaces are row spans over Q in lattice-basis coordinates, held in
//! reduced row echelon form so equal subspaces are structurally equal.

use crate::building::{ApartmentVertex, VertexClass};
use crate::error::{Error, Result};
use crate::matk::MatK;
use crate::qmat::QMat;
use crate::ratfn::RatFn;

/// A complete flag in Q^n: nested subspaces of dimension 1 .. n-1, each
/// stored as the rref of a row basis.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Flag {
    ambient: usize,
    subspaces: Vec<QMat>,
}

impl Flag {
    /// Canonicalizes the given row bases and validates that they form a
    /// complete strictly nested chain in a common ambient space.
    pub fn new(subspaces: Vec<QMat>) -> Result<Flag> {
        let Some(first) = subspaces.first() else {
            return Err(Error::Invalid("empty flag".into()));
        };
        let ambient = first.ncols();
        if subspaces.len() + 1 != ambient {
            return Err(Error::Invalid(format!(
                "complete flag in dimension {ambient} needs {} subspaces",
                ambient - 1
            )));
        }
        let canon: Vec<QMat> = subspaces.iter().map(QMat::rref).collect();
        for (k, sub) in canon.iter().enumerate() {
            if sub.ncols() != ambient {
                return Err(Error::Dimension("flag subspaces in different ambient spaces".into()));
            }
            if sub.nrows() != k + 1 {
                return Err(Error::Invalid(format!(
                    "flag subspace {} has dimension {}, expected {}",
                    k,
                    sub.nrows(),
                    k + 1
                )));
            }
            if k > 0 {
                // Containment: adding the smaller space must not grow the span.
                let joined = sub.vstack(&canon[k - 1])?;
                if joined.rank() != k + 1 {
                    return Err(Error::Invalid("flag subspaces are not nested".into()));
                }
            }
        }
        Ok(Flag {
            ambient,
            subspaces: canon,
        })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// The subspace of the given dimension (1-based, up to n-1).
    pub fn subspace(&self, dim: usize) -> &QMat {
        &self.subspaces[dim - 1]
    }

    pub fn subspaces(&self) -> &[QMat] {
        &self.subspaces
    }
}

/// Projects a chain of lattices strictly between πL and L to a complete
/// flag in L/πL, in the coordinates of the vertex basis.
///
/// Each chain lattice is given by a basis matrix; it must contain πL and
/// be contained in L, and together the residue images must realize every
/// dimension 1 .. n-1 exactly once.
pub fn flag_from_chain(x: &VertexClass, chain: &[MatK]) -> Result<Flag> {
    let n = x.dim();
    let b_inv = x.basis().inverse()?;
    let mut by_dim: Vec<Option<QMat>> = vec![None; n.saturating_sub(1)];
    for m in chain {
        let coords = b_inv.mul(m)?;
        if !coords.is_integral() {
            return Err(Error::Invalid("chain lattice not contained in the vertex lattice".into()));
        }
        let back = coords.inverse().map_err(|_| {
            Error::Invalid("chain lattice basis is singular".into())
        })?;
        // πL ⊂ M: π·M⁻¹·L must be integral.
        if !back.map(|e| e * &RatFn::pi_pow(1)).is_integral() {
            return Err(Error::Invalid("chain lattice does not contain π times the vertex lattice".into()));
        }
        // Residue columns span M/πL; row form for the subspace.
        let sub = coords.residue_matrix()?.transpose().rref();
        let dim = sub.nrows();
        if dim == 0 || dim >= n {
            return Err(Error::Invalid("chain lattice equals L or πL modulo π".into()));
        }
        if by_dim[dim - 1].replace(sub).is_some() {
            return Err(Error::Invalid(format!("two chain lattices of residue dimension {dim}")));
        }
    }
    let subspaces: Vec<QMat> = by_dim
        .into_iter()
        .map(|s| s.ok_or_else(|| Error::Invalid("chain does not give a complete flag".into())))
        .collect::<Result<_>>()?;
    Flag::new(subspaces)
}

/// The leading-chamber flags of a generic diagonal translation at an
/// apartment vertex: (attracting, repelling).
///
/// With τ_i = val(f_ii) pairwise distinct, the attracting flag's
/// j-dimensional piece is spanned by the residue coordinates of the j
/// smallest τ, the repelling flag's by the j largest. Both are produced
/// through the lattice-chain machinery rather than written down directly.
pub fn sector_flags(f: &MatK, x: &ApartmentVertex) -> Result<(Flag, Flag)> {
    let n = x.dim();
    if f.nrows() != n || f.ncols() != n {
        return Err(Error::Dimension("translation and vertex dimensions differ".into()));
    }
    let mut tau = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..n {
            if i != j && !f[(i, j)].is_zero() {
                return Err(Error::Invalid("sector flags need a diagonal translation".into()));
            }
        }
        tau.push(f[(i, i)].val_inf().finite().ok_or(Error::Singular)?);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| tau[i]);
    if order.windows(2).any(|p| tau[p[0]] == tau[p[1]]) {
        return Err(Error::NonGeneric);
    }
    let x_class = VertexClass::from_apartment(x);
    let chain_for = |asc: &[usize]| -> Result<Flag> {
        let mut chain = Vec::with_capacity(n - 1);
        for j in 1..n {
            // Dimension-j piece: exponents bumped off the j chosen axes'
            // complement, i.e. L_{a + 1 - indicator(first j of asc)}.
            let mut exps = x.exps().to_vec();
            for (pos, &i) in asc.iter().enumerate() {
                if pos >= j {
                    exps[i] += 1;
                }
            }
            chain.push(MatK::pi_diagonal(&exps));
        }
        flag_from_chain(&x_class, &chain)
    };
    let attracting = chain_for(&order)?;
    let desc: Vec<usize> = order.iter().rev().copied().collect();
    let repelling = chain_for(&desc)?;
    Ok((attracting, repelling))
}

/// Moves a flag pair through an invertible residue matrix: coordinates
/// v ↦ m̄·v, so row bases multiply by the transpose.
pub fn transport_flags(m_bar: &QMat, flags: &(Flag, Flag)) -> Result<(Flag, Flag)> {
    let mt = m_bar.transpose();
    if !m_bar.is_invertible() {
        return Err(Error::Singular);
    }
    let move_one = |f: &Flag| -> Result<Flag> {
        let subs: Result<Vec<QMat>> = f
            .subspaces
            .iter()
            .map(|s| Ok(s.mul(&mt)?.rref()))
            .collect();
        Flag::new(subs?)
    };
    Ok((move_one(&flags.0)?, move_one(&flags.1)?))
}

/// General position of two complete flags: every complementary pair of
/// subspaces spans the ambient space.
pub fn opposite(f: &Flag, g: &Flag) -> Result<bool> {
    if f.ambient != g.ambient {
        return Err(Error::Dimension("flags in different ambient spaces".into()));
    }
    let n = f.ambient;
    for i in 1..n {
        let joined = f.subspace(i).vstack(g.subspace(n - i))?;
        if joined.rank() != n {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfn::RatFn;

    fn standard_flag() -> Flag {
        Flag::new(vec![
            QMat::from_ints(&[&[1, 0, 0]]),
            QMat::from_ints(&[&[1, 0, 0], &[0, 1, 0]]),
        ])
        .unwrap()
    }

    fn reversed_flag() -> Flag {
        Flag::new(vec![
            QMat::from_ints(&[&[0, 0, 1]]),
            QMat::from_ints(&[&[0, 0, 1], &[0, 1, 0]]),
        ])
        .unwrap()
    }

    /// diag(1, -1/t, -t): valuations (0, 1, -1).
    fn f_diag() -> MatK {
        MatK::diagonal(vec![
            RatFn::from_int(1),
            -&RatFn::t_pow(-1),
            -&RatFn::t(),
        ])
    }

    #[test]
    fn flag_validation() {
        assert!(standard_flag().subspace(1).nrows() == 1);
        // Non-nested subspaces are rejected.
        let bad = Flag::new(vec![
            QMat::from_ints(&[&[0, 0, 1]]),
            QMat::from_ints(&[&[1, 0, 0], &[0, 1, 0]]),
        ]);
        assert!(bad.is_err());
        // Wrong dimension count is rejected.
        assert!(Flag::new(vec![QMat::from_ints(&[&[1, 0, 0]])]).is_err());
        // Bases canonicalize: a scaled, mixed basis gives the same flag.
        let same = Flag::new(vec![
            QMat::from_ints(&[&[2, 0, 0]]),
            QMat::from_ints(&[&[3, 3, 0], &[1, 0, 0]]),
        ])
        .unwrap();
        assert_eq!(same, standard_flag());
    }

    #[test]
    fn oppositeness_basics() {
        let f = standard_flag();
        let g = reversed_flag();
        assert!(opposite(&f, &g).unwrap());
        assert!(opposite(&g, &f).unwrap());
        // A flag is never opposite itself (n > 1).
        assert!(!opposite(&f, &f).unwrap());
        // Sharing the line but not the plane already breaks it.
        let h = Flag::new(vec![
            QMat::from_ints(&[&[1, 0, 0]]),
            QMat::from_ints(&[&[1, 0, 0], &[0, 0, 1]]),
        ])
        .unwrap();
        assert!(!opposite(&f, &h).unwrap());
    }

    #[test]
    fn sector_flags_of_the_diagonal_translation() {
        // τ = (0, 1, -1): attracting flag e_3 ⊂ <e_1, e_3>, repelling
        // flag e_2 ⊂ <e_1, e_2>.
        let x = ApartmentVertex::origin(3);
        let (plus, minus) = sector_flags(&f_diag(), &x).unwrap();
        assert_eq!(
            plus,
            Flag::new(vec![
                QMat::from_ints(&[&[0, 0, 1]]),
                QMat::from_ints(&[&[1, 0, 0], &[0, 0, 1]]),
            ])
            .unwrap()
        );
        assert_eq!(
            minus,
            Flag::new(vec![
                QMat::from_ints(&[&[0, 1, 0]]),
                QMat::from_ints(&[&[1, 0, 0], &[0, 1, 0]]),
            ])
            .unwrap()
        );
        // The same translation at a different apartment vertex gives the
        // same coordinate flags.
        let x2 = ApartmentVertex::new(vec![-2, 0, 5]);
        assert_eq!(sector_flags(&f_diag(), &x2).unwrap(), (plus, minus));
    }

    #[test]
    fn sector_flags_need_generic_valuations() {
        let f = MatK::diagonal(vec![
            RatFn::from_int(1),
            RatFn::from_int(2),
            RatFn::t(),
        ]);
        assert_eq!(
            sector_flags(&f, &ApartmentVertex::origin(3)),
            Err(Error::NonGeneric)
        );
        let sing = MatK::diagonal(vec![
            RatFn::zero(),
            RatFn::t(),
            RatFn::from_int(1),
        ]);
        assert_eq!(
            sector_flags(&sing, &ApartmentVertex::origin(3)),
            Err(Error::Singular)
        );
    }

    #[test]
    fn transport_through_a_residue_matrix() {
        // The flagship residue matrix at (α, β) = (2, 3).
        let m_bar = QMat::from_ints(&[&[-1, 1, -1], &[1, -1, 3], &[1, 2, 1]]);
        let (plus, minus) = sector_flags(&f_diag(), &ApartmentVertex::origin(3)).unwrap();
        let (s_plus, s_minus) = transport_flags(&m_bar, &(plus.clone(), minus.clone())).unwrap();
        // Verified images: columns of m̄ under the coordinate action.
        assert_eq!(
            s_plus.subspace(1),
            &QMat::from_ints(&[&[1, -3, -1]]).rref()
        );
        assert_eq!(
            s_plus.subspace(2),
            &QMat::from_ints(&[&[1, 0, -1], &[0, 1, 0]])
        );
        assert_eq!(
            s_minus.subspace(1),
            &QMat::from_ints(&[&[1, -1, 2]]).rref()
        );
        assert_eq!(
            s_minus.subspace(2),
            &QMat::from_ints(&[&[1, -1, 0], &[0, 0, 1]])
        );
        // The four orientation verdicts at (2, 3): matched ends opposite,
        // crossed ends not.
        assert!(opposite(&plus, &s_plus).unwrap());
        assert!(opposite(&minus, &s_minus).unwrap());
        assert!(!opposite(&plus, &s_minus).unwrap());
        assert!(!opposite(&minus, &s_plus).unwrap());
    }

    #[test]
    fn transport_preserves_oppositeness() {
        let m_bar = QMat::from_ints(&[&[2, 1, 0], &[1, 1, 0], &[3, 0, 1]]);
        let pair = (standard_flag(), reversed_flag());
        let moved = transport_flags(&m_bar, &pair).unwrap();
        assert_eq!(
            opposite(&moved.0, &moved.1).unwrap(),
            opposite(&pair.0, &pair.1).unwrap()
        );
        let sing = QMat::from_ints(&[&[1, 1, 0], &[1, 1, 0], &[0, 0, 1]]);
        assert_eq!(transport_flags(&sing, &pair), Err(Error::Singular));
    }

    #[test]
    fn flag_from_chain_is_representative_independent() {
        let x = ApartmentVertex::new(vec![0, 1, 0]);
        let x_class = VertexClass::from_apartment(&x);
        // Chain: bump the first axis, then the first two.
        let c1 = MatK::pi_diagonal(&[1, 1, 0]);
        let c2 = MatK::pi_diagonal(&[1, 2, 0]);
        let flag = flag_from_chain(&x_class, &[c2.clone(), c1.clone()]).unwrap();
        assert_eq!(flag.subspace(1), &QMat::from_ints(&[&[0, 0, 1]]).rref());
        // Recompute with a unimodularly re-based vertex lattice: the
        // coordinates change, the flag data stays a complete flag chain.
        let u = MatK::from_rows(vec![
            vec![RatFn::from_int(1), RatFn::t_pow(-1), RatFn::zero()],
            vec![RatFn::zero(), RatFn::from_int(1), RatFn::zero()],
            vec![RatFn::zero(), RatFn::from_int(2), RatFn::from_int(1)],
        ])
        .unwrap();
        let rebased = VertexClass::new(x_class.basis().mul(&u).unwrap()).unwrap();
        let flag2 = flag_from_chain(&rebased, &[c1, c2]).unwrap();
        // Same chain, new coordinates: both complete flags; the first
        // subspace transported by residue(u)⁻¹ must agree.
        let u_res = u.residue_matrix().unwrap();
        let back = transport_flags(&u_res, &(flag2.clone(), flag2)).unwrap();
        assert_eq!(back.0.subspace(1), flag.subspace(1));
        assert_eq!(back.0.subspace(2), flag.subspace(2));
    }

    #[test]
    fn flag_from_chain_rejects_out_of_range_lattices() {
        let x = ApartmentVertex::origin(2);
        let x_class = VertexClass::from_apartment(&x);
        // Not inside L.
        assert!(flag_from_chain(&x_class, &[MatK::pi_diagonal(&[-1, 0])]).is_err());
        // Equal to πL mod π (residue dimension 0).
        assert!(flag_from_chain(&x_class, &[MatK::pi_diagonal(&[1, 1])]).is_err());
        // Missing dimensions.
        let x3 = VertexClass::from_apartment(&ApartmentVertex::origin(3));
        assert!(flag_from_chain(&x3, &[MatK::pi_diagonal(&[1, 0, 0])]).is_err());
    }
}

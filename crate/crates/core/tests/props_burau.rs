//! Randomized and exhaustive checks of the braid representations: the
//! defining relations, determinants, homomorphism law, and descent of the
//! unreduced action to the quotient.

mod common;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use schottky::burau::{braid_eval, burau_reduced, burau_unreduced, BraidWord, BurauKind};
use schottky::{MatK, RatFn};

/// Asserts every defining relation of B_n on a generator list.
fn assert_braid_relations(gens: &[MatK]) {
    let m = gens.len();
    for i in 0..m.saturating_sub(1) {
        let lhs = gens[i].mul(&gens[i + 1]).unwrap().mul(&gens[i]).unwrap();
        let rhs = gens[i + 1].mul(&gens[i]).unwrap().mul(&gens[i + 1]).unwrap();
        assert_eq!(lhs, rhs, "braid relation at {i}");
    }
    for i in 0..m {
        for j in i + 2..m {
            let lhs = gens[i].mul(&gens[j]).unwrap();
            let rhs = gens[j].mul(&gens[i]).unwrap();
            assert_eq!(lhs, rhs, "far commutation at ({i}, {j})");
        }
    }
}

#[test]
fn braid_relations_hold_in_both_representations() {
    for n in 2..=5 {
        assert_braid_relations(&burau_unreduced(n));
        assert_braid_relations(&burau_reduced(n));
    }
}

#[test]
fn reduced_generators_have_determinant_minus_t() {
    let minus_t = -&RatFn::t();
    for n in 2..=5 {
        for (i, g) in burau_reduced(n).iter().enumerate() {
            assert_eq!(g.det().unwrap(), minus_t, "generator {i} of B_{n}");
        }
    }
}

#[test]
fn unreduced_generators_fix_the_diagonal_vector() {
    for n in 2..=5 {
        let e = MatK::from_rows(vec![vec![RatFn::one()]; n]).unwrap();
        for g in burau_unreduced(n) {
            assert_eq!(g.mul(&e).unwrap(), e);
            assert!(g.is_invertible());
        }
    }
}

fn random_word(rng: &mut ChaCha8Rng, strands: usize, len: usize) -> BraidWord {
    let letters = (0..len)
        .map(|_| {
            (
                rng.gen_range(1..strands),
                if rng.gen::<bool>() { 1i8 } else { -1i8 },
            )
        })
        .collect();
    BraidWord::new(strands, letters).unwrap()
}

#[test]
fn braid_evaluation_is_a_homomorphism() {
    let mut rng = common::rng(0xb4a1d);
    for _ in 0..20 {
        let n = rng.gen_range(2..=5usize);
        let lu = rng.gen_range(0..=4);
        let lv = rng.gen_range(0..=4);
        let u = random_word(&mut rng, n, lu);
        let v = random_word(&mut rng, n, lv);
        let uv = u.concat(&v).unwrap();
        for kind in [BurauKind::Unreduced, BurauKind::Reduced] {
            let lhs = braid_eval(&uv, kind);
            let rhs = braid_eval(&u, kind).mul(&braid_eval(&v, kind)).unwrap();
            assert_eq!(lhs, rhs);
        }
        // Inverses really invert.
        let w = u.concat(&u.inverse()).unwrap();
        let img = braid_eval(&w, BurauKind::Reduced);
        assert_eq!(img, MatK::identity(n - 1));
    }
}

#[test]
fn the_unreduced_action_descends_to_the_quotient() {
    // Section S: V/Ke → V on the span of e_1..e_{n-1}; projection
    // P: V → V/Ke along e, sending e_n to -(v_1 + … + v_{n-1}).
    // Descent is the matrix identity P·U·S = R for every braid word.
    let mut rng = common::rng(0xde5ce41);
    for n in 2..=5usize {
        let p = MatK::from_rows(
            (0..n - 1)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            if j == i {
                                RatFn::one()
                            } else if j == n - 1 {
                                -&RatFn::one()
                            } else {
                                RatFn::zero()
                            }
                        })
                        .collect()
                })
                .collect(),
        )
        .unwrap();
        let s = MatK::from_rows(
            (0..n)
                .map(|i| {
                    (0..n - 1)
                        .map(|j| if i == j { RatFn::one() } else { RatFn::zero() })
                        .collect()
                })
                .collect(),
        )
        .unwrap();
        for _ in 0..5 {
            let len = rng.gen_range(1..=5);
            let w = random_word(&mut rng, n, len);
            let unred = braid_eval(&w, BurauKind::Unreduced);
            let red = braid_eval(&w, BurauKind::Reduced);
            let sandwich = p.mul(&unred).unwrap().mul(&s).unwrap();
            assert_eq!(sandwich, red);
        }
    }
}

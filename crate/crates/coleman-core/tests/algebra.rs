//! Round trips across weights, branching exponents and family coefficients.

use coleman_core::branching::{decompose_pair, eval_branching_vector, exponents_from_list, generator_ids, reconstruct, sigma_character, GeneratorId};
use coleman_core::families::{decompose_family_pair, eval_pair_coefficients, random_pair_character, specialize_family, FamilyCharacter, TorusUnit};
use coleman_core::groups::{box_decompose, box_reconstruct, build_distinguished_elements, random_mclub, random_msquare};
use coleman_core::padic::Zpn;
use coleman_core::weights::{is_mg_dominant, star_action, star_action_inverse, w_m_max, KostantElement, Weight};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn shape() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=3, 1usize..=3)
}

fn weight(n: usize, d: usize) -> impl Strategy<Value = Weight> {
    (-9i64..=9, prop::collection::vec(prop::collection::vec(-9i64..=9, 2 * n), d)).prop_map(move |(c0, grid)| Weight::new(n, d, c0, grid).unwrap())
}

proptest! {
    #[test]
    fn star_action_inverts(lam in shape().prop_flat_map(|(n, d)| weight(n, d))) {
        for i in 0..2 * lam.n {
            let w = KostantElement::new(i, lam.n).unwrap();
            let there = star_action(w, &lam).unwrap();
            prop_assert_eq!(star_action_inverse(w, &there).unwrap(), lam.clone());
        }
    }

    #[test]
    fn w_m_max_is_dominant_involution(lam in shape().prop_flat_map(|(n, d)| weight(n, d))) {
        let once = w_m_max(&lam);
        prop_assert_eq!(w_m_max(&once), lam.clone());
        let mut sorted = lam.clone();
        sorted.grid[0][1..].sort_unstable_by(|a, b| b.cmp(a));
        for row in sorted.grid.iter_mut().skip(1) {
            row.sort_unstable_by(|a, b| b.cmp(a));
        }
        prop_assert_eq!(is_mg_dominant(&lam), lam == sorted);
    }

    #[test]
    fn exponents_round_trip((n, d) in shape(), raw in prop::collection::vec(0i64..=7, 32), free in (-7i64..=7, -7i64..=7)) {
        let ids = generator_ids(n, d);
        let list: Vec<i64> = ids
            .iter()
            .zip(&raw)
            .map(|(id, &a)| match id {
                GeneratorId::Mu0 => free.0,
                GeneratorId::Mu { i: 1, tau: 0 } => free.1,
                _ => a,
            })
            .collect();
        let x = reconstruct(&exponents_from_list(&list, n, d), n, d);
        prop_assert!(x.validate().is_ok());
        prop_assert_eq!(decompose_pair(&x).unwrap().to_list(n, d), list);
    }

    #[test]
    fn specialization_square((n, d) in shape(), raw in prop::collection::vec(0i64..=5, 32)) {
        let ring = Zpn::new(7, 5).unwrap();
        let list: Vec<i64> = raw[..generator_ids(n, d).len()].to_vec();
        let x = reconstruct(&exponents_from_list(&list, n, d), n, d);
        let c = decompose_family_pair(&FamilyCharacter::algebraic(ring, &x.kappa, &x.j).unwrap()).unwrap();
        prop_assert_eq!(specialize_family(&c).unwrap(), x);
    }
}

#[test]
fn pair_coefficients_reconstruct() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in [3, 5, 7] {
        let ring = Zpn::new(p, 5).unwrap();
        for (n, d) in [(1, 1), (2, 3), (3, 1), (4, 2)] {
            let k = random_pair_character(ring, n, d, &mut rng).unwrap();
            let c = decompose_family_pair(&k).unwrap();
            for _ in 0..25 {
                let u = TorusUnit::random(ring, n, d, &mut rng);
                assert_eq!(eval_pair_coefficients(&c, &u).unwrap(), k.eval(&u).unwrap());
            }
        }
    }
}

#[test]
fn box_decomposition_and_eigen_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for (p, n, d) in [(3, 3, 2), (5, 2, 3), (7, 1, 2)] {
        let ring = Zpn::new(p, 5).unwrap();
        let u = build_distinguished_elements(ring, n, d).unwrap().u;
        for _ in 0..40 {
            let g = random_msquare(ring, n, d, 1, &mut rng);
            let (h, b) = box_decompose(&g, 1).unwrap();
            assert_eq!(box_reconstruct(&h, &b).unwrap(), g);
            let x = coleman_core::branching::random_pair(n, d, 3, &mut rng);
            let h2 = random_mclub(ring, n, d, 1, false, &mut rng);
            let lhs = eval_branching_vector(&x, &h2.conjugate_by(&u).unwrap().mul(&g), 1).unwrap();
            let rhs = sigma_character(&x, &h2).unwrap() * eval_branching_vector(&x, &g, 1).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

//! Residue arithmetic and matrix factorizations against big-integer oracles.

use coleman_core::matrix::Matrix;
use coleman_core::padic::{PadicScalar, Valuation, Zpn};
use num_bigint::BigUint;
use proptest::prelude::*;

fn ring_strategy() -> impl Strategy<Value = Zpn> {
    prop_oneof![Just((2u64, 20u32)), Just((3, 12)), Just((5, 8)), Just((7, 6)), Just((101, 3))].prop_map(|(p, n)| Zpn::new(p, n).unwrap())
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn elem(ring: Zpn, a: u64) -> PadicScalar {
    ring.elem((a % ring.modulus()) as i128)
}

proptest! {
    #[test]
    fn product_matches_bigint(ring in ring_strategy(), a in any::<u64>(), b in any::<u64>()) {
        let (x, y) = (elem(ring, a), elem(ring, b));
        let m = big(ring.modulus());
        let expected = big(x.residue()) * big(y.residue()) % &m;
        prop_assert_eq!(big((x * y).residue()), expected);
        prop_assert_eq!(big((x + y).residue()), (big(x.residue()) + big(y.residue())) % &m);
    }

    #[test]
    fn power_matches_modpow(ring in ring_strategy(), a in any::<u64>(), e in 0u64..10_000) {
        let x = elem(ring, a);
        let expected = big(x.residue()).modpow(&big(e), &big(ring.modulus()));
        prop_assert_eq!(big(x.pow_u(e).residue()), expected);
    }

    #[test]
    fn valuation_counts_factors(ring in ring_strategy(), a in any::<u64>()) {
        let x = elem(ring, a);
        let mut k = big(x.residue());
        let p = big(ring.p());
        let zero = big(0);
        if k == zero {
            prop_assert_eq!(x.valuation(), Valuation::AtLeast(ring.prec()));
        } else {
            let mut v = 0;
            while &k % &p == zero {
                k /= &p;
                v += 1;
            }
            prop_assert_eq!(x.valuation(), Valuation::Finite(v));
        }
    }

    #[test]
    fn units_invert(ring in ring_strategy(), a in any::<u64>()) {
        let x = elem(ring, a);
        prop_assume!(x.is_unit());
        prop_assert!((x * x.inverse().unwrap()).is_one());
    }

    #[test]
    fn lu_and_ul_reconstruct(ring in ring_strategy(), entries in prop::collection::vec(any::<u64>(), 16)) {
        let q = ring.p_power(1);
        let m = Matrix::from_fn(ring, 4, 4, |i, j| {
            let x = elem(ring, entries[4 * i + j]);
            if i == j { ring.one() + x * q } else { x * q }
        });
        let (l, u) = m.lu().unwrap();
        prop_assert!(&l * &u == m);
        prop_assert!(l.is_lower_triangular() && u.is_unipotent_upper() || l.is_unipotent_lower() && u.is_upper_triangular());
        let (r, s) = m.ul().unwrap();
        prop_assert!(&r * &s == m);
    }

    #[test]
    fn determinant_is_multiplicative(ring in ring_strategy(), a in prop::collection::vec(any::<u64>(), 9), b in prop::collection::vec(any::<u64>(), 9)) {
        let ma = Matrix::from_fn(ring, 3, 3, |i, j| elem(ring, a[3 * i + j]));
        let mb = Matrix::from_fn(ring, 3, 3, |i, j| elem(ring, b[3 * i + j]));
        prop_assert_eq!((&ma * &mb).det().unwrap(), ma.det().unwrap() * mb.det().unwrap());
    }
}

mod support;

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use tango_core::exactlin::{det_bareiss, rank, to_scalars};
use tango_core::wedge::{plucker_coordinates, satisfies_leading_lemma, wedge_self};
use tango_core::{Bivector, SubspaceGenerators};

fn vector(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-7i64..=7, len)
}

fn pair_of_vectors() -> impl Strategy<Value = (Vec<i64>, Vec<i64>)> {
    (3usize..9).prop_flat_map(|a| (vector(a), vector(a)))
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn decomposables_square_to_zero((u, w) in pair_of_vectors()) {
        let omega = Bivector::wedge(&to_scalars(&ints(&u)), &to_scalars(&ints(&w)));
        prop_assert!(wedge_self(&omega).is_zero());
        if !omega.is_zero() {
            prop_assert!(satisfies_leading_lemma(&omega).unwrap());
            prop_assert_eq!(rank(&omega.coefficient_matrix()), 2);
        }
    }

    #[test]
    fn square_detects_rank((a, coords) in (4usize..8).prop_flat_map(|a| (Just(a), vector(a * (a - 1) / 2)))) {
        let omega = Bivector::from_int_coords(a, &ints(&coords));
        let r = rank(&omega.coefficient_matrix());
        if wedge_self(&omega).is_zero() {
            prop_assert!(r <= 2);
        } else {
            prop_assert!(r >= 4);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn plucker_scales_by_determinant(seed in any::<u64>(), n in 3usize..6, m in 1usize..4) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let s = support::random_subspace(&mut rng, n, m, 5);
        let g = support::random_invertible(&mut rng, m, 3);
        let moved = SubspaceGenerators::new(n, support::left_multiply(&g, &s.rows)).unwrap();
        let d = det_bareiss(g);
        let scaled: Vec<BigInt> = plucker_coordinates(&s).unwrap().iter().map(|x| x * &d).collect();
        prop_assert_eq!(plucker_coordinates(&moved).unwrap(), scaled);
    }
}

#[test]
fn plucker_vector_is_nonzero_for_independent_rows() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let s = support::random_subspace(&mut rng, 4, 3, 4);
        assert!(plucker_coordinates(&s).unwrap().iter().any(|x| !x.is_zero()));
    }
}

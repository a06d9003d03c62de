mod support;

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tango_core::orbitdim::{orbit_dimension, orbit_dimension_with, plucker_derivative_row};
use tango_core::sl2rep::construct_tango_subspace;
use tango_core::wedge::{plucker_coordinates, wedge2_power};
use tango_core::{Matrix, RankStrategy, SubspaceGenerators};

const CASES: [(usize, usize); 4] = [(3, 1), (3, 2), (4, 3), (4, 5)];

#[test]
fn invariant_under_change_of_generators() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (n, m) in CASES {
        for _ in 0..3 {
            let s = support::random_subspace(&mut rng, n, m, 3);
            let g = support::random_invertible(&mut rng, m, 2);
            let moved = SubspaceGenerators::new(n, support::left_multiply(&g, &s.rows)).unwrap();
            assert_eq!(
                orbit_dimension(&s).unwrap().orbit_dim,
                orbit_dimension(&moved).unwrap().orbit_dim
            );
        }
    }
}

#[test]
fn constant_along_the_orbit() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let symmetric = construct_tango_subspace(4).unwrap();
    let mut samples: Vec<SubspaceGenerators> = CASES
        .iter()
        .map(|&(n, m)| support::random_subspace(&mut rng, n, m, 3))
        .collect();
    samples.push(symmetric);
    for s in samples {
        let g = support::random_invertible(&mut rng, s.n + 1, 2);
        let g = Matrix::from_int_rows(&g, s.n + 1).unwrap();
        let lifted = wedge2_power(&g);
        let rows = s
            .rows
            .iter()
            .map(|r| lifted.apply_int(r).unwrap())
            .collect();
        let moved = SubspaceGenerators::new(s.n, rows).unwrap();
        assert_eq!(
            orbit_dimension(&s).unwrap(),
            orbit_dimension(&moved).unwrap(),
            "n = {}, m = {}",
            s.n,
            s.m
        );
    }
}

#[test]
fn radial_row_is_twice_m_times_plucker() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for (n, m) in CASES {
        let s = support::random_subspace(&mut rng, n, m, 4);
        let id = Matrix::identity(s.n + 1);
        let radial = plucker_derivative_row(&s, &tango_core::wedge::wedge2_derivation(&id)).unwrap();
        let expected: Vec<BigInt> = plucker_coordinates(&s)
            .unwrap()
            .iter()
            .map(|x| x * BigInt::from(2 * m))
            .collect();
        assert_eq!(radial, expected);
    }
}

#[test]
fn exact_and_modular_ranks_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let s = support::random_subspace(&mut rng, 4, 3, 4);
    let exact = orbit_dimension_with(&s, RankStrategy::Exact).unwrap();
    let modular = orbit_dimension_with(&s, RankStrategy::Modular).unwrap();
    assert_eq!(exact.orbit_dim, modular.orbit_dim);
    assert_eq!(exact.rank_method, "exact");
    assert_eq!(modular.rank_method, "modular");
}

#[test]
fn symmetric_subspace_has_large_stabilizer() {
    let r = orbit_dimension(&construct_tango_subspace(5).unwrap()).unwrap();
    assert!(r.stabilizer_dim >= 3);
    assert!(r.orbit_dim <= 32);
    assert_eq!(r.affine_rank, r.orbit_dim + 1);
}

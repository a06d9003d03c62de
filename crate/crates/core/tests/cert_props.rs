mod support;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tango_core::cert::{
    certify_no_decomposables, check_torus_invariance, scan_decomposables_modp, verify_witness,
};
use tango_core::exactlin::rank_bareiss;
use tango_core::sl2rep::construct_tango_subspace;
use tango_core::wedge::{pair_count, pairs};
use tango_core::SubspaceGenerators;

#[test]
fn certificates_for_constructed_subspaces() {
    for n in 3..=8 {
        let w = construct_tango_subspace(n).unwrap();
        let c = certify_no_decomposables(&w, n).unwrap();
        assert!(c.is_valid());
        assert_eq!(c.checks.chase_coefficients.len(), pair_count(n + 1));
        assert!(c
            .checks
            .chase_coefficients
            .iter()
            .all(|cc| cc.coefficient.is_positive()));
    }
}

/// The certificate argument survives reduction mod `p` when `p` divides no
/// chase coefficient, so the scan must then come back clean.
#[test]
fn valid_certificate_implies_clean_scan() {
    let runs: [(usize, &[u64]); 3] = [(3, &[5, 7, 11, 101]), (4, &[7, 11, 13, 31]), (5, &[11, 13])];
    for (n, primes) in runs {
        let w = construct_tango_subspace(n).unwrap();
        let cert = certify_no_decomposables(&w, n).unwrap();
        for &p in primes {
            let reduces = cert
                .checks
                .chase_coefficients
                .iter()
                .all(|c| !(&c.coefficient % BigInt::from(p)).is_zero());
            assert!(reduces, "n = {n}, p = {p}");
            let scan = scan_decomposables_modp(&w, &[p]).unwrap();
            assert!(scan.is_clean(), "n = {n}, p = {p}: {:?}", scan.found);
        }
    }
}

#[test]
fn small_primes_can_break_the_certificate() {
    // at n = 5 the generator v_{0,4} - 5 v_{1,3} + 10 v_{2,3} reduces to v_{0,4} mod 5
    let w = construct_tango_subspace(5).unwrap();
    let cert = certify_no_decomposables(&w, 5).unwrap();
    assert!(cert
        .checks
        .chase_coefficients
        .iter()
        .any(|c| (&c.coefficient % BigInt::from(5)).is_zero()));
    let scan = scan_decomposables_modp(&w, &[5]).unwrap();
    assert!(!scan.is_clean());
    assert!(scan.found.iter().all(|f| verify_witness(&w, f)));
}

#[test]
fn witnesses_re_verify() {
    let mut rows = construct_tango_subspace(4).unwrap().rows;
    let mut planted = vec![BigInt::zero(); 10];
    planted[0] = BigInt::from(1);
    rows.push(planted);
    let w = SubspaceGenerators::new(4, rows).unwrap();
    let scan = scan_decomposables_modp(&w, &[7, 11]).unwrap();
    assert!(!scan.is_clean());
    assert!(scan.found.iter().all(|f| verify_witness(&w, f)));
    assert!(scan.found.iter().any(|f| f.lifts_to_decomposable));
    assert!(certify_no_decomposables(&w, 4).is_err());
}

/// `Σ_λ dim(W ∩ E_λ) = dim W`, the eigenspaces `E_λ` of `ρ(diag(weights))`
/// being spanned by the `v_{i,j}` with `w_i + w_j = λ`.
fn splits_along_eigenspaces(w: &SubspaceGenerators, weights: &[i64]) -> bool {
    let ambient = w.n + 1;
    let mut by_eigenvalue: std::collections::BTreeMap<i64, Vec<usize>> = Default::default();
    for (idx, (i, j)) in pairs(ambient).into_iter().enumerate() {
        by_eigenvalue
            .entry(weights[i] + weights[j])
            .or_default()
            .push(idx);
    }
    let width = pair_count(ambient);
    let mut total = 0;
    for indices in by_eigenvalue.values() {
        let mut stacked = w.rows.clone();
        for &idx in indices {
            let mut e = vec![BigInt::zero(); width];
            e[idx] = BigInt::from(1);
            stacked.push(e);
        }
        total += w.m + indices.len() - rank_bareiss(stacked);
    }
    total == w.m
}

#[test]
fn torus_invariance_matches_eigenspace_splitting() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut agreed_true = 0;
    for _ in 0..300 {
        let n = rng.gen_range(2..5);
        let ambient = n + 1;
        let width = pair_count(ambient);
        let weights: Vec<i64> = (0..ambient).map(|_| rng.gen_range(-2..=2)).collect();
        let m = rng.gen_range(1..=width.min(3));
        // each generator mixes one or two basis vectors, so both outcomes occur
        let rows = (0..m)
            .map(|_| {
                let mut r = vec![BigInt::zero(); width];
                for _ in 0..rng.gen_range(1..=2) {
                    r[rng.gen_range(0..width)] = BigInt::from(rng.gen_range(1..=3));
                }
                r
            })
            .collect();
        let Ok(w) = SubspaceGenerators::new(n, rows) else {
            continue;
        };
        let invariant = check_torus_invariance(&w, &weights);
        assert_eq!(invariant, splits_along_eigenspaces(&w, &weights));
        agreed_true += invariant as usize;
    }
    assert!(agreed_true > 10);
}

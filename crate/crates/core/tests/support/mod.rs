//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use tango_core::{IntVector, SubspaceGenerators};

fn rat(x: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Coefficients `a_0..a_n` of `C(n+t, n) = Σ a_k t^k`.
pub fn hilbert_coeffs(n: usize) -> Vec<BigRational> {
    // Π_{i=1..n} (t + i) / n!
    let mut poly = vec![BigRational::one()];
    for i in 1..=n {
        let mut next = vec![BigRational::zero(); poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k] += c * rat(i as i128);
            next[k + 1] += c;
        }
        poly = next;
    }
    let fact: i128 = (1..=n as i128).product();
    poly.into_iter().map(|c| c / rat(fact.max(1))).collect()
}

/// Hirzebruch–Riemann–Roch on Pⁿ: with Chern roots `x_i`, `χ(E) = Σ_i P(x_i)`
/// where `P(t) = C(n+t, n)`, so `χ = Σ_k a_k p_k` with power sums `p_k`
/// obtained from the Chern classes by Newton's identities.
pub fn hrr_chi(n: usize, rank: usize, chern: &[i128]) -> BigRational {
    let e = |i: usize| -> BigRational {
        if i == 0 {
            BigRational::one()
        } else {
            rat(chern.get(i).copied().unwrap_or(0))
        }
    };
    let mut p = vec![rat(rank as i128)];
    for k in 1..=n {
        let mut pk = BigRational::zero();
        for i in 1..k {
            let term = e(i) * &p[k - i];
            if i % 2 == 1 {
                pk += term;
            } else {
                pk -= term;
            }
        }
        let last = e(k) * rat(k as i128);
        if k % 2 == 1 {
            pk += last;
        } else {
            pk -= last;
        }
        p.push(pk);
    }
    hilbert_coeffs(n)
        .iter()
        .zip(&p)
        .map(|(a, pk)| a * pk)
        .sum()
}

pub fn random_ints(rng: &mut ChaCha8Rng, len: usize, bound: i64) -> IntVector {
    (0..len)
        .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
        .collect()
}

/// A random `m`-dimensional subspace of `∧²V`, `dim V = n + 1`.
pub fn random_subspace(rng: &mut ChaCha8Rng, n: usize, m: usize, bound: i64) -> SubspaceGenerators {
    let width = (n + 1) * n / 2;
    loop {
        let rows = (0..m).map(|_| random_ints(rng, width, bound)).collect();
        if let Ok(s) = SubspaceGenerators::new(n, rows) {
            return s;
        }
    }
}

/// A random invertible integer matrix as rows.
pub fn random_invertible(rng: &mut ChaCha8Rng, size: usize, bound: i64) -> Vec<IntVector> {
    loop {
        let rows: Vec<IntVector> = (0..size).map(|_| random_ints(rng, size, bound)).collect();
        if !tango_core::exactlin::det_bareiss(rows.clone()).is_zero() {
            return rows;
        }
    }
}

/// `g · rows` for an `m × m` matrix `g`.
pub fn left_multiply(g: &[IntVector], rows: &[IntVector]) -> Vec<IntVector> {
    g.iter()
        .map(|gr| {
            let mut out = vec![BigInt::zero(); rows[0].len()];
            for (c, row) in gr.iter().zip(rows) {
                for (slot, x) in out.iter_mut().zip(row) {
                    *slot += c * x;
                }
            }
            out
        })
        .collect()
}

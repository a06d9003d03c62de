//! Certificates that a subspace `W ⊆ ∧²SⁿU` contains no nonzero decomposable
//! bivector, plus a finite-field search for decomposables and torus checks.
//!
//! The certificate follows the lowering-operator argument. A nonzero
//! decomposable `ω` has a single coordinate `v_{i₀,j₀}` on its minimal level
//! `i₀ + j₀`. The induced lowering operator raises the level of every basis
//! bivector by one, and `v_{n-1,n}` spans the top level `2n - 1`, so
//! `Ỹ^k ω = x_{i₀,j₀} · Ỹ^k v_{i₀,j₀}` for `k = 2n - 1 - i₀ - j₀`. If `W` is
//! `Ỹ`-stable, every such chase coefficient is nonzero and `v_{n-1,n} ∉ W`,
//! then no decomposable can lie in `W`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exactlin::{self, IntVector, Matrix, Scalar};
use crate::sl2rep;
use crate::wedge::{self, pair_index, pairs, Bivector, SubspaceGenerators};

/// Largest projective space a scan will enumerate.
pub const MAX_SCAN_POINTS: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertFailure {
    #[error("not lowering-invariant; certificate inapplicable (image of generator {row} leaves W)")]
    NotLoweringInvariant { row: usize },
    #[error("v_{{{},{}}} lies in W", .n - 1, .n)]
    TopVectorInW { n: usize },
    #[error("chase of v_{{{i},{j}}} vanishes")]
    VanishingChase { i: usize, j: usize },
    #[error("subspace lives in ∧²S^{got}U, expected n = {expected}")]
    WrongDegree { expected: usize, got: usize },
    #[error("n must be at least 1")]
    DegreeTooSmall,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScanError {
    #[error("{0} is not a prime greater than 3")]
    BadPrime(u64),
    #[error("W does not have good reduction modulo {0} (generators become dependent)")]
    BadReduction(u64),
    #[error("P^{dim}(F_{prime}) has {points} points, more than the limit {MAX_SCAN_POINTS}; use a smaller prime")]
    TooManyPoints { prime: u64, dim: usize, points: u128 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChaseCoefficient {
    pub i: usize,
    pub j: usize,
    /// `Ỹ^k v_{i,j} = coefficient · v_{n-1,n}` with `k = 2n-1-i-j`.
    #[serde(serialize_with = "crate::serde_int::one")]
    pub coefficient: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateChecks {
    pub lowering_invariance: bool,
    pub top_vector_excluded: bool,
    pub chase_coefficients: Vec<ChaseCoefficient>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub n: usize,
    pub checks: CertificateChecks,
}

impl Certificate {
    pub fn is_valid(&self) -> bool {
        self.checks.lowering_invariance
            && self.checks.top_vector_excluded
            && self
                .checks
                .chase_coefficients
                .iter()
                .all(|c| !c.coefficient.is_zero())
    }
}

/// `Ỹ^k v_{i,j}` expressed through `v_{n-1,n}`, or `None` if the chase lands
/// somewhere else (it cannot for the monomial action, levels only go up).
pub fn chase_coefficient(y: &Matrix, n: usize, i: usize, j: usize) -> Option<BigInt> {
    let ambient = n + 1;
    let width = wedge::pair_count(ambient);
    let mut v = vec![BigInt::zero(); width];
    v[pair_index(i, j, ambient)] = BigInt::one();
    for _ in 0..(2 * n - 1 - i - j) {
        v = y.apply_int(&v).expect("operator has the wedge dimension");
    }
    let top = pair_index(n - 1, n, ambient);
    let off_top = v.iter().enumerate().any(|(idx, c)| idx != top && !c.is_zero());
    (!off_top).then(|| v[top].clone())
}

pub fn certify_no_decomposables(
    w: &SubspaceGenerators,
    n: usize,
) -> Result<Certificate, CertFailure> {
    if n == 0 {
        return Err(CertFailure::DegreeTooSmall);
    }
    if w.n != n {
        return Err(CertFailure::WrongDegree {
            expected: n,
            got: w.n,
        });
    }
    let y = sl2rep::wedge2_symn(n)
        .map_err(|_| CertFailure::DegreeTooSmall)?
        .y;

    for (row, gen) in w.rows.iter().enumerate() {
        let image = y.apply_int(gen).expect("generator has the wedge dimension");
        if !w.contains(&image) {
            return Err(CertFailure::NotLoweringInvariant { row });
        }
    }

    let ambient = n + 1;
    let mut top = vec![BigInt::zero(); w.width()];
    top[pair_index(n - 1, n, ambient)] = BigInt::one();
    if w.contains(&top) {
        return Err(CertFailure::TopVectorInW { n });
    }

    let mut chase_coefficients = Vec::new();
    for (i, j) in pairs(ambient) {
        match chase_coefficient(&y, n, i, j) {
            Some(c) if !c.is_zero() => chase_coefficients.push(ChaseCoefficient {
                i,
                j,
                coefficient: c,
            }),
            _ => return Err(CertFailure::VanishingChase { i, j }),
        }
    }

    Ok(Certificate {
        n,
        checks: CertificateChecks {
            lowering_invariance: true,
            top_vector_excluded: true,
            chase_coefficients,
        },
    })
}

// ---------------------------------------------------------------------------
// Finite-field scan

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanWitness {
    pub prime: u64,
    /// Normalized projective coordinates (first nonzero entry 1) with respect
    /// to the generator rows.
    pub point: Vec<u64>,
    /// Whether rational reconstruction of the point gives a combination that
    /// is decomposable over ℚ.
    pub lifts_to_decomposable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanResult {
    pub primes: Vec<u64>,
    pub points_checked: Vec<u128>,
    pub found: Vec<ScanWitness>,
}

impl ScanResult {
    pub fn is_clean(&self) -> bool {
        self.found.is_empty()
    }
}

/// Whether the bivector with coordinates `omega` (mod `p`, lex order) has
/// vanishing `ω∧ω`, via the quadratic Plücker relations
/// `x_ab x_cd - x_ac x_bd + x_ad x_bc = 0`.
pub fn is_decomposable_mod_p(omega: &[u64], ambient: usize, p: u64) -> bool {
    let at = |i, j| omega[pair_index(i, j, ambient)] as u128;
    let p128 = p as u128;
    for a in 0..ambient {
        for b in a + 1..ambient {
            for c in b + 1..ambient {
                for d in c + 1..ambient {
                    let plus = (at(a, b) * at(c, d) + at(a, d) * at(b, c)) % p128;
                    let minus = at(a, c) * at(b, d) % p128;
                    if plus != minus {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn projective_point_count(p: u64, m: usize) -> u128 {
    (0..m as u32).fold(0u128, |acc, e| acc.saturating_add((p as u128).saturating_pow(e)))
}

/// Point number `index` of `P^{m-1}(F_p)`, ordered by the position of the
/// leading 1 and then lexicographically in the trailing coordinates.
fn nth_point(mut index: u128, p: u64, m: usize) -> Vec<u64> {
    let mut lead = 0;
    loop {
        let block = (p as u128).pow((m - 1 - lead) as u32);
        if index < block {
            break;
        }
        index -= block;
        lead += 1;
    }
    let mut point = vec![0u64; m];
    point[lead] = 1;
    for slot in point[lead + 1..].iter_mut().rev() {
        *slot = (index % p as u128) as u64;
        index /= p as u128;
    }
    point
}

/// Symmetric rational reconstruction of `a mod p` with numerator and
/// denominator bounded by `sqrt(p/2)`.
fn rational_reconstruct(a: u64, p: u64) -> Option<Scalar> {
    let bound = ((p / 2) as f64).sqrt() as i128;
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 > bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if t1 == 0 || t1.abs() > bound {
        return None;
    }
    Some(Scalar::new(BigInt::from(r1), BigInt::from(t1)))
}

fn lifts_to_decomposable(w: &SubspaceGenerators, point: &[u64], p: u64) -> bool {
    let Some(coeffs) = point
        .iter()
        .map(|&c| rational_reconstruct(c, p))
        .collect::<Option<Vec<_>>>()
    else {
        return false;
    };
    let mut coords = vec![Scalar::zero(); w.width()];
    for (c, row) in coeffs.iter().zip(&w.rows) {
        for (slot, x) in coords.iter_mut().zip(row) {
            *slot += c * Scalar::from_integer(x.clone());
        }
    }
    let omega = Bivector::from_coords(w.ambient(), &coords);
    !omega.is_zero() && wedge::wedge_self(&omega).is_zero()
}

/// Exhaustive search of `P^{m-1}(F_p)` for combinations of the generators
/// with `ω∧ω ≡ 0`. An empty result is evidence, not proof, that `W` avoids
/// the Grassmannian.
pub fn scan_decomposables_modp(
    w: &SubspaceGenerators,
    primes: &[u64],
) -> Result<ScanResult, ScanError> {
    let m = w.m;
    let ambient = w.ambient();
    let mut found = Vec::new();
    let mut points_checked = Vec::new();
    for &p in primes {
        if p <= 3 || !exactlin::is_prime_u64(p) {
            return Err(ScanError::BadPrime(p));
        }
        let total = projective_point_count(p, m);
        if total > MAX_SCAN_POINTS {
            return Err(ScanError::TooManyPoints {
                prime: p,
                dim: m.saturating_sub(1),
                points: total,
            });
        }
        if exactlin::rank_mod_p(&w.rows, p) != m {
            return Err(ScanError::BadReduction(p));
        }
        let rows: Vec<Vec<u64>> = w
            .rows
            .iter()
            .map(|r| r.iter().map(|x| exactlin::reduce_mod(x, p)).collect())
            .collect();
        let width = w.width();
        let chunk = 4096u128;
        let chunks = total.div_ceil(chunk);
        let mut hits: Vec<Vec<u64>> = (0..chunks)
            .into_par_iter()
            .flat_map_iter(|c| {
                let start = c * chunk;
                let end = (start + chunk).min(total);
                let rows = &rows;
                (start..end).filter_map(move |idx| {
                    let point = nth_point(idx, p, m);
                    let mut omega = vec![0u64; width];
                    for (coef, row) in point.iter().zip(rows) {
                        if *coef == 0 {
                            continue;
                        }
                        for (slot, x) in omega.iter_mut().zip(row) {
                            *slot = ((*slot as u128 + *coef as u128 * *x as u128) % p as u128)
                                as u64;
                        }
                    }
                    is_decomposable_mod_p(&omega, ambient, p).then_some(point)
                })
            })
            .collect();
        hits.sort();
        found.extend(hits.into_iter().map(|point| ScanWitness {
            prime: p,
            lifts_to_decomposable: lifts_to_decomposable(w, &point, p),
            point,
        }));
        points_checked.push(total);
    }
    Ok(ScanResult {
        primes: primes.to_vec(),
        points_checked,
        found,
    })
}

/// Re-evaluates a witness: the combination of generators must satisfy
/// `ω∧ω ≡ 0 (mod p)`.
pub fn verify_witness(w: &SubspaceGenerators, witness: &ScanWitness) -> bool {
    let p = witness.prime;
    let mut omega = vec![BigInt::zero(); w.width()];
    for (c, row) in witness.point.iter().zip(&w.rows) {
        for (slot, x) in omega.iter_mut().zip(row) {
            *slot += BigInt::from(*c) * x;
        }
    }
    let omega = Bivector::from_int_coords(w.ambient(), &omega);
    let square = wedge::wedge_self(&omega);
    square.coeffs().values().all(|c| {
        let num = c.to_integer();
        (num % BigInt::from(p)).is_zero()
    })
}

/// Whether `ρ(diag(weights)) W ⊆ W`.
pub fn check_torus_invariance(w: &SubspaceGenerators, weights: &[i64]) -> bool {
    if weights.len() != w.ambient() {
        return false;
    }
    let mut diag = Matrix::zeros(weights.len(), weights.len());
    for (k, &t) in weights.iter().enumerate() {
        diag.set(k, k, Scalar::from_integer(BigInt::from(t)));
    }
    let rho = wedge::wedge2_derivation(&diag);
    w.rows.iter().all(|row| {
        let image: IntVector = rho.apply_int(row).expect("row has the wedge dimension");
        w.contains(&image)
    })
}

/// `(n, n-2, …, -n)`, the weights of the standard torus on `SⁿU`.
pub fn standard_torus_weights(n: usize) -> Vec<i64> {
    (0..=n as i64).map(|k| n as i64 - 2 * k).collect()
}

/// Whether all coordinates of the generators are below `p` in absolute value,
/// the cheap sufficient condition for good reduction that the CLI reports.
pub fn coefficients_below(w: &SubspaceGenerators, p: u64) -> bool {
    w.rows
        .iter()
        .flatten()
        .all(|x| x.abs().to_u64().is_some_and(|v| v < p))
}

//! Bivectors in ∧²V, the ω∧ω decomposability test, and Plücker coordinates.
//!
//! The basis of ∧²V is `v_{i,j} = v_i ∧ v_j` with `i < j`, ordered
//! lexicographically. Every coordinate vector in the crate uses this order.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactlin::{self, IntVector, Matrix, Scalar};

/// Refuse Plücker computations with more minors than this.
pub const MAX_MINORS: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WedgeError {
    #[error("the zero bivector has no leading level")]
    ZeroBivector,
    #[error("generators have rank {rank}, expected {m}")]
    RankDeficient { rank: usize, m: usize },
    #[error("generator row {row} has {got} coordinates, expected {expected}")]
    RowLength {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("index {index} out of range for ambient dimension {ambient}")]
    IndexOutOfRange { index: usize, ambient: usize },
    #[error("{count} maximal minors requested, limit is {MAX_MINORS}")]
    TooManyMinors { count: u64 },
}

/// `C(a, 2)`: the dimension of ∧² of an `a`-dimensional space.
pub fn pair_count(ambient: usize) -> usize {
    ambient * ambient.saturating_sub(1) / 2
}

/// Lexicographic position of `v_{i,j}` (`i < j`) among the basis bivectors.
pub fn pair_index(i: usize, j: usize, ambient: usize) -> usize {
    debug_assert!(i < j && j < ambient);
    // rows before i contribute (ambient-1) + (ambient-2) + ... + (ambient-i)
    i * ambient - i * (i + 1) / 2 + (j - i - 1)
}

/// Basis pairs `(i, j)` in lexicographic order.
pub fn pairs(ambient: usize) -> Vec<(usize, usize)> {
    (0..ambient)
        .flat_map(|i| (i + 1..ambient).map(move |j| (i, j)))
        .collect()
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc.min(u64::MAX as u128) as u64
}

/// Sparse element of ∧²V.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bivector {
    ambient: usize,
    coeffs: BTreeMap<(usize, usize), Scalar>,
}

impl Bivector {
    pub fn zero(ambient: usize) -> Self {
        Bivector {
            ambient,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis(ambient: usize, i: usize, j: usize) -> Self {
        let mut b = Bivector::zero(ambient);
        b.add_term(i, j, Scalar::from_integer(BigInt::from(1)));
        b
    }

    /// `u ∧ w`.
    pub fn wedge(u: &[Scalar], w: &[Scalar]) -> Self {
        assert_eq!(u.len(), w.len(), "vectors must live in the same space");
        let ambient = u.len();
        let mut b = Bivector::zero(ambient);
        for (i, j) in pairs(ambient) {
            let c = &u[i] * &w[j] - &u[j] * &w[i];
            b.add_term(i, j, c);
        }
        b
    }

    pub fn from_coords(ambient: usize, coords: &[Scalar]) -> Self {
        assert_eq!(coords.len(), pair_count(ambient));
        let mut b = Bivector::zero(ambient);
        for ((i, j), c) in pairs(ambient).into_iter().zip(coords) {
            b.add_term(i, j, c.clone());
        }
        b
    }

    pub fn from_int_coords(ambient: usize, coords: &[BigInt]) -> Self {
        Bivector::from_coords(ambient, &exactlin::to_scalars(coords))
    }

    /// Add `c · v_a ∧ v_b`, reordering to `a < b` with a sign flip.
    pub fn add_term(&mut self, a: usize, b: usize, c: Scalar) {
        assert!(a < self.ambient && b < self.ambient, "index out of range");
        if a == b || c.is_zero() {
            return;
        }
        let (key, c) = if a < b { ((a, b), c) } else { ((b, a), -c) };
        let entry = self.coeffs.entry(key).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn coeffs(&self) -> &BTreeMap<(usize, usize), Scalar> {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize, j: usize) -> Scalar {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn to_coords(&self) -> Vec<Scalar> {
        pairs(self.ambient)
            .into_iter()
            .map(|(i, j)| self.coeff(i, j))
            .collect()
    }

    /// The antisymmetric `ambient × ambient` matrix with `(i, j)` entry `x_{i,j}`.
    /// Its rank is 2 exactly when the bivector is nonzero and decomposable.
    pub fn coefficient_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.ambient, self.ambient);
        for (&(i, j), c) in &self.coeffs {
            m.set(i, j, c.clone());
            m.set(j, i, -c.clone());
        }
        m
    }
}

/// Sparse element of ∧⁴V with strictly increasing index tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourVector {
    ambient: usize,
    coeffs: BTreeMap<[usize; 4], Scalar>,
}

impl FourVector {
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn coeffs(&self) -> &BTreeMap<[usize; 4], Scalar> {
        &self.coeffs
    }

    pub fn coeff(&self, idx: [usize; 4]) -> Scalar {
        self.coeffs.get(&idx).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Sort a 4-tuple of distinct indices, returning the sorted tuple and whether
/// the permutation was odd.
fn sort_with_sign(mut idx: [usize; 4]) -> ([usize; 4], bool) {
    let mut odd = false;
    for i in 0..4 {
        for j in 0..3 - i {
            if idx[j] > idx[j + 1] {
                idx.swap(j, j + 1);
                odd = !odd;
            }
        }
    }
    (idx, odd)
}

/// `ω ∧ ω`. Zero exactly when ω is decomposable (or zero).
pub fn wedge_self(omega: &Bivector) -> FourVector {
    let mut coeffs: BTreeMap<[usize; 4], Scalar> = BTreeMap::new();
    for (&(a, b), x) in &omega.coeffs {
        for (&(c, d), y) in &omega.coeffs {
            if a == c || a == d || b == c || b == d {
                continue;
            }
            let (key, odd) = sort_with_sign([a, b, c, d]);
            let term = x * y;
            let entry = coeffs.entry(key).or_insert_with(Scalar::zero);
            if odd {
                *entry -= term;
            } else {
                *entry += term;
            }
        }
    }
    coeffs.retain(|_, c| !c.is_zero());
    FourVector {
        ambient: omega.ambient,
        coeffs,
    }
}

/// Minimal level `i + j` over the nonzero coefficients, and the positions
/// sitting at that level.
pub fn leading_level(omega: &Bivector) -> Result<(usize, Vec<(usize, usize)>), WedgeError> {
    let k0 = omega
        .coeffs
        .keys()
        .map(|&(i, j)| i + j)
        .min()
        .ok_or(WedgeError::ZeroBivector)?;
    let terms = omega
        .coeffs
        .keys()
        .filter(|&&(i, j)| i + j == k0)
        .copied()
        .collect();
    Ok((k0, terms))
}

/// Whether ω has a single nonzero coordinate on its leading level, as every
/// nonzero decomposable bivector does.
pub fn satisfies_leading_lemma(omega: &Bivector) -> Result<bool, WedgeError> {
    Ok(leading_level(omega)?.1.len() == 1)
}

/// Integer generators of a subspace `W ⊆ ∧²V`, `dim V = n + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubspaceGenerators {
    pub n: usize,
    pub m: usize,
    #[serde(serialize_with = "crate::serde_int::vec_vec")]
    pub rows: Vec<IntVector>,
}

impl SubspaceGenerators {
    /// Checks row lengths and linear independence.
    pub fn new(n: usize, rows: Vec<IntVector>) -> Result<Self, WedgeError> {
        let expected = pair_count(n + 1);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != expected {
                return Err(WedgeError::RowLength {
                    row,
                    expected,
                    got: r.len(),
                });
            }
        }
        let m = rows.len();
        let rank = exactlin::rank_bareiss(rows.clone());
        if rank != m {
            return Err(WedgeError::RankDeficient { rank, m });
        }
        Ok(SubspaceGenerators { n, m, rows })
    }

    pub fn ambient(&self) -> usize {
        self.n + 1
    }

    /// Number of coordinates per row, `C(n+1, 2)`.
    pub fn width(&self) -> usize {
        pair_count(self.n + 1)
    }

    pub fn bivector(&self, row: usize) -> Bivector {
        Bivector::from_int_coords(self.ambient(), &self.rows[row])
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        exactlin::member(&self.rows, v).expect("vector has the subspace's width")
    }
}

/// All maximal minors of `rows` (an `m × width` integer matrix), column
/// subsets in lexicographic order. No rank check.
pub fn maximal_minors(rows: &[IntVector], width: usize) -> Result<Vec<BigInt>, WedgeError> {
    let m = rows.len();
    let count = binomial(width as u64, m as u64);
    if count > MAX_MINORS {
        return Err(WedgeError::TooManyMinors { count });
    }
    let small: Option<Vec<Vec<i64>>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| x.to_i64().filter(|v| v.unsigned_abs() < 1 << 40))
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity(count as usize);
    let mut buf = vec![0i128; m * m];
    for cols in (0..width).combinations(m) {
        let fast = small.as_ref().and_then(|small| {
            for (i, r) in small.iter().enumerate() {
                for (jj, &c) in cols.iter().enumerate() {
                    buf[i * m + jj] = r[c] as i128;
                }
            }
            exactlin::det_i128(&mut buf, m)
        });
        let d = match fast {
            Some(d) => BigInt::from(d),
            None => {
                let sub = rows
                    .iter()
                    .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
                    .collect();
                exactlin::det_bareiss(sub)
            }
        };
        out.push(d);
    }
    Ok(out)
}

/// Plücker coordinates of the subspace spanned by the generator rows.
pub fn plucker_coordinates(s: &SubspaceGenerators) -> Result<Vec<BigInt>, WedgeError> {
    let rank = exactlin::rank_bareiss(s.rows.clone());
    if rank != s.m {
        return Err(WedgeError::RankDeficient { rank, m: s.m });
    }
    maximal_minors(&s.rows, s.width())
}

/// Matrix on ∧²V of the derivation `u∧w ↦ gu∧w + u∧gw` induced by `g ∈ gl(V)`.
pub fn wedge2_derivation(g: &Matrix) -> Matrix {
    assert!(g.is_square());
    let ambient = g.rows();
    let basis = pairs(ambient);
    let mut out = Matrix::zeros(basis.len(), basis.len());
    for (col, &(i, j)) in basis.iter().enumerate() {
        let mut image = Bivector::zero(ambient);
        for k in 0..ambient {
            image.add_term(k, j, g.get(k, i).clone());
            image.add_term(i, k, g.get(k, j).clone());
        }
        for (&(a, b), c) in image.coeffs() {
            out.set(pair_index(a, b, ambient), col, c.clone());
        }
    }
    out
}

/// Matrix of `∧²g`, i.e. `u∧w ↦ gu∧gw`.
pub fn wedge2_power(g: &Matrix) -> Matrix {
    assert!(g.is_square());
    let ambient = g.rows();
    let basis = pairs(ambient);
    let mut out = Matrix::zeros(basis.len(), basis.len());
    for (col, &(i, j)) in basis.iter().enumerate() {
        for (row, &(k, l)) in basis.iter().enumerate() {
            let v = g.get(k, i) * g.get(l, j) - g.get(l, i) * g.get(k, j);
            out.set(row, col, v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: i64) -> Scalar {
        Scalar::from_integer(BigInt::from(x))
    }

    fn biv(ambient: usize, terms: &[(usize, usize, i64)]) -> Bivector {
        let mut b = Bivector::zero(ambient);
        for &(i, j, c) in terms {
            b.add_term(i, j, s(c));
        }
        b
    }

    fn ints(v: &[i64]) -> IntVector {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn pair_index_is_lexicographic() {
        for ambient in 2..8 {
            for (idx, (i, j)) in pairs(ambient).into_iter().enumerate() {
                assert_eq!(pair_index(i, j, ambient), idx);
            }
        }
        assert_eq!(pair_count(6), 15);
    }

    #[test]
    fn wedge_self_examples() {
        assert!(wedge_self(&biv(4, &[(0, 1, 1)])).is_zero());
        let w = wedge_self(&biv(4, &[(0, 1, 1), (2, 3, 1)]));
        assert_eq!(w.coeffs().len(), 1);
        assert_eq!(w.coeff([0, 1, 2, 3]), s(2));
        let w = wedge_self(&biv(4, &[(0, 3, 1), (1, 2, -3)]));
        assert_eq!(w.coeffs().len(), 1);
        assert_eq!(w.coeff([0, 1, 2, 3]), s(-6));
    }

    #[test]
    fn add_term_reorders_with_sign() {
        let mut b = Bivector::zero(3);
        b.add_term(2, 0, s(5));
        b.add_term(1, 1, s(7));
        assert_eq!(b.coeff(0, 2), s(-5));
        assert_eq!(b.coeffs().len(), 1);
    }

    #[test]
    fn leading_level_examples() {
        let u = vec![s(1), s(1), s(0), s(0)];
        let w = vec![s(0), s(0), s(1), s(1)];
        let omega = Bivector::wedge(&u, &w);
        assert_eq!(omega.coeffs().len(), 4);
        assert_eq!(leading_level(&omega).unwrap(), (2, vec![(0, 2)]));
        let t = biv(4, &[(0, 3, 1), (1, 2, -3)]);
        assert_eq!(leading_level(&t).unwrap(), (3, vec![(0, 3), (1, 2)]));
        assert!(!satisfies_leading_lemma(&t).unwrap());
        assert_eq!(leading_level(&biv(4, &[(2, 3, 1)])).unwrap(), (5, vec![(2, 3)]));
        assert!(satisfies_leading_lemma(&biv(4, &[(0, 1, 1)])).unwrap());
        assert_eq!(
            leading_level(&Bivector::zero(4)),
            Err(WedgeError::ZeroBivector)
        );
    }

    #[test]
    fn plucker_examples() {
        let full = SubspaceGenerators::new(
            2,
            vec![ints(&[1, 2, 0]), ints(&[0, 1, 1]), ints(&[3, 0, 1])],
        )
        .unwrap();
        let expected = exactlin::det_bareiss(full.rows.clone());
        assert_eq!(plucker_coordinates(&full).unwrap(), vec![expected]);

        let plane = SubspaceGenerators::new(2, vec![ints(&[1, 0, 0]), ints(&[0, 1, 0])]).unwrap();
        assert_eq!(plucker_coordinates(&plane).unwrap(), ints(&[1, 0, 0]));

        let rows: Vec<IntVector> = (0..6)
            .map(|k| {
                let mut r = vec![BigInt::zero(); 15];
                r[k] = BigInt::from(1);
                r
            })
            .collect();
        let p5 = SubspaceGenerators::new(5, rows).unwrap();
        assert_eq!(plucker_coordinates(&p5).unwrap().len(), 5005);
    }

    #[test]
    fn rank_deficient_generators_rejected() {
        let err = SubspaceGenerators::new(2, vec![ints(&[1, 0, 0]), ints(&[2, 0, 0])]);
        assert_eq!(err, Err(WedgeError::RankDeficient { rank: 1, m: 2 }));
    }

    #[test]
    fn derivation_of_identity_is_twice_identity() {
        let d = wedge2_derivation(&Matrix::identity(4));
        assert_eq!(d, Matrix::identity(6).scale(&s(2)));
    }

    #[test]
    fn wedge2_power_of_diagonal() {
        let mut g = Matrix::identity(3);
        g.set(0, 0, s(2));
        g.set(2, 2, s(5));
        let w = wedge2_power(&g);
        // v01 -> 2, v02 -> 10, v12 -> 5
        assert_eq!(w.get(0, 0), &s(2));
        assert_eq!(w.get(1, 1), &s(10));
        assert_eq!(w.get(2, 2), &s(5));
        assert!(w.is_diagonal());
    }
}

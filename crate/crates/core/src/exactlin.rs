//! Exact linear algebra over ℚ and ℤ.
//!
//! Everything here is exact: rationals are reduced `BigRational`s, integer
//! elimination is fraction-free (Bareiss), and the modular rank used for very
//! wide matrices can be confirmed by forcing the integer route.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Arbitrary precision rational, always kept reduced with a positive denominator.
pub type Scalar = BigRational;

/// Dense integer vector.
pub type IntVector = Vec<BigInt>;

/// Matrices wider than this use the modular rank under [`RankStrategy::Auto`].
pub const MODULAR_RANK_WIDTH: usize = 1000;

/// Number of primes used by the modular rank.
pub const MODULAR_RANK_PRIMES: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RankStrategy {
    /// Fraction-free elimination, unless the matrix is wider than
    /// [`MODULAR_RANK_WIDTH`] columns, in which case the modular rank is used.
    #[default]
    Auto,
    /// Always fraction-free integer elimination.
    Exact,
    /// Always the multi-modular rank.
    Modular,
}

/// Dense row-major matrix of [`Scalar`]s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self, LinAlgError> {
        if entries.len() != rows * cols {
            return Err(LinAlgError::DimensionMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Build from integer rows. All rows must have the same length.
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self, LinAlgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LinAlgError::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            entries.extend(row.iter().map(|&x| Scalar::from_integer(BigInt::from(x))));
        }
        Matrix::new(rows.len(), cols, entries)
    }

    pub fn from_int_rows(rows: &[IntVector], cols: usize) -> Result<Self, LinAlgError> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LinAlgError::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            entries.extend(row.iter().cloned().map(Scalar::from_integer));
        }
        Matrix::new(rows.len(), cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.entries[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, LinAlgError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, LinAlgError> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &Matrix,
        f: impl Fn(&Scalar, &Scalar) -> Scalar,
    ) -> Result<Matrix, LinAlgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn scale(&self, factor: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * factor).collect(),
        }
    }

    /// `self · v` for a column vector `v`.
    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>, LinAlgError> {
        if v.len() != self.cols {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        let mut out = vec![Scalar::zero(); self.rows];
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, slot) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *slot += a * x;
                }
            }
        }
        Ok(out)
    }

    /// `self · v` for an integer column vector. Only meaningful for integral
    /// matrices; the result is truncated to integers otherwise.
    pub fn apply_int(&self, v: &[BigInt]) -> Result<IntVector, LinAlgError> {
        let image = self.apply(&to_scalars(v))?;
        debug_assert!(image.iter().all(|x| x.is_integer()));
        Ok(image.into_iter().map(|x| x.to_integer()).collect())
    }

    /// Submatrix keeping the given columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, columns.len());
        for i in 0..self.rows {
            for (jj, &j) in columns.iter().enumerate() {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    /// Each row scaled by the lcm of its denominators.
    pub fn to_integer_rows(&self) -> Vec<IntVector> {
        (0..self.rows).map(|i| clear_denominators(self.row(i))).collect()
    }
}

pub fn to_scalars(v: &[BigInt]) -> Vec<Scalar> {
    v.iter().cloned().map(Scalar::from_integer).collect()
}

/// Multiply by the lcm of the denominators.
pub fn clear_denominators(v: &[Scalar]) -> IntVector {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect()
}

/// Divide out the content and make the first nonzero entry positive.
pub fn primitive(v: &[BigInt]) -> IntVector {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    let negate = v.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative);
    v.iter()
        .map(|x| {
            let y = x / &g;
            if negate {
                -y
            } else {
                y
            }
        })
        .collect()
}

/// Rank over ℚ with the default strategy.
pub fn rank(m: &Matrix) -> usize {
    rank_with(m, RankStrategy::Auto)
}

pub fn rank_with(m: &Matrix, strategy: RankStrategy) -> usize {
    int_rank_with(&m.to_integer_rows(), m.cols(), strategy)
}

/// Rank of an integer matrix given as rows of length `cols`.
pub fn int_rank_with(rows: &[IntVector], cols: usize, strategy: RankStrategy) -> usize {
    let modular = match strategy {
        RankStrategy::Auto => cols > MODULAR_RANK_WIDTH,
        RankStrategy::Exact => false,
        RankStrategy::Modular => true,
    };
    if modular {
        rank_modular(rows, &random_primes(MODULAR_RANK_PRIMES, 0x7a6e_676f))
    } else {
        rank_bareiss(rows.to_vec())
    }
}

/// Fraction-free (Bareiss) elimination; returns the rank.
pub fn rank_bareiss(mut a: Vec<IntVector>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        for row in bottom.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..cols {
                let v = pivot * &row[j] - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot.clone();
        r += 1;
    }
    r
}

/// Gaussian elimination over ℚ; an independent route to [`rank_bareiss`].
pub fn rank_rational(m: &Matrix) -> usize {
    rref(m).1.len()
}

/// Reduced row echelon form over ℚ together with the pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..a.cols {
                a.entries.swap(p * a.cols + j, r * a.cols + j);
            }
        }
        let inv = a.get(r, c).recip();
        for j in c..a.cols {
            let v = a.get(r, j) * &inv;
            a.set(r, j, v);
        }
        for i in 0..a.rows {
            if i == r || a.get(i, c).is_zero() {
                continue;
            }
            let factor = a.get(i, c).clone();
            for j in c..a.cols {
                let v = a.get(i, j) - &factor * a.get(r, j);
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Exact determinant.
pub fn det(m: &Matrix) -> Result<Scalar, LinAlgError> {
    if !m.is_square() {
        return Err(LinAlgError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    // det(D·M) = Π d_i · det(M) where D scales each row to integers.
    let mut scale = BigInt::one();
    let rows: Vec<IntVector> = (0..m.rows)
        .map(|i| {
            let row = m.row(i);
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= &lcm;
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect();
    Ok(Scalar::new(det_bareiss(rows), scale))
}

/// Bareiss determinant of a square integer matrix.
pub fn det_bareiss(mut a: Vec<IntVector>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = !sign;
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            for j in k + 1..n {
                let v = &pivot_row[k] * &row[j] - &row[k] * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = pivot_row[k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Bareiss determinant in `i128`; `None` on overflow.
///
/// `a` is a row-major `n × n` scratch buffer and is destroyed.
pub fn det_i128(a: &mut [i128], n: usize) -> Option<i128> {
    debug_assert_eq!(a.len(), n * n);
    if n == 0 {
        return Some(1);
    }
    let mut negate = false;
    let mut prev: i128 = 1;
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&i| a[i * n + k] != 0) else {
            return Some(0);
        };
        if p != k {
            for j in 0..n {
                a.swap(p * n + j, k * n + j);
            }
            negate = !negate;
        }
        let pivot = a[k * n + k];
        for i in k + 1..n {
            let lead = a[i * n + k];
            for j in k + 1..n {
                let v = pivot
                    .checked_mul(a[i * n + j])?
                    .checked_sub(lead.checked_mul(a[k * n + j])?)?;
                a[i * n + j] = v / prev;
            }
        }
        prev = pivot;
    }
    let d = a[n * n - 1];
    Some(if negate { -d } else { d })
}

/// Basis of the right null space.
///
/// Free columns are taken in ascending order; each vector is primitive with a
/// positive first nonzero entry.
pub fn kernel_basis(m: &Matrix) -> Vec<IntVector> {
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Scalar::zero(); m.cols()];
            v[f] = Scalar::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(row, f).clone();
            }
            primitive(&clear_denominators(&v))
        })
        .collect()
}

/// Whether `v` lies in the span of `basis`, decided by comparing ranks.
pub fn member(basis: &[IntVector], v: &[BigInt]) -> Result<bool, LinAlgError> {
    let dim = v.len();
    if let Some(bad) = basis.iter().find(|b| b.len() != dim) {
        return Err(LinAlgError::DimensionMismatch {
            expected: dim,
            got: bad.len(),
        });
    }
    let before = rank_bareiss(basis.to_vec());
    let mut stacked = basis.to_vec();
    stacked.push(v.to_vec());
    Ok(rank_bareiss(stacked) == before)
}

// ---------------------------------------------------------------------------
// Modular arithmetic

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller–Rabin for all `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `count` distinct primes in `[2^61, 2^62)`, reproducible from `seed`.
pub fn random_primes(count: usize, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut primes: Vec<u64> = Vec::with_capacity(count);
    while primes.len() < count {
        let mut candidate = rng.gen_range(1u64 << 61..1u64 << 62) | 1;
        while !is_prime_u64(candidate) {
            candidate += 2;
        }
        if !primes.contains(&candidate) {
            primes.push(candidate);
        }
    }
    primes
}

pub fn reduce_mod(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p))
        .to_u64()
        .expect("residue fits in u64")
}

/// Rank of an integer matrix modulo a prime.
pub fn rank_mod_p(rows: &[IntVector], p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|x| reduce_mod(x, p)).collect())
        .collect();
    rank_mod_p_reduced(&mut a, p)
}

/// Rank of an already reduced matrix modulo `p`; `a` is destroyed.
pub fn rank_mod_p_reduced(a: &mut [Vec<u64>], p: u64) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = inv_mod(a[r][c], p);
        for j in c..cols {
            a[r][j] = mul_mod(a[r][j], inv, p);
        }
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom.iter_mut() {
            let f = row[c];
            if f == 0 {
                continue;
            }
            for j in c..cols {
                let sub = mul_mod(f, pivot_row[j], p);
                row[j] = (row[j] + p - sub) % p;
            }
        }
        r += 1;
    }
    r
}

/// Maximum of the ranks modulo each prime. Reduction can only lower the
/// rank, so this is a lower bound on the rational rank that is exact unless
/// every prime divides the same nonzero minor.
pub fn rank_modular(rows: &[IntVector], primes: &[u64]) -> usize {
    primes
        .iter()
        .map(|&p| rank_mod_p(rows, p))
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> Matrix {
        Matrix::from_i64_rows(rows).unwrap()
    }

    fn ints(v: &[i64]) -> IntVector {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&Matrix::identity(3)), 3);
        assert_eq!(rank(&Matrix::zeros(2, 2)), 0);
        assert_eq!(rank(&m(&[vec![1, 2], vec![2, 4]])), 1);
    }

    #[test]
    fn det_examples() {
        assert_eq!(det(&Matrix::identity(4)).unwrap(), Scalar::one());
        assert_eq!(
            det(&m(&[vec![1, 2], vec![3, 4]])).unwrap(),
            Scalar::from_integer(BigInt::from(-2))
        );
        assert!(det(&m(&[vec![1, 2, 3], vec![4, 5, 6], vec![1, 2, 3]]))
            .unwrap()
            .is_zero());
        assert!(matches!(
            det(&Matrix::zeros(2, 3)),
            Err(LinAlgError::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn det_of_rational_matrix() {
        let half = Scalar::new(BigInt::from(1), BigInt::from(2));
        let a = Matrix::new(
            2,
            2,
            vec![half.clone(), Scalar::one(), Scalar::zero(), half.clone()],
        )
        .unwrap();
        assert_eq!(det(&a).unwrap(), Scalar::new(BigInt::from(1), BigInt::from(4)));
    }

    #[test]
    fn det_i128_matches_bareiss() {
        let rows = vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]];
        let mut flat: Vec<i128> = rows.iter().flatten().map(|&x| x as i128).collect();
        assert_eq!(det_i128(&mut flat, 3), Some(4));
        let mut singular = vec![0i128, 1, 0, 2];
        assert_eq!(det_i128(&mut singular, 2), Some(0));
        let mut huge = vec![i128::MAX / 2, 3, 5, i128::MAX / 3];
        assert_eq!(det_i128(&mut huge, 2), None);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&Matrix::identity(3)).is_empty());
        assert_eq!(kernel_basis(&m(&[vec![1, -1]])), vec![ints(&[1, 1])]);
        assert_eq!(
            kernel_basis(&Matrix::zeros(2, 3)),
            vec![ints(&[1, 0, 0]), ints(&[0, 1, 0]), ints(&[0, 0, 1])]
        );
        // first nonzero entry positive, content one
        assert_eq!(kernel_basis(&m(&[vec![3, 1]])), vec![ints(&[1, -3])]);
    }

    #[test]
    fn member_examples() {
        let e0 = ints(&[1, 0]);
        let e1 = ints(&[0, 1]);
        assert!(member(&[e0.clone()], &e0).unwrap());
        assert!(!member(&[e0.clone()], &e1).unwrap());
        assert!(member(&[ints(&[1, 1]), e1.clone()], &e0).unwrap());
        assert!(member(&[ints(&[1, 0, 0])], &e0).is_err());
    }

    #[test]
    fn modular_rank_agrees_on_small_cases() {
        let rows = vec![ints(&[1, 2, 3]), ints(&[2, 4, 6]), ints(&[0, 1, 1])];
        let primes = random_primes(3, 1);
        assert_eq!(rank_modular(&rows, &primes), 2);
        assert_eq!(rank_bareiss(rows), 2);
        for p in primes {
            assert!(p >= 1 << 61 && p < 1 << 62 && is_prime_u64(p));
        }
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime_u64(18_446_744_073_709_551_557));
        assert!(!is_prime_u64(3_215_031_751));
    }
}

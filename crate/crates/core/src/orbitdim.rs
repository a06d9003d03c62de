//! Dimension of the orbit of a subspace `W₀ ⊆ ∧²V` under `PGL(V)`.
//!
//! The orbit map `g ↦ Plücker(∧²g · W₀)` is differentiated at the identity in
//! every elementary direction `E_{i,j}` of `gl(V)`. By the product rule the
//! derivative of each maximal minor is the sum, over the generator rows, of
//! the minor with that row replaced by its image under the induced
//! derivation. The rank of the stacked derivative rows is the dimension of
//! the tangent space of the affine cone over the orbit; one direction of it
//! is radial (the identity scales every coordinate), so the projective orbit
//! dimension is one less.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exactlin::{self, IntVector, Matrix, RankStrategy, Scalar};
use crate::wedge::{self, SubspaceGenerators, WedgeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbitError {
    #[error("index ({i}, {j}) out of range for n = {n}")]
    IndexOutOfRange { i: usize, j: usize, n: usize },
    #[error("derivation is {got}x{got}, generators have {expected} coordinates")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Wedge(#[from] WedgeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub n: usize,
    pub m: usize,
    /// Rank of the derivative in affine Plücker coordinates.
    pub affine_rank: usize,
    pub orbit_dim: usize,
    pub stabilizer_dim: usize,
    pub rank_method: &'static str,
}

/// `ρ(E_{i,j})` on `∧²V` (`dim V = n + 1`), where `E_{i,j} v_j = v_i`.
pub fn derivation_on_wedge2(i: usize, j: usize, n: usize) -> Result<Matrix, OrbitError> {
    if i > n || j > n {
        return Err(OrbitError::IndexOutOfRange { i, j, n });
    }
    let mut e = Matrix::zeros(n + 1, n + 1);
    e.set(i, j, Scalar::from_integer(BigInt::from(1)));
    Ok(wedge::wedge2_derivation(&e))
}

/// Derivative of the Plücker vector of `s` in the direction of the
/// derivation `d` on `∧²V`.
pub fn plucker_derivative_row(
    s: &SubspaceGenerators,
    d: &Matrix,
) -> Result<Vec<BigInt>, OrbitError> {
    let width = s.width();
    if !d.is_square() || d.rows() != width {
        return Err(OrbitError::DimensionMismatch {
            expected: width,
            got: d.rows(),
        });
    }
    let count = wedge::binomial(width as u64, s.m as u64) as usize;
    let mut total = vec![BigInt::zero(); count];
    for k in 0..s.m {
        let image = d.apply_int(&s.rows[k]).expect("width checked above");
        if image.iter().all(Zero::is_zero) {
            continue;
        }
        let mut replaced: Vec<IntVector> = s.rows.clone();
        replaced[k] = image;
        let minors = wedge::maximal_minors(&replaced, width)?;
        for (acc, x) in total.iter_mut().zip(minors) {
            *acc += x;
        }
    }
    Ok(total)
}

/// All `(n+1)²` derivative rows `p_{i,j}`, ordered by `(i, j)`.
pub fn derivative_matrix(s: &SubspaceGenerators) -> Result<Vec<Vec<BigInt>>, OrbitError> {
    let n = s.n;
    let directions: Vec<(usize, usize)> = (0..=n)
        .flat_map(|i| (0..=n).map(move |j| (i, j)))
        .collect();
    directions
        .par_iter()
        .map(|&(i, j)| plucker_derivative_row(s, &derivation_on_wedge2(i, j, n)?))
        .collect()
}

pub fn orbit_dimension(s: &SubspaceGenerators) -> Result<OrbitReport, OrbitError> {
    orbit_dimension_with(s, RankStrategy::Auto)
}

pub fn orbit_dimension_with(
    s: &SubspaceGenerators,
    strategy: RankStrategy,
) -> Result<OrbitReport, OrbitError> {
    let rank = exactlin::rank_bareiss(s.rows.clone());
    if rank != s.m {
        return Err(WedgeError::RankDeficient { rank, m: s.m }.into());
    }
    let rows = derivative_matrix(s)?;
    let cols = rows.first().map_or(0, Vec::len);
    let modular = match strategy {
        RankStrategy::Auto => cols > exactlin::MODULAR_RANK_WIDTH,
        RankStrategy::Exact => false,
        RankStrategy::Modular => true,
    };
    let affine_rank = exactlin::int_rank_with(&rows, cols, strategy);
    // the identity direction is never zero, so affine_rank >= 1
    let orbit_dim = affine_rank - 1;
    let group_dim = (s.n + 1) * (s.n + 1) - 1;
    Ok(OrbitReport {
        n: s.n,
        m: s.m,
        affine_rank,
        orbit_dim,
        stabilizer_dim: group_dim - orbit_dim,
        rank_method: if modular { "modular" } else { "exact" },
    })
}

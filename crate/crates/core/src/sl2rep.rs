//! `SⁿU` and `∧²SⁿU` as representations of sl₂.
//!
//! On `SⁿU` we use the monomial basis `v_k = x^{n-k} y^k`. The lowering
//! operator acts as `Y(v_k) = (n-k) v_{k+1}`, the raising operator as
//! `X(v_k) = k v_{k-1}` and the torus as `H(v_k) = (n-2k) v_k`; with these
//! conventions `[X, Y] = H`. Matrices act on column vectors, so column `k`
//! holds the image of `v_k`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::exactlin::{self, IntVector, Matrix, Scalar};
use crate::wedge::{self, SubspaceGenerators};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Sl2Error {
    #[error("n must be at least {min}, got {n}")]
    DegreeTooSmall { n: usize, min: usize },
    #[error("bracket relation {0} does not hold")]
    BracketFailed(&'static str),
    #[error("H is not diagonal")]
    NonDiagonalTorus,
    #[error("H has a non-integral eigenvalue")]
    NonIntegralWeight,
    #[error("highest weight vector of negative weight {0}")]
    NegativeHighestWeight(i64),
    #[error("components account for dimension {got}, representation has {expected}")]
    DimensionCount { expected: usize, got: usize },
}

/// Raising, lowering and torus generators acting on a representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sl2Action {
    pub dim: usize,
    pub x: Matrix,
    pub y: Matrix,
    pub h: Matrix,
}

impl Sl2Action {
    /// Checks `[H,X] = 2X`, `[H,Y] = -2Y` and `[X,Y] = H`.
    pub fn check_brackets(&self) -> Result<(), Sl2Error> {
        let two = Scalar::from_integer(BigInt::from(2));
        let bracket = |a: &Matrix, b: &Matrix| {
            a.mul(b)
                .and_then(|ab| b.mul(a).and_then(|ba| ab.sub(&ba)))
                .expect("generators are square of equal size")
        };
        if bracket(&self.h, &self.x) != self.x.scale(&two) {
            return Err(Sl2Error::BracketFailed("[H,X] = 2X"));
        }
        if bracket(&self.h, &self.y) != self.y.scale(&-two) {
            return Err(Sl2Error::BracketFailed("[H,Y] = -2Y"));
        }
        if bracket(&self.x, &self.y) != self.h {
            return Err(Sl2Error::BracketFailed("[X,Y] = H"));
        }
        Ok(())
    }

    /// Diagonal of `H` as integers.
    pub fn weights(&self) -> Result<Vec<i64>, Sl2Error> {
        if !self.h.is_diagonal() {
            return Err(Sl2Error::NonDiagonalTorus);
        }
        (0..self.dim)
            .map(|i| {
                let w = self.h.get(i, i);
                if !w.is_integer() {
                    return Err(Sl2Error::NonIntegralWeight);
                }
                w.to_integer()
                    .try_into()
                    .map_err(|_| Sl2Error::NonIntegralWeight)
            })
            .collect()
    }
}

/// Weight → basis indices of that weight, indices ascending.
pub type WeightSpaceMap = BTreeMap<i64, Vec<usize>>;

/// An irreducible summand `S^λU` found inside a representation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IrredComponent {
    pub highest_weight: usize,
    #[serde(serialize_with = "crate::serde_int::vec")]
    pub highest_weight_vector: IntVector,
    /// `w, Yw, …, Y^λ w` for the highest weight vector `w`.
    #[serde(serialize_with = "crate::serde_int::vec_vec")]
    pub basis: Vec<IntVector>,
}

impl IrredComponent {
    pub fn dim(&self) -> usize {
        self.highest_weight + 1
    }
}

fn int(x: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(x))
}

/// The action on `SⁿU` in the monomial basis.
pub fn action_on_symn(n: usize) -> Result<Sl2Action, Sl2Error> {
    if n == 0 {
        return Err(Sl2Error::DegreeTooSmall { n, min: 1 });
    }
    let dim = n + 1;
    let mut x = Matrix::zeros(dim, dim);
    let mut y = Matrix::zeros(dim, dim);
    let mut h = Matrix::zeros(dim, dim);
    for k in 0..dim {
        let ki = k as i64;
        let ni = n as i64;
        h.set(k, k, int(ni - 2 * ki));
        if k < n {
            y.set(k + 1, k, int(ni - ki));
        }
        if k > 0 {
            x.set(k - 1, k, int(ki));
        }
    }
    Ok(Sl2Action { dim, x, y, h })
}

/// The induced action on `∧²` of the representation, lex `v_{i,j}` basis.
pub fn induced_wedge2_action(a: &Sl2Action) -> Sl2Action {
    Sl2Action {
        dim: wedge::pair_count(a.dim),
        x: wedge::wedge2_derivation(&a.x),
        y: wedge::wedge2_derivation(&a.y),
        h: wedge::wedge2_derivation(&a.h),
    }
}

/// The action on `∧²SⁿU`.
pub fn wedge2_symn(n: usize) -> Result<Sl2Action, Sl2Error> {
    Ok(induced_wedge2_action(&action_on_symn(n)?))
}

pub fn weight_spaces(a: &Sl2Action) -> Result<WeightSpaceMap, Sl2Error> {
    let mut map = WeightSpaceMap::new();
    for (i, w) in a.weights()?.into_iter().enumerate() {
        map.entry(w).or_default().push(i);
    }
    Ok(map)
}

/// Decomposition into irreducibles, by descending highest weight.
///
/// Highest weight vectors of weight `λ` are the kernel of `X` restricted to
/// the `λ`-weight space.
pub fn decompose_irreducibles(a: &Sl2Action) -> Result<Vec<IrredComponent>, Sl2Error> {
    a.check_brackets()?;
    let spaces = weight_spaces(a)?;
    let mut components = Vec::new();
    for (&weight, indices) in spaces.iter().rev() {
        let restricted = a.x.select_columns(indices);
        for kernel_vec in exactlin::kernel_basis(&restricted) {
            if weight < 0 {
                return Err(Sl2Error::NegativeHighestWeight(weight));
            }
            let mut hw = vec![BigInt::zero(); a.dim];
            for (&idx, c) in indices.iter().zip(kernel_vec) {
                hw[idx] = c;
            }
            let lambda = weight as usize;
            let mut basis = Vec::with_capacity(lambda + 1);
            let mut current = hw.clone();
            for _ in 0..=lambda {
                let next = a.y.apply_int(&current).expect("vector has the action's dimension");
                basis.push(std::mem::replace(&mut current, next));
            }
            components.push(IrredComponent {
                highest_weight: lambda,
                highest_weight_vector: hw,
                basis,
            });
        }
    }
    let total: usize = components.iter().map(IrredComponent::dim).sum();
    if total != a.dim {
        return Err(Sl2Error::DimensionCount {
            expected: a.dim,
            got: total,
        });
    }
    Ok(components)
}

/// `m = (n-1)(n-2)/2`, the dimension of the invariant Tango subspace.
pub fn tango_dimension(n: usize) -> usize {
    (n - 1) * (n - 2) / 2
}

/// The SL(2)-invariant subspace `W ⊆ ∧²SⁿU`: every irreducible summand
/// except the top one `S^{2(n-1)}U`.
///
/// Rows are the Y-orbits of the highest weight vectors, by descending
/// component weight and then descending H-weight, each made primitive.
pub fn construct_tango_subspace(n: usize) -> Result<SubspaceGenerators, Sl2Error> {
    if n < 3 {
        return Err(Sl2Error::DegreeTooSmall { n, min: 3 });
    }
    let components = decompose_irreducibles(&wedge2_symn(n)?)?;
    let rows: Vec<IntVector> = components
        .iter()
        .skip(1)
        .flat_map(|c| c.basis.iter().map(|v| exactlin::primitive(v)))
        .collect();
    debug_assert_eq!(rows.len(), tango_dimension(n));
    Ok(SubspaceGenerators::new(n, rows).expect("distinct weight vectors are independent"))
}

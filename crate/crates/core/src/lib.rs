//! Exact computations around SL(2)-invariant Tango bundles on projective space.
//!
//! * [`exactlin`]: exact rational and integer linear algebra.
//! * [`sl2rep`]: `SⁿU` and `∧²SⁿU` as sl₂-representations, and the invariant
//!   subspace `W` avoiding the Grassmannian of lines.
//! * [`wedge`]: bivectors, the `ω∧ω` test and Plücker coordinates.
//! * [`orbitdim`]: orbit dimensions of subspaces of `∧²V` under `PGL(V)`.
//! * [`cert`]: certificates that `W` contains no decomposable bivector.
//! * [`bundlecalc`]: split bundles, Chern classes, line bundle cohomology and
//!   weighted Tango bundles.
//! * [`seqdsl`]: a small scripting language over `bundlecalc`.

pub mod bundlecalc;
pub mod cert;
pub mod exactlin;
pub mod orbitdim;
pub mod seqdsl;
mod serde_int;
pub mod sl2rep;
pub mod wedge;

pub use exactlin::{IntVector, Matrix, RankStrategy, Scalar};
pub use wedge::{Bivector, FourVector, SubspaceGenerators};

//! Exact computations with the truncated group ring of a surface with one
//! boundary component, its symplectic and chord-diagram invariants, and
//! Johnson derivations.
//!
//! The algebra is generic over an exact [`Scalar`] field; the aliases below fix
//! it to arbitrary-precision rationals, which is what every verification uses.

pub mod chord;
pub mod error;
pub mod group_ring;
pub mod johnson;
pub mod limits;
pub mod linalg;
pub mod mcg;
pub mod scalar;
pub mod symplectic;
pub mod tensor;

pub use error::{Error, Result};
pub use scalar::{Fp, Scalar};

/// Arbitrary-precision rationals.
pub type Rational = num_rational::BigRational;
/// Sparse rational matrix.
pub type RatMatrix = linalg::SparseMatrix<Rational>;
/// Rational subspace in canonical echelon form.
pub type RatSubspace = linalg::Subspace<Rational>;
/// Rational element of the (truncated) tensor algebra.
pub type Poly = tensor::TensorPoly<Rational>;

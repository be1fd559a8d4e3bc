//! Exact rational linear algebra.

mod matrix;
pub mod rational;

pub use matrix::{
    det, inertia, inertia_with_pivots, nullspace_basis, principal_submatrix, rank, Inertia,
    RatMatrix,
};
pub use num_rational::BigRational;

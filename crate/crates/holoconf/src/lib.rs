//! Holomorphic tensor calculus for conformal complex 3- and 4-manifolds.

pub mod catalog;
pub mod conformal3;
pub mod core_tensor;
pub mod error;
pub mod expr_ad;
pub mod geodesic_jacobi;
pub mod isotropic;
pub mod linalg;
pub mod surfaces_projective;
mod taylor;

pub use error::{Error, Result};

//! Exact dense linear algebra over the rationals.

mod matrix;
mod poly;
mod subspace;

pub use matrix::{Matrix, Spectrum};
pub use poly::{char_poly, rational_roots};
pub use subspace::{unit_vector, Subspace};

use crate::error::Result;
use crate::scalar::Scalar;

pub fn eigenspace(m: &Matrix, theta: &Scalar) -> Result<Subspace> {
    Subspace::eigenspace(m, theta)
}

/// Sum of subspaces of `Q^ambient`.
pub fn subspace_sum(ambient: usize, parts: &[Subspace]) -> Result<Subspace> {
    Subspace::sum_of(ambient, parts)
}

pub fn subspace_intersect(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    a.intersect(b)
}

pub fn is_direct_decomposition(ambient: usize, parts: &[Subspace]) -> bool {
    Subspace::is_direct_decomposition(ambient, parts)
}

pub fn map_subspace(m: &Matrix, s: &Subspace) -> Result<Subspace> {
    s.image(m)
}

//! Lie algebra structure on `Q^n`, the tuple notation and the built-in catalog.

mod algebra;
pub mod catalog;
mod subspace;
mod tuple;

pub use algebra::{Basis, LieAlgebra};
pub use catalog::{catalog, Catalog, CatalogEntry};
pub use subspace::Subspace;
pub use tuple::{parse_tuple, parse_tuple_named, serialize_tuple};

/// The `i`-th standard basis vector of `Q^n` (zero-based).
pub fn basis_vector(n: usize, i: usize) -> crate::linalg::RatVector {
    use num_traits::{One, Zero};
    let mut v = vec![crate::linalg::Rational::zero(); n];
    v[i] = crate::linalg::Rational::one();
    v
}

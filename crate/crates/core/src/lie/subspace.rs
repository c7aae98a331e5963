use serde::Serialize;

use crate::linalg::{in_span, span_basis, span_rank, RatVector};

/// Linear subspace of `Q^n` held as a reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subspace {
    pub ambient_dim: usize,
    #[serde(serialize_with = "crate::linalg::rational::as_str::vecs")]
    pub basis: Vec<RatVector>,
}

impl Subspace {
    /// Span of arbitrary vectors; dependent ones are discarded.
    pub fn span(ambient_dim: usize, vectors: &[RatVector]) -> Self {
        Self {
            ambient_dim,
            basis: span_basis(vectors),
        }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim).map(|i| super::basis_vector(ambient_dim, i)).collect();
        Self { ambient_dim, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, v: &[crate::linalg::Rational]) -> bool {
        in_span(&self.basis, v)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient_dim, &all)
    }

    /// `dim(U ∩ W) = dim U + dim W - dim(U + W)`.
    pub fn intersection_dim(&self, other: &Subspace) -> usize {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        self.dim() + other.dim() - span_rank(&all)
    }
}

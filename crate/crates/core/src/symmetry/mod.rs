//! Distribution of symmetry: the linear system whose kernel consists of the
//! left-invariant fields `Y` with `g([X,Y],Z) + g([X,Z],Y) + g([Y,Z],X) = 0`.

pub mod theorems;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::{LieAlgebra, Subspace};
use crate::linalg::{rational::as_str, span_basis, RatMatrix, RatVector, Rational};
use crate::moduli::SigmaPoint;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetryResult {
    pub index: usize,
    /// Reduced row-echelon basis of `s_e`.
    #[serde(serialize_with = "as_str::vecs")]
    pub basis: Vec<RatVector>,
    /// Whether `s_e` lies in the center (vacuously true when the index is 0).
    pub central: bool,
    pub central_intersection_dim: usize,
}

impl SymmetryResult {
    pub fn subspace(&self) -> Subspace {
        Subspace::span(self.basis.first().map_or(6, Vec::len), &self.basis)
    }
}

/// `g([e_a, e_b], e_c)`.
fn gb(alg: &LieAlgebra, g: &RatMatrix, a: usize, b: usize, c: usize) -> Rational {
    (0..alg.dim()).fold(Rational::zero(), |acc, l| {
        let k = alg.constant(a, b, l);
        if k.is_zero() {
            acc
        } else {
            acc + k * &g[(l, c)]
        }
    })
}

/// One row per pair `X = e_i, Z = e_k` with `i < k`, linear in `y_1, ..., y_n`.
pub fn symmetry_system(alg: &LieAlgebra, g: &RatMatrix) -> RatMatrix {
    let n = alg.dim();
    let mut m = RatMatrix::zeros(n * (n - 1) / 2, n);
    let mut row = 0;
    for i in 0..n {
        for k in (i + 1)..n {
            for y in 0..n {
                m[(row, y)] = gb(alg, g, i, y, k) + gb(alg, g, i, k, y) + gb(alg, g, y, k, i);
            }
            row += 1;
        }
    }
    m
}

/// Full system including `i = k` and `i > k`; kept for checking that those rows add nothing.
pub fn symmetry_system_full(alg: &LieAlgebra, g: &RatMatrix) -> RatMatrix {
    let n = alg.dim();
    let mut m = RatMatrix::zeros(n * n, n);
    for i in 0..n {
        for k in 0..n {
            for y in 0..n {
                m[(i * n + k, y)] = gb(alg, g, i, y, k) + gb(alg, g, i, k, y) + gb(alg, g, y, k, i);
            }
        }
    }
    m
}

pub fn index_of_symmetry(alg: &LieAlgebra, g: &RatMatrix) -> Result<SymmetryResult> {
    if g.rows() != alg.dim() || !g.is_positive_definite() {
        return Err(Error::InvalidMetric("metric must be symmetric positive definite".into()));
    }
    let basis = span_basis(&symmetry_system(alg, g).kernel_basis());
    let s = Subspace::span(alg.dim(), &basis);
    let z = alg.center();
    let central = z.contains_subspace(&s);
    Ok(SymmetryResult {
        index: basis.len(),
        central_intersection_dim: s.intersection_dim(&z),
        basis,
        central,
    })
}

/// The 3x3 matrix whose rank determines the index on h28.
pub fn h28_a_matrix(p: &SigmaPoint) -> Result<RatMatrix> {
    if p.pattern.algebra != "h28" || p.pattern.len() != 10 {
        return Err(Error::Unsupported("the A matrix is defined for h28 points only".into()));
    }
    let s = |k: usize| &p.values[k];
    let two = Rational::from_integer(2.into());
    let s1s2_s3s4 = s(1) * s(2) + s(3) * s(4);
    let a = s(5) * s(5) * s(6) + s(3) * s(5) * s(8) - &s1s2_s3s4 * s(9);
    let b = s(5) * s(5) * s(7) + s(4) * s(5) * s(8) - (s(2) * s(2) + s(4) * s(4) + s(3) * s(5)) * s(9);
    let c = s(4) * s(5) * s(6) + s(3) * s(5) * s(7) - (s(0) * s(0) + s(1) * s(1) + s(3) * s(3)) * s(9);
    let alpha = &two * (s(5) * s(5) * s(8) - s(4) * s(5) * s(9));
    let beta = &two * (s(4) * s(5) * s(7) - &s1s2_s3s4 * s(9));
    let gamma = &two * s(3) * s(5) * s(6);
    RatMatrix::from_rows(vec![
        vec![a.clone(), b.clone(), alpha],
        vec![c.clone(), beta, b],
        vec![gamma, c, a],
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::parse_tuple;

    #[test]
    fn abelian_system_vanishes() {
        let a = parse_tuple("(0,0,0,0,0,0)").unwrap();
        assert!(symmetry_system(&a, &RatMatrix::identity(6)).is_zero());
        assert_eq!(index_of_symmetry(&a, &RatMatrix::identity(6)).unwrap().index, 6);
    }
}

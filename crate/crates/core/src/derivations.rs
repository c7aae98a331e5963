//! The derivation algebra, its solvability and triangular type, and skew derivations.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::{LieAlgebra, Subspace};
use crate::linalg::{span_basis, RatMatrix, RatVector, Rational};

/// Basis of `Der(h)` together with the flags derived from it.
#[derive(Clone, Debug)]
pub struct DerivationSpace {
    pub algebra: LieAlgebra,
    pub basis: Vec<RatMatrix>,
    pub dim: usize,
    pub triangular_in_standard_basis: bool,
    pub diag_dim: usize,
}

/// Three-way split of nilpotent algebras by their derivations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Classification {
    #[serde(rename = "not_csla")]
    NotCsla,
    #[serde(rename = "csla_not_triangular")]
    CslaNotTriangular,
    #[serde(rename = "cslat")]
    Cslat,
}

impl Classification {
    pub fn is_csla(self) -> bool {
        self != Classification::NotCsla
    }

    pub fn is_cslat(self) -> bool {
        self == Classification::Cslat
    }
}

/// Linear system whose kernel is `Der(h)`; unknown `D_{ab}` sits in column `a*n + b`.
///
/// One row per basis pair `i < j` and output coordinate `k`.
pub fn derivation_system(alg: &LieAlgebra) -> RatMatrix {
    let n = alg.dim();
    let pairs = n * (n - 1) / 2;
    let mut m = RatMatrix::zeros(pairs * n, n * n);
    let mut row = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            for k in 0..n {
                for l in 0..n {
                    let c = alg.constant(i, j, l);
                    if !c.is_zero() {
                        m[(row, k * n + l)] += c;
                    }
                }
                for t in 0..n {
                    let a = alg.constant(t, j, k);
                    if !a.is_zero() {
                        m[(row, t * n + i)] -= a;
                    }
                    let b = alg.constant(i, t, k);
                    if !b.is_zero() {
                        m[(row, t * n + j)] -= b;
                    }
                }
                row += 1;
            }
        }
    }
    m
}

pub fn derivation_space(alg: &LieAlgebra) -> DerivationSpace {
    let n = alg.dim();
    let basis: Vec<RatMatrix> = derivation_system(alg)
        .kernel_basis()
        .into_iter()
        .map(|v| RatMatrix::from_vector(n, n, v).expect("kernel vectors have n*n entries"))
        .collect();
    let triangular = basis.iter().all(RatMatrix::is_lower_triangular);
    let diag_dim = restrict(&basis, |i, j| i == j).len();
    DerivationSpace {
        algebra: alg.clone(),
        dim: basis.len(),
        basis,
        triangular_in_standard_basis: triangular,
        diag_dim,
    }
}

/// Basis of the elements of `span(basis)` supported on positions where `allowed` holds.
fn restrict(basis: &[RatMatrix], allowed: impl Fn(usize, usize) -> bool) -> Vec<RatMatrix> {
    let Some(first) = basis.first() else {
        return Vec::new();
    };
    let (r, c) = (first.rows(), first.cols());
    let forbidden: Vec<(usize, usize)> = (0..r)
        .flat_map(|i| (0..c).map(move |j| (i, j)))
        .filter(|&(i, j)| !allowed(i, j))
        .collect();
    let mut sys = RatMatrix::zeros(forbidden.len().max(1), basis.len());
    for (row, &(i, j)) in forbidden.iter().enumerate() {
        for (t, b) in basis.iter().enumerate() {
            sys[(row, t)] = b[(i, j)].clone();
        }
    }
    sys.kernel_basis()
        .into_iter()
        .map(|x| combine(basis, &x))
        .collect()
}

/// `sum_t x_t * basis_t`.
pub fn combine(basis: &[RatMatrix], x: &[Rational]) -> RatMatrix {
    let (r, c) = (basis[0].rows(), basis[0].cols());
    let mut out = RatMatrix::zeros(r, c);
    for (b, xi) in basis.iter().zip(x) {
        if !xi.is_zero() {
            out = &out + &b.scale(xi);
        }
    }
    out
}

impl DerivationSpace {
    /// Whether `d` lies in the span of the basis.
    pub fn contains(&self, d: &RatMatrix) -> bool {
        self.algebra.is_derivation(d)
    }

    /// Coordinates of `d` in the basis, if it is a derivation.
    pub fn coordinates(&self, d: &RatMatrix) -> Option<RatVector> {
        if self.basis.is_empty() {
            return d.is_zero().then(Vec::new);
        }
        let cols: Vec<RatVector> = self.basis.iter().map(RatMatrix::to_vector).collect();
        RatMatrix::from_columns(&cols).ok()?.solve(&d.to_vector())
    }

    pub fn is_solvable(&self) -> bool {
        is_solvable(self)
    }
}

/// Derived series of the matrix Lie algebra spanned by the basis.
pub fn is_solvable(der: &DerivationSpace) -> bool {
    let mut current: Vec<RatVector> = span_basis(&der.basis.iter().map(RatMatrix::to_vector).collect::<Vec<_>>());
    let n = der.algebra.dim();
    loop {
        if current.is_empty() {
            return true;
        }
        let mats: Vec<RatMatrix> = current
            .iter()
            .map(|v| RatMatrix::from_vector(n, n, v.clone()).expect("square"))
            .collect();
        let mut comms = Vec::new();
        for a in 0..mats.len() {
            for b in (a + 1)..mats.len() {
                let c = mats[a].commutator(&mats[b]);
                if !c.is_zero() {
                    comms.push(c.to_vector());
                }
            }
        }
        let next = span_basis(&comms);
        if next.len() == current.len() {
            return false;
        }
        current = next;
    }
}

/// `{D in Der(h) : gD + D^T g = 0}` as a subspace of flattened `n x n` matrices.
pub fn skew_derivations(alg: &LieAlgebra, g: &RatMatrix) -> Result<Subspace> {
    let n = alg.dim();
    if g.rows() != n || !g.is_symmetric() {
        return Err(Error::InvalidMetric("metric must be a symmetric matrix of the algebra's size".into()));
    }
    let der = derivation_space(alg);
    Ok(skew_within(&der, g))
}

pub(crate) fn skew_within(der: &DerivationSpace, g: &RatMatrix) -> Subspace {
    let n = der.algebra.dim();
    if der.basis.is_empty() {
        return Subspace::zero(n * n);
    }
    let cols: Vec<RatVector> = der
        .basis
        .iter()
        .map(|b| (&(g * b) + &(&b.transpose() * g)).to_vector())
        .collect();
    let sys = RatMatrix::from_columns(&cols).expect("equal-length columns");
    let vectors: Vec<RatVector> = sys
        .kernel_basis()
        .into_iter()
        .map(|x| combine(&der.basis, &x).to_vector())
        .collect();
    Subspace::span(n * n, &vectors)
}

pub fn classify(alg: &LieAlgebra) -> Classification {
    classify_space(&derivation_space(alg))
}

pub fn classify_space(der: &DerivationSpace) -> Classification {
    if !is_solvable(der) {
        Classification::NotCsla
    } else if der.triangular_in_standard_basis {
        Classification::Cslat
    } else {
        Classification::CslaNotTriangular
    }
}

/// `(Der_n, Der_d)`: strictly lower triangular and diagonal derivations.
pub fn split_nilpotent_diagonal(der: &DerivationSpace) -> Result<(Vec<RatMatrix>, Vec<RatMatrix>)> {
    if !der.triangular_in_standard_basis {
        return Err(Error::NotTriangular(der.algebra.name().to_string()));
    }
    let nil = restrict(&der.basis, |i, j| i > j);
    let diag = restrict(&der.basis, |i, j| i == j);
    Ok((nil, diag))
}

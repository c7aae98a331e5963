use num_traits::Zero;
use serde::Serialize;

use super::subspace::Subspace;
use crate::error::{Error, Result};
use crate::linalg::{RatMatrix, RatVector, Rational};

/// Which basis a catalog algebra is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    /// Tuple exactly as listed in the classification table.
    Table,
    /// Re-based tuple in which all derivations are lower triangular.
    Standard,
    /// Parsed from user input.
    Custom,
}

/// Real Lie algebra on `Q^n` given by structure constants `c^k_{ij}`,
/// meaning `[e_i, e_j] = sum_k c^k_{ij} e_k` (indices zero-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    name: String,
    basis: Basis,
    dim: usize,
    c: Vec<Rational>,
}

impl LieAlgebra {
    /// Validates antisymmetry and the Jacobi identity.
    pub fn new(name: impl Into<String>, basis: Basis, dim: usize, c: Vec<Rational>) -> Result<Self> {
        if c.len() != dim * dim * dim {
            return Err(Error::Shape(format!("expected {} structure constants", dim * dim * dim)));
        }
        let alg = Self {
            name: name.into(),
            basis,
            dim,
            c,
        };
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    if *alg.constant(i, j, k) != -alg.constant(j, i, k) {
                        return Err(Error::Jacobi(format!(
                            "c^{}_{{{}{}}} is not antisymmetric",
                            k + 1,
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
        }
        if let Some((i, j, k, slot)) = alg.jacobi_violation() {
            return Err(Error::Jacobi(format!(
                "slot {}: Jacobi identity fails on (e{}, e{}, e{})",
                slot + 1,
                i + 1,
                j + 1,
                k + 1
            )));
        }
        Ok(alg)
    }

    pub fn abelian(name: impl Into<String>, dim: usize) -> Self {
        Self {
            name: name.into(),
            basis: Basis::Custom,
            dim,
            c: vec![Rational::zero(); dim * dim * dim],
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn basis_kind(&self) -> Basis {
        self.basis
    }

    pub fn with_name(mut self, name: impl Into<String>, basis: Basis) -> Self {
        self.name = name.into();
        self.basis = basis;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `c^k_{ij}`, the `e_k` coefficient of `[e_i, e_j]`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.c[(i * self.dim + j) * self.dim + k]
    }

    pub fn constants(&self) -> &[Rational] {
        &self.c
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> RatVector {
        (0..self.dim).map(|k| self.constant(i, j, k).clone()).collect()
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> RatVector {
        let n = self.dim;
        assert!(x.len() == n && y.len() == n, "vectors must live in the algebra");
        let mut out = vec![Rational::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() || i == j {
                    continue;
                }
                let xy = &x[i] * &y[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.constant(i, j, k);
                    if !c.is_zero() {
                        *o += &xy * c;
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ad(x) = [x, ·]` acting on columns.
    pub fn ad(&self, x: &[Rational]) -> RatMatrix {
        let n = self.dim;
        let mut m = RatMatrix::zeros(n, n);
        for j in 0..n {
            let col = self.bracket(x, &super::basis_vector(n, j));
            for (k, v) in col.into_iter().enumerate() {
                m[(k, j)] = v;
            }
        }
        m
    }

    pub fn ad_basis(&self, i: usize) -> RatMatrix {
        self.ad(&super::basis_vector(self.dim, i))
    }

    /// First basis triple `(i < j < k)` whose Jacobi sum is nonzero, with the
    /// first coordinate where it fails.
    pub fn jacobi_violation(&self) -> Option<(usize, usize, usize, usize)> {
        let n = self.dim;
        let e = |i| super::basis_vector(n, i);
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let a = self.bracket(&e(i), &self.bracket_basis(j, k));
                    let b = self.bracket(&e(j), &self.bracket_basis(k, i));
                    let c = self.bracket(&e(k), &self.bracket_basis(i, j));
                    if let Some(m) = (0..n).find(|&m| !(&a[m] + &b[m] + &c[m]).is_zero()) {
                        return Some((i, j, k, m));
                    }
                }
            }
        }
        None
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    /// `[U, W]` for subspaces given by bases.
    pub fn bracket_span(&self, u: &Subspace, w: &Subspace) -> Subspace {
        let mut out = Vec::new();
        for x in &u.basis {
            for y in &w.basis {
                let b = self.bracket(x, y);
                if b.iter().any(|v| !v.is_zero()) {
                    out.push(b);
                }
            }
        }
        Subspace::span(self.dim, &out)
    }

    /// `C^0 = h, C^{k+1} = [h, C^k]`, stopping at zero or when the series stabilizes.
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let full = Subspace::full(self.dim);
        let mut series = vec![full.clone()];
        loop {
            let last = series.last().expect("series starts non-empty");
            if last.is_zero() {
                break;
            }
            let next = self.bracket_span(&full, last);
            if next.dim() == last.dim() {
                break;
            }
            series.push(next);
        }
        series
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().is_some_and(Subspace::is_zero)
    }

    /// Smallest `s` with `C^s = 0`.
    pub fn nilpotency_step(&self) -> Result<usize> {
        let series = self.lower_central_series();
        if series.last().is_some_and(Subspace::is_zero) {
            Ok(series.len() - 1)
        } else {
            Err(Error::NotNilpotent)
        }
    }

    pub fn center(&self) -> Subspace {
        let n = self.dim;
        let mut m = RatMatrix::zeros(n * n, n);
        for j in 0..n {
            for k in 0..n {
                for i in 0..n {
                    m[(j * n + k, i)] = self.constant(i, j, k).clone();
                }
            }
        }
        Subspace::span(n, &m.kernel_basis())
    }

    /// Checks `phi[x, y] = [phi x, phi y]` on all basis pairs.
    pub fn is_automorphism(&self, phi: &RatMatrix) -> bool {
        let n = self.dim;
        if phi.rows() != n || phi.cols() != n || phi.determinant().is_zero() {
            return false;
        }
        let cols: Vec<RatVector> = (0..n).map(|j| phi.column(j)).collect();
        (0..n).all(|i| {
            ((i + 1)..n).all(|j| phi.mul_vec(&self.bracket_basis(i, j)) == self.bracket(&cols[i], &cols[j]))
        })
    }

    /// Checks `D[x, y] = [Dx, y] + [x, Dy]` on all basis pairs.
    pub fn is_derivation(&self, d: &RatMatrix) -> bool {
        let n = self.dim;
        if d.rows() != n || d.cols() != n {
            return false;
        }
        let cols: Vec<RatVector> = (0..n).map(|j| d.column(j)).collect();
        (0..n).all(|i| {
            ((i + 1)..n).all(|j| {
                let lhs = d.mul_vec(&self.bracket_basis(i, j));
                let a = self.bracket(&cols[i], &super::basis_vector(n, j));
                let b = self.bracket(&super::basis_vector(n, i), &cols[j]);
                lhs.iter().zip(a.iter().zip(&b)).all(|(l, (x, y))| *l == x + y)
            })
        })
    }

    /// Structure constants after the change of basis `e'_j = sum_i p_{ij} e_i`.
    pub fn change_basis(&self, p: &RatMatrix) -> Result<LieAlgebra> {
        let pinv = p
            .inverse()
            .ok_or_else(|| Error::Shape("change of basis is singular".into()))?;
        let n = self.dim;
        let cols: Vec<RatVector> = (0..n).map(|j| p.column(j)).collect();
        let mut c = vec![Rational::zero(); n * n * n];
        for i in 0..n {
            for j in 0..n {
                let b = pinv.mul_vec(&self.bracket(&cols[i], &cols[j]));
                for (k, v) in b.into_iter().enumerate() {
                    c[(i * n + j) * n + k] = v;
                }
            }
        }
        LieAlgebra::new(self.name.clone(), Basis::Custom, n, c)
    }
}

//! Free-parameter pattern of `Aut_0(h)`, exact automorphisms, and finite
//! component groups.

use std::collections::{BTreeMap, HashSet};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::derivations::{combine, split_nilpotent_diagonal, DerivationSpace};
use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::linalg::{pow_i, RatMatrix, Rational};

/// Lower-triangular positions `(row, col)` of an `n x n` matrix in row-major order.
pub fn lower_positions(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (0..=i).map(move |j| (i, j))).collect()
}

/// Where the free parameters of a generic element of `Aut_0(h)` sit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AutPattern {
    pub dim: usize,
    /// Zero-based `(row, col)` pairs with `row >= col`.
    pub free_positions: Vec<(usize, usize)>,
    pub dependent_positions: Vec<(usize, usize)>,
}

impl AutPattern {
    pub fn is_free(&self, i: usize, j: usize) -> bool {
        self.free_positions.contains(&(i, j))
    }

    /// One string per row, `a` for free and `-` for dependent entries.
    pub fn render(&self) -> Vec<String> {
        (0..self.dim)
            .map(|i| (0..=i).map(|j| if self.is_free(i, j) { 'a' } else { '-' }).collect())
            .collect()
    }
}

/// Pivot positions of the derivation basis inside the lower-triangular coordinates.
pub fn aut0_pattern(der: &DerivationSpace) -> Result<AutPattern> {
    if !der.triangular_in_standard_basis {
        return Err(Error::NotTriangular(der.algebra.name().to_string()));
    }
    let n = der.algebra.dim();
    let positions = lower_positions(n);
    let mut m = RatMatrix::zeros(der.basis.len().max(1), positions.len());
    for (r, b) in der.basis.iter().enumerate() {
        for (c, &(i, j)) in positions.iter().enumerate() {
            m[(r, c)] = b[(i, j)].clone();
        }
    }
    let (_, pivots) = m.rref();
    let free: Vec<(usize, usize)> = pivots.iter().map(|&p| positions[p]).collect();
    let mut free_sorted = free.clone();
    free_sorted.sort_by_key(|&(i, j)| (i, j));
    let dependent = positions.into_iter().filter(|p| !free.contains(p)).collect();
    Ok(AutPattern {
        dim: n,
        free_positions: free_sorted,
        dependent_positions: dependent,
    })
}

/// Exponential of a nilpotent derivation, checked to be an automorphism.
pub fn exp_derivation(alg: &LieAlgebra, d: &RatMatrix) -> Result<RatMatrix> {
    if !alg.is_derivation(d) {
        return Err(Error::NotAutomorphism("input is not a derivation".into()));
    }
    if d.diagonal_entries().iter().any(|x| !x.is_zero()) {
        return Err(Error::Unsupported(
            "derivations with a diagonal part are exponentiated through diagonal_automorphism".into(),
        ));
    }
    let phi = d.exp_nilpotent()?;
    if !alg.is_automorphism(&phi) {
        return Err(Error::NotAutomorphism("exponential of a derivation".into()));
    }
    Ok(phi)
}

/// Diagonal matrix with the given positive entries, checked to be an automorphism.
pub fn diagonal_automorphism(alg: &LieAlgebra, entries: &[Rational]) -> Result<RatMatrix> {
    if entries.len() != alg.dim() || entries.iter().any(|x| !x.is_positive()) {
        return Err(Error::NotAutomorphism("diagonal entries must be positive".into()));
    }
    let phi = RatMatrix::diagonal(entries);
    if !alg.is_automorphism(&phi) {
        return Err(Error::NotAutomorphism(format!("diag{entries:?}")));
    }
    Ok(phi)
}

/// Integer weight vectors spanning the diagonal derivations.
///
/// A diagonal automorphism in `Aut_0` is `diag(prod_t b_t^{w_t,i})` for positive bases `b_t`.
pub fn diagonal_weights(der: &DerivationSpace) -> Result<Vec<Vec<i64>>> {
    let (_, diag) = split_nilpotent_diagonal(der)?;
    diag.iter()
        .map(|d| {
            let entries = d.diagonal_entries();
            let l = entries.iter().fold(num_bigint::BigInt::one(), |acc, x| acc.lcm(x.denom()));
            entries
                .iter()
                .map(|x| {
                    let v = x * Rational::from_integer(l.clone());
                    i64::try_from(v.to_integer()).map_err(|_| Error::Unsupported("weight too large".into()))
                })
                .collect()
        })
        .collect()
}

/// `diag(prod_t b_t^{w_t,i})`, an element of the positive diagonal torus of `Aut_0`.
pub fn torus_element(alg: &LieAlgebra, weights: &[Vec<i64>], bases: &[Rational]) -> Result<RatMatrix> {
    let n = alg.dim();
    let entries: Vec<Rational> = (0..n)
        .map(|i| {
            weights
                .iter()
                .zip(bases)
                .fold(Rational::one(), |acc, (w, b)| acc * pow_i(b, w[i]))
        })
        .collect();
    diagonal_automorphism(alg, &entries)
}

/// A seeded element `t * exp(N)` of `Aut_0` with small rational parameters.
pub fn random_aut0<R: Rng>(der: &DerivationSpace, rng: &mut R) -> Result<RatMatrix> {
    let alg = &der.algebra;
    let (nil, _) = split_nilpotent_diagonal(der)?;
    let weights = diagonal_weights(der)?;
    let bases: Vec<Rational> = weights
        .iter()
        .map(|_| Rational::new(rng.gen_range(1..=4).into(), rng.gen_range(1..=3).into()))
        .collect();
    let t = torus_element(alg, &weights, &bases)?;
    if nil.is_empty() {
        return Ok(t);
    }
    let x: Vec<Rational> = nil
        .iter()
        .map(|_| Rational::new(rng.gen_range(-3..=3).into(), rng.gen_range(1..=2).into()))
        .collect();
    let u = exp_derivation(alg, &combine(&nil, &x))?;
    let phi = &t * &u;
    if !alg.is_automorphism(&phi) {
        return Err(Error::NotAutomorphism("random Aut_0 element".into()));
    }
    Ok(phi)
}

/// Finite group of invertible rational matrices given by its full element list.
#[derive(Clone, Debug, Serialize)]
pub struct FiniteMatrixGroup {
    pub generators: Vec<RatMatrix>,
    pub elements: Vec<RatMatrix>,
    pub order: usize,
}

/// Largest closure [`component_group`] will build.
pub const GROUP_BOUND: usize = 64;

impl FiniteMatrixGroup {
    /// Closure under multiplication; fails beyond `bound` elements.
    pub fn generate(generators: Vec<RatMatrix>, n: usize, bound: usize) -> Result<Self> {
        let id = RatMatrix::identity(n);
        let mut elements = vec![id.clone()];
        let mut seen: HashSet<RatMatrix> = HashSet::from([id]);
        let mut frontier = 0;
        while frontier < elements.len() {
            let x = elements[frontier].clone();
            frontier += 1;
            for g in &generators {
                let y = &x * g;
                if seen.insert(y.clone()) {
                    elements.push(y);
                    if elements.len() > bound {
                        return Err(Error::GroupTooLarge(bound));
                    }
                }
            }
        }
        let order = elements.len();
        Ok(Self {
            generators,
            elements,
            order,
        })
    }

    /// Subgroup of the elements satisfying `keep`, with its closure re-verified.
    pub fn filter(&self, keep: impl Fn(&RatMatrix) -> bool) -> Result<Self> {
        let elements: Vec<RatMatrix> = self.elements.iter().filter(|e| keep(e)).cloned().collect();
        let set: HashSet<&RatMatrix> = elements.iter().collect();
        for a in &elements {
            for b in &elements {
                if !set.contains(&(a * b)) {
                    return Err(Error::Shape("filtered set is not closed under products".into()));
                }
            }
        }
        let order = elements.len();
        Ok(Self {
            generators: elements.clone(),
            elements,
            order,
        })
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .all(|a| self.generators.iter().all(|b| (a * b) == (b * a)))
    }

    pub fn contains(&self, m: &RatMatrix) -> bool {
        self.elements.contains(m)
    }

    pub fn center_order(&self) -> usize {
        self.elements
            .iter()
            .filter(|z| self.generators.iter().all(|g| (*z * g) == (g * *z)))
            .count()
    }

    /// Multiset of element orders as `order -> count`.
    pub fn order_profile(&self) -> BTreeMap<usize, usize> {
        let mut profile = BTreeMap::new();
        for e in &self.elements {
            *profile.entry(element_order(e)).or_insert(0) += 1;
        }
        profile
    }
}

fn element_order(m: &RatMatrix) -> usize {
    let id = RatMatrix::identity(m.rows());
    let mut p = m.clone();
    let mut k = 1;
    while p != id {
        p = &p * m;
        k += 1;
        assert!(k <= GROUP_BOUND, "element of a finite group has bounded order");
    }
    k
}

/// Closure of the generators, every element checked to be an automorphism.
pub fn component_group(alg: &LieAlgebra, generators: &[RatMatrix]) -> Result<FiniteMatrixGroup> {
    for (i, g) in generators.iter().enumerate() {
        if !alg.is_automorphism(g) {
            return Err(Error::NotAutomorphism(format!("generator {} of {}", i + 1, alg.name())));
        }
    }
    let group = FiniteMatrixGroup::generate(generators.to_vec(), alg.dim(), GROUP_BOUND)?;
    if let Some(bad) = group.elements.iter().position(|e| !alg.is_automorphism(e)) {
        return Err(Error::NotAutomorphism(format!("group element {bad} of {}", alg.name())));
    }
    Ok(group)
}

/// Isomorphism label for the small 2-groups that occur as component groups.
pub fn identify_group(g: &FiniteMatrixGroup) -> String {
    let profile = g.order_profile();
    let count = |k: usize| profile.get(&k).copied().unwrap_or(0);
    let abelian = g.is_abelian();
    let exponent2 = profile.keys().all(|&k| k <= 2);
    if abelian && exponent2 {
        let k = g.order.trailing_zeros();
        return match k {
            0 => "trivial".into(),
            1 => "Z2".into(),
            _ => format!("Z2^{k}"),
        };
    }
    match (g.order, abelian, count(2), count(4)) {
        (8, false, 5, 2) => "Dih4".into(),
        (8, false, 1, 6) => "Q8".into(),
        (16, false, 11, 4) => "Dih4xZ2".into(),
        (16, false, 7, 8) if involutions_form_subgroup(g) => "G16_3".into(),
        _ => format!(
            "unknown(order={}, abelian={abelian}, center={}, orders={profile:?})",
            g.order,
            g.center_order()
        ),
    }
}

fn involutions_form_subgroup(g: &FiniteMatrixGroup) -> bool {
    let id = RatMatrix::identity(g.elements[0].rows());
    let inv: Vec<&RatMatrix> = g.elements.iter().filter(|e| (*e * *e) == id).collect();
    let set: HashSet<&RatMatrix> = inv.iter().copied().collect();
    inv.iter().all(|a| inv.iter().all(|b| set.contains(&(*a * *b))))
}

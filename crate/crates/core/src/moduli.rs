//! The cross-section Σ of left-invariant metrics, isotropy groups and
//! zero-substitution sweeps.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::automorphisms::{aut0_pattern, component_group, identify_group, lower_positions, AutPattern, FiniteMatrixGroup};
use crate::derivations::{derivation_space, skew_within, DerivationSpace};
use crate::error::{Error, Result};
use crate::lie::{CatalogEntry, LieAlgebra};
use crate::linalg::{format_rational, RatMatrix, Rational};

/// Free and fixed entries of Σ. Free positions are named `s0, s1, ...` in row-major order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaPattern {
    pub algebra: String,
    pub dim: usize,
    pub free_positions: Vec<(usize, usize)>,
    pub names: Vec<String>,
}

impl SigmaPattern {
    /// Complement of the free positions of `Aut_0` among the lower-triangular slots.
    pub fn from_aut_pattern(algebra: &str, aut: &AutPattern) -> Self {
        let free_positions: Vec<(usize, usize)> = lower_positions(aut.dim)
            .into_iter()
            .filter(|&(i, j)| !aut.is_free(i, j))
            .collect();
        let names = (0..free_positions.len()).map(|k| format!("s{k}")).collect();
        Self {
            algebra: algebra.to_string(),
            dim: aut.dim,
            free_positions,
            names,
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownParameter(name.to_string()))
    }

    pub fn position(&self, name: &str) -> Result<(usize, usize)> {
        Ok(self.free_positions[self.index_of(name)?])
    }

    pub fn name_at(&self, i: usize, j: usize) -> Option<&str> {
        self.free_positions
            .iter()
            .position(|&p| p == (i, j))
            .map(|k| self.names[k].as_str())
    }

    pub fn is_diagonal_param(&self, k: usize) -> bool {
        let (i, j) = self.free_positions[k];
        i == j
    }

    pub fn free_diag(&self) -> Vec<(usize, usize)> {
        self.free_positions.iter().copied().filter(|(i, j)| i == j).collect()
    }

    pub fn free_offdiag(&self) -> Vec<(usize, usize)> {
        self.free_positions.iter().copied().filter(|(i, j)| i != j).collect()
    }

    pub fn fixed_one_diag(&self) -> Vec<(usize, usize)> {
        (0..self.dim).map(|i| (i, i)).filter(|p| !self.free_positions.contains(p)).collect()
    }

    pub fn fixed_zero_offdiag(&self) -> Vec<(usize, usize)> {
        lower_positions(self.dim)
            .into_iter()
            .filter(|&(i, j)| i != j && !self.free_positions.contains(&(i, j)))
            .collect()
    }

    /// Names of the off-diagonal parameters, `nd(Σ)`.
    pub fn nd(&self) -> Vec<String> {
        (0..self.len())
            .filter(|&k| !self.is_diagonal_param(k))
            .map(|k| self.names[k].clone())
            .collect()
    }

    /// One string per row: `1`, `0` for fixed and `s` for free entries.
    pub fn render(&self) -> Vec<String> {
        (0..self.dim)
            .map(|i| {
                (0..=i)
                    .map(|j| {
                        if self.free_positions.contains(&(i, j)) {
                            's'
                        } else if i == j {
                            '1'
                        } else {
                            '0'
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Rows with parameter names in place of `s`.
    pub fn render_named(&self) -> Vec<Vec<String>> {
        (0..self.dim)
            .map(|i| {
                (0..=i)
                    .map(|j| match self.name_at(i, j) {
                        Some(n) => n.to_string(),
                        None if i == j => "1".into(),
                        None => "0".into(),
                    })
                    .collect()
            })
            .collect()
    }
}

pub fn sigma_pattern(alg: &LieAlgebra) -> Result<SigmaPattern> {
    let der = derivation_space(alg);
    sigma_pattern_of(&der)
}

pub fn sigma_pattern_of(der: &DerivationSpace) -> Result<SigmaPattern> {
    if !crate::derivations::is_solvable(der) {
        return Err(Error::NotTriangular(der.algebra.name().to_string()));
    }
    let aut = aut0_pattern(der)?;
    Ok(SigmaPattern::from_aut_pattern(der.algebra.name(), &aut))
}

/// A point of Σ: one rational value per parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaPoint {
    pub pattern: SigmaPattern,
    pub values: Vec<Rational>,
}

impl SigmaPoint {
    pub fn new(pattern: SigmaPattern, values: Vec<Rational>) -> Result<Self> {
        if values.len() != pattern.len() {
            return Err(Error::Shape(format!(
                "{} expects {} parameters, got {}",
                pattern.algebra,
                pattern.len(),
                values.len()
            )));
        }
        for (k, v) in values.iter().enumerate() {
            if pattern.is_diagonal_param(k) && !v.is_positive() {
                return Err(Error::InvalidMetric(format!(
                    "diagonal parameter {} must be positive, got {}",
                    pattern.names[k],
                    format_rational(v)
                )));
            }
        }
        Ok(Self { pattern, values })
    }

    /// Diagonal parameters 1, off-diagonal parameters 0: σ = I.
    pub fn trivial(pattern: SigmaPattern) -> Self {
        let values = (0..pattern.len())
            .map(|k| if pattern.is_diagonal_param(k) { Rational::one() } else { Rational::zero() })
            .collect();
        Self { pattern, values }
    }

    /// Starts from `base` and overrides named parameters.
    pub fn with(mut self, assignments: &[(&str, Rational)]) -> Result<Self> {
        for (name, v) in assignments {
            let k = self.pattern.index_of(name)?;
            self.values[k] = v.clone();
        }
        SigmaPoint::new(self.pattern, self.values)
    }

    pub fn get(&self, name: &str) -> Result<&Rational> {
        Ok(&self.values[self.pattern.index_of(name)?])
    }

    pub fn sigma(&self) -> RatMatrix {
        let n = self.pattern.dim;
        let mut s = RatMatrix::identity(n);
        for (k, &(i, j)) in self.pattern.free_positions.iter().enumerate() {
            s[(i, j)] = self.values[k].clone();
        }
        s
    }

    pub fn metric(&self) -> RatMatrix {
        let s = self.sigma();
        &s.transpose() * &s
    }
}

impl Serialize for SigmaPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.values.len()))?;
        for (n, v) in self.pattern.names.iter().zip(&self.values) {
            m.serialize_entry(n, &format_rational(v))?;
        }
        m.end()
    }
}

/// `g_σ = σᵀσ`, checked positive definite by its leading minors.
pub fn metric_of(p: &SigmaPoint) -> Result<RatMatrix> {
    let p = SigmaPoint::new(p.pattern.clone(), p.values.clone())?;
    let g = p.metric();
    if !g.is_positive_definite() {
        return Err(Error::InvalidMetric("metric is not positive definite".into()));
    }
    Ok(g)
}

/// Distinct nonzero rationals built from small primes, in a seeded order.
///
/// Diagonal slots receive positive values; off-diagonal ones a random sign.
pub fn generic_values<R: Rng>(pattern: &SigmaPattern, rng: &mut R) -> Vec<Rational> {
    const PRIMES: [i64; 9] = [2, 3, 5, 7, 11, 13, 17, 19, 23];
    let mut pool: Vec<Rational> = Vec::new();
    for &p in &PRIMES {
        pool.push(Rational::from_integer(p.into()));
        for &q in &PRIMES {
            if p != q && p < 12 && q < 12 {
                pool.push(Rational::new(p.into(), q.into()));
            }
        }
    }
    pool.shuffle(rng);
    pool.into_iter()
        .take(pattern.len())
        .enumerate()
        .map(|(k, v)| {
            if !pattern.is_diagonal_param(k) && rng.gen_bool(0.5) {
                -v
            } else {
                v
            }
        })
        .collect()
}

pub fn generic_point<R: Rng>(pattern: &SigmaPattern, rng: &mut R) -> SigmaPoint {
    let values = generic_values(pattern, rng);
    SigmaPoint::new(pattern.clone(), values).expect("generic values respect positivity")
}

/// [`generic_point`] driven by a ChaCha8 stream seeded with `seed`.
pub fn seeded_point(pattern: &SigmaPattern, seed: u64) -> SigmaPoint {
    generic_point(pattern, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `K = {δ ∈ D : δᵀgδ = g}` together with its label.
#[derive(Clone, Debug, Serialize)]
pub struct IsotropyResult {
    pub group: FiniteMatrixGroup,
    pub label: String,
    /// True when `Aut(h) ∩ O(g)` has positive dimension, i.e. skew derivations exist.
    pub continuous_isotropy: bool,
}

pub fn isotropy_group(alg: &LieAlgebra, g: &RatMatrix, d: &FiniteMatrixGroup) -> Result<IsotropyResult> {
    let der = derivation_space(alg);
    isotropy_with(&der, g, d)
}

fn isotropy_with(der: &DerivationSpace, g: &RatMatrix, d: &FiniteMatrixGroup) -> Result<IsotropyResult> {
    if !g.is_positive_definite() {
        return Err(Error::InvalidMetric("metric is not positive definite".into()));
    }
    let k = d.filter(|delta| &(&delta.transpose() * g) * delta == *g)?;
    let label = identify_group(&k);
    Ok(IsotropyResult {
        group: k,
        label,
        continuous_isotropy: !skew_within(der, g).is_zero(),
    })
}

/// Everything the metric-level computations need for one catalog algebra.
#[derive(Clone, Debug)]
pub struct ModuliContext {
    pub name: String,
    pub algebra: LieAlgebra,
    pub der: DerivationSpace,
    pub pattern: SigmaPattern,
    pub group: FiniteMatrixGroup,
}

impl ModuliContext {
    pub fn new(entry: &CatalogEntry) -> Result<Self> {
        let algebra = entry.standard().clone();
        let der = derivation_space(&algebra);
        let pattern = sigma_pattern_of(&der)?;
        let group = component_group(&algebra, &entry.component_generators)?;
        Ok(Self {
            name: entry.name.clone(),
            algebra,
            der,
            pattern,
            group,
        })
    }

    pub fn isotropy(&self, g: &RatMatrix) -> Result<IsotropyResult> {
        isotropy_with(&self.der, g, &self.group)
    }

    fn sample_label(&self, zeros: &[usize], seed: u64, stream: u64) -> Result<String> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let mut values = generic_values(&self.pattern, &mut rng);
        for &k in zeros {
            values[k] = Rational::zero();
        }
        let p = SigmaPoint::new(self.pattern.clone(), values)?;
        Ok(self.isotropy(&metric_of(&p)?)?.label)
    }

    /// All `p`-subsets of `nd(Σ)` set to zero, other parameters generic.
    pub fn isotropy_sweep(&self, p: usize, seed: u64) -> Result<SweepResult> {
        let nd: Vec<usize> = (0..self.pattern.len()).filter(|&k| !self.pattern.is_diagonal_param(k)).collect();
        if p > nd.len() {
            return Err(Error::Shape(format!(
                "{} has only {} off-diagonal parameters",
                self.name,
                nd.len()
            )));
        }
        let subsets: Vec<Vec<usize>> = nd.iter().copied().combinations(p).collect();
        let outcomes: Vec<Result<(SweepRow, bool)>> = subsets
            .par_iter()
            .enumerate()
            .map(|(idx, zeros)| {
                let base = 3 * idx as u64;
                let a = self.sample_label(zeros, seed, base)?;
                let b = self.sample_label(zeros, seed, base + 1)?;
                let (label, agreed) = if a == b {
                    (a, true)
                } else {
                    let c = self.sample_label(zeros, seed, base + 2)?;
                    if c == a || c == b {
                        (c, false)
                    } else {
                        return Err(Error::NonGenericSampling(format!(
                            "{}: subset {:?} gave {a}, {b}, {c}",
                            self.name,
                            zeros.iter().map(|&k| &self.pattern.names[k]).collect::<Vec<_>>()
                        )));
                    }
                };
                let subset = zeros.iter().map(|&k| self.pattern.names[k].clone()).collect();
                Ok((SweepRow { subset, label }, agreed))
            })
            .collect();
        let mut rows = Vec::with_capacity(outcomes.len());
        let mut warnings = Vec::new();
        for o in outcomes {
            let (row, agreed) = o?;
            if !agreed {
                warnings.push(format!("samples disagreed on {:?}; tie broken to {}", row.subset, row.label));
            }
            rows.push(row);
        }
        let mut tally = BTreeMap::new();
        for r in &rows {
            *tally.entry(r.label.clone()).or_insert(0) += 1;
        }
        Ok(SweepResult {
            algebra: self.name.clone(),
            p,
            seed,
            agreement: rows.len() - warnings.len(),
            rows,
            tally,
            warnings,
        })
    }

    /// Σ_D: the part of Σ on which `D` acts trivially, or `None` when `D` does not act on Σ by restriction.
    pub fn fixed_point_section(&self) -> Result<Option<FixedSection>> {
        fixed_point_section(&self.pattern, &self.group)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub subset: Vec<String>,
    pub label: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepResult {
    pub algebra: String,
    pub p: usize,
    pub seed: u64,
    /// Number of subsets whose first two samples agreed.
    pub agreement: usize,
    pub rows: Vec<SweepRow>,
    pub tally: BTreeMap<String, usize>,
    pub warnings: Vec<String>,
}

pub fn isotropy_sweep(entry: &CatalogEntry, p: usize, seed: u64) -> Result<SweepResult> {
    ModuliContext::new(entry)?.isotropy_sweep(p, seed)
}

/// Restriction of Σ: surviving parameters, with ties between equal entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedSection {
    pub algebra: String,
    /// Lower-triangular rows; entries are `0`, `1` or a parameter name.
    pub cells: Vec<Vec<String>>,
    pub free: Vec<String>,
}

/// Σ_D for groups of diagonal and monomial matrices.
///
/// Diagonal sign matrices force `σ_ij = 0` whenever `δ_i ≠ δ_j`. Signed
/// permutations then identify diagonal entries along their orbits. Returns
/// `None` when `D` contains an element that is not monomial, since such an
/// element does not act on Σ by restriction.
pub fn fixed_point_section(pattern: &SigmaPattern, group: &FiniteMatrixGroup) -> Result<Option<FixedSection>> {
    let n = pattern.dim;
    let is_monomial = |m: &RatMatrix| (0..n).all(|i| (0..n).filter(|&j| !m[(i, j)].is_zero()).count() == 1);
    if group.elements.iter().any(|m| !is_monomial(m)) {
        return Ok(None);
    }
    let mut cell: Vec<Vec<String>> = pattern.render_named();
    for delta in group.elements.iter().filter(|m| m.is_diagonal()) {
        for &(i, j) in &pattern.free_offdiag() {
            if delta[(i, i)] != delta[(j, j)] {
                cell[i][j] = "0".into();
            }
        }
    }
    let perms: Vec<Vec<usize>> = group
        .elements
        .iter()
        .filter(|m| !m.is_diagonal())
        .map(|m| (0..n).map(|j| (0..n).find(|&i| !m[(i, j)].is_zero()).expect("monomial column")).collect())
        .collect();
    if !perms.is_empty() {
        let offdiag_left = (0..n).any(|i| (0..i).any(|j| cell[i][j] != "0"));
        if offdiag_left {
            return Err(Error::Unsupported(
                "fixed section for a permutation action on a non-diagonal Σ".into(),
            ));
        }
        // Union of diagonal slots along permutation orbits; a fixed `1` wins, then the lowest name.
        let mut rep: Vec<usize> = (0..n).collect();
        fn find(rep: &mut [usize], x: usize) -> usize {
            if rep[x] != x {
                let r = find(rep, rep[x]);
                rep[x] = r;
            }
            rep[x]
        }
        for pi in &perms {
            for (j, &i) in pi.iter().enumerate() {
                let (a, b) = (find(&mut rep, i), find(&mut rep, j));
                if a != b {
                    rep[a.max(b)] = a.min(b);
                }
            }
        }
        let rank = |c: &str| if c == "1" { (0, 0) } else { (1, c[1..].parse::<usize>().unwrap_or(usize::MAX)) };
        let mut best: BTreeMap<usize, String> = BTreeMap::new();
        for i in 0..n {
            let r = find(&mut rep, i);
            let c = cell[i][i].clone();
            let e = best.entry(r).or_insert_with(|| c.clone());
            if rank(&c) < rank(e) {
                *e = c;
            }
        }
        for i in 0..n {
            let r = find(&mut rep, i);
            cell[i][i] = best[&r].clone();
        }
    }
    let mut free: Vec<String> = cell
        .iter()
        .flatten()
        .filter(|c| c.starts_with('s'))
        .cloned()
        .collect();
    free.sort_by_key(|c| c[1..].parse::<usize>().unwrap_or(usize::MAX));
    free.dedup();
    Ok(Some(FixedSection {
        algebra: pattern.algebra.clone(),
        cells: cell,
        free,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::Catalog;

    #[test]
    fn trivial_point_is_identity_metric() {
        let alg = Catalog::builtin().algebra("h28").unwrap();
        let p = SigmaPoint::trivial(sigma_pattern(alg).unwrap());
        assert_eq!(metric_of(&p).unwrap(), RatMatrix::identity(6));
    }

    #[test]
    fn rejects_nonpositive_diagonal() {
        let alg = Catalog::builtin().algebra("h28").unwrap();
        let p = SigmaPoint::trivial(sigma_pattern(alg).unwrap());
        assert!(p.with(&[("s0", Rational::zero())]).is_err());
    }
}

//! Dense rational matrices and the elimination kernels built on them.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

/// Column vector of exact rationals.
pub type RatVector = Vec<Rational>;

/// Row-major dense matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    /// Builds a matrix from row vectors. All rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor from small integers, mostly for tests and catalog data.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
                .collect(),
        )
        .expect("rectangular literal")
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[RatVector]) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|v| v.len() != r) {
            return Err(Error::Shape("columns of unequal length".into()));
        }
        let mut m = Self::zeros(r, c);
        for (j, v) in cols.iter().enumerate() {
            for (i, x) in v.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> RatVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// True when every entry strictly above the diagonal vanishes.
    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| ((i + 1)..self.cols).all(|j| self[(i, j)].is_zero()))
    }

    pub fn is_strictly_lower_triangular(&self) -> bool {
        self.is_lower_triangular() && (0..self.rows.min(self.cols)).all(|i| self[(i, i)].is_zero())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn diagonal_entries(&self) -> RatVector {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> RatVector {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).fold(Rational::zero(), |acc, i| acc + &self[(i, i)])
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn pow(&self, e: u32) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Flattened row-major entries, the coordinate vector used for spans of matrices.
    pub fn to_vector(&self) -> RatVector {
        self.data.clone()
    }

    pub fn from_vector(rows: usize, cols: usize, v: RatVector) -> Result<Self> {
        if v.len() != rows * cols {
            return Err(Error::Shape(format!(
                "vector of length {} cannot fill a {rows}x{cols} matrix",
                v.len()
            )));
        }
        Ok(Self { rows, cols, data: v })
    }

    /// Reduced row-echelon form with columns visited in `column_order`.
    ///
    /// Pivots are normalized to 1. The returned pivot list holds original column
    /// indices in the order they were eliminated.
    pub fn rref_with_order(&self, column_order: &[usize]) -> Result<(RatMatrix, Vec<usize>)> {
        let mut seen = vec![false; self.cols];
        if column_order.len() != self.cols
            || column_order.iter().any(|&c| c >= self.cols || std::mem::replace(&mut seen[c], true))
        {
            return Err(Error::Shape("column order is not a permutation".into()));
        }
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for &c in column_order {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(r, p);
            let inv = a[(r, c)].recip();
            for j in 0..a.cols {
                if !a[(r, j)].is_zero() {
                    a[(r, j)] = &a[(r, j)] * &inv;
                }
            }
            for i in 0..a.rows {
                if i == r || a[(i, c)].is_zero() {
                    continue;
                }
                let f = a[(i, c)].clone();
                for j in 0..a.cols {
                    if !a[(r, j)].is_zero() {
                        let d = &f * &a[(r, j)];
                        a[(i, j)] -= d;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Ok((a, pivots))
    }

    /// Reduced row-echelon form in the natural column order.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let order: Vec<usize> = (0..self.cols).collect();
        self.rref_with_order(&order).expect("natural order is a permutation")
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space `{v : self * v = 0}`.
    ///
    /// One vector per free column, with that free coordinate set to 1.
    pub fn kernel_basis(&self) -> Vec<RatVector> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Some solution of `self * x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Rational]) -> Option<RatVector> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r[(row, self.cols)].clone();
        }
        Some(x)
    }

    pub fn determinant(&self) -> Rational {
        assert!(self.is_square());
        let mut a = self.clone();
        let n = self.rows;
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[(i, c)].is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let piv = a[(c, c)].clone();
            det *= &piv;
            for i in (c + 1)..n {
                if a[(i, c)].is_zero() {
                    continue;
                }
                let f = &a[(i, c)] / &piv;
                for j in c..n {
                    let d = &f * &a[(c, j)];
                    a[(i, j)] -= d;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<RatMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    /// Leading principal minors, top-left 1x1 through the full determinant.
    pub fn leading_minors(&self) -> Vec<Rational> {
        (1..=self.rows)
            .map(|k| {
                let mut sub = Self::zeros(k, k);
                for i in 0..k {
                    for j in 0..k {
                        sub[(i, j)] = self[(i, j)].clone();
                    }
                }
                sub.determinant()
            })
            .collect()
    }

    /// Sylvester test: symmetric with every leading principal minor positive.
    pub fn is_positive_definite(&self) -> bool {
        self.is_symmetric() && self.leading_minors().iter().all(Signed::is_positive)
    }

    /// Exponential of a nilpotent matrix as the finite series `sum_k n^k / k!`.
    pub fn exp_nilpotent(&self) -> Result<RatMatrix> {
        if !self.is_square() {
            return Err(Error::Shape("exponential of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut term = Self::identity(n);
        let mut acc = Self::identity(n);
        for k in 1..=n {
            term = (&term * self).scale(&Rational::from_integer((k as i64).into()).recip());
            if term.is_zero() {
                return Ok(acc);
            }
            if k == n {
                break;
            }
            acc = &acc + &term;
        }
        Err(Error::NotNilpotent)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Entry-wise text form used by JSON output.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(format_rational).collect())
            .collect()
    }

    pub fn from_string_rows(rows: &[Vec<String>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?,
        )
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &RatMatrix {
    type Output = RatMatrix;
    fn mul(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = RatMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl Add for &RatMatrix {
    type Output = RatMatrix;
    fn add(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &RatMatrix {
    type Output = RatMatrix;
    fn sub(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &RatMatrix {
    type Output = RatMatrix;
    fn neg(self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells = self.to_string_rows();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for (i, row) in cells.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let padded: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            write!(f, "[{}]", padded.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for RatMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_string_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        RatMatrix::from_string_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// Dot product of two rational vectors.
pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Rank of a family of vectors (as rows).
pub fn span_rank(vectors: &[RatVector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    RatMatrix::from_rows(vectors.to_vec())
        .map(|m| m.rank())
        .unwrap_or(0)
}

/// Reduced basis of the span of `vectors`: RREF rows, zero rows dropped.
pub fn span_basis(vectors: &[RatVector]) -> Vec<RatVector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = RatMatrix::from_rows(vectors.to_vec()).expect("vectors of equal length");
    let (r, pivots) = m.rref();
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span(basis: &[RatVector], v: &[Rational]) -> bool {
    let mut all = basis.to_vec();
    all.push(v.to_vec());
    span_rank(&all) == span_rank(basis)
}

/// Whether two families span the same subspace.
pub fn same_span(a: &[RatVector], b: &[RatVector]) -> bool {
    let ra = span_rank(a);
    ra == span_rank(b) && {
        let mut all = a.to_vec();
        all.extend_from_slice(b);
        span_rank(&all) == ra
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::{int, rat};

    #[test]
    fn rref_identity_and_zero() {
        let (_, p) = RatMatrix::identity(3).rref();
        assert_eq!(p, vec![0, 1, 2]);
        let (r, p) = RatMatrix::zeros(2, 2).rref();
        assert!(p.is_empty());
        assert!(r.is_zero());
    }

    #[test]
    fn rref_rank_one_by_hand() {
        // [[1,2],[2,4]] -> subtract 2*row0 from row1 -> [[1,2],[0,0]].
        let m = RatMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        let (r, p) = m.rref();
        assert_eq!(p, vec![0]);
        assert_eq!(r, RatMatrix::from_i64(&[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn rref_custom_order_reports_original_indices() {
        let m = RatMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        let (r, p) = m.rref_with_order(&[1, 0]).unwrap();
        assert_eq!(p, vec![1]);
        assert_eq!(r, RatMatrix::from_rows(vec![vec![rat(1, 2), int(1)], vec![int(0), int(0)]]).unwrap());
        assert!(m.rref_with_order(&[0, 0]).is_err());
        assert!(m.rref_with_order(&[0]).is_err());
    }

    #[test]
    fn kernel_edges() {
        assert!(RatMatrix::identity(6).kernel_basis().is_empty());
        assert_eq!(RatMatrix::zeros(1, 6).kernel_basis().len(), 6);
    }

    #[test]
    fn kernel_of_constructed_rank_four() {
        // Rows chosen orthogonal to k1 = (1,0,-1,2,0,0) and k2 = (0,1,0,0,-1,3).
        let m = RatMatrix::from_i64(&[
            &[1, 0, 1, 0, 0, 0],
            &[0, 1, 0, 0, 1, 0],
            &[2, 0, 0, -1, 0, 0],
            &[0, 3, 0, 0, 0, -1],
            &[3, 0, 1, -1, 0, 0],
            &[0, 4, 0, 0, 1, -1],
        ]);
        assert_eq!(m.rank(), 4);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
        let expected = vec![
            vec![int(1), int(0), int(-1), int(2), int(0), int(0)],
            vec![int(0), int(1), int(0), int(0), int(-1), int(3)],
        ];
        assert!(same_span(&k, &expected));
    }

    #[test]
    fn exp_of_zero_and_elementary() {
        assert_eq!(RatMatrix::zeros(6, 6).exp_nilpotent().unwrap(), RatMatrix::identity(6));
        let mut e21 = RatMatrix::zeros(6, 6);
        e21[(1, 0)] = int(1);
        let mut expected = RatMatrix::identity(6);
        expected[(1, 0)] = int(1);
        assert_eq!(e21.exp_nilpotent().unwrap(), expected);
    }

    #[test]
    fn exp_of_subdiagonal_shift_by_series_summation() {
        // Oracle: sum the series directly with factorials, independent of exp_nilpotent.
        let mut n = RatMatrix::zeros(6, 6);
        for i in 1..6 {
            n[(i, i - 1)] = int(1);
        }
        let e = n.exp_nilpotent().unwrap();
        let mut fact = vec![int(1)];
        for k in 1..6 {
            let next = &fact[k - 1] * int(k as i64);
            fact.push(next);
        }
        for i in 0..6 {
            for j in 0..6 {
                let want = if i >= j { fact[i - j].recip() } else { int(0) };
                assert_eq!(e[(i, j)], want, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn exp_rejects_non_nilpotent() {
        assert!(matches!(RatMatrix::identity(6).exp_nilpotent(), Err(Error::NotNilpotent)));
        let mut m = RatMatrix::zeros(2, 2);
        m[(0, 1)] = int(1);
        m[(1, 0)] = int(1);
        assert!(m.exp_nilpotent().is_err());
    }

    #[test]
    fn inverse_and_determinant() {
        let m = RatMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        assert_eq!(m.determinant(), int(1));
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, RatMatrix::identity(2));
        assert!(RatMatrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
        assert!(m.is_positive_definite());
        assert!(!RatMatrix::from_i64(&[&[1, 2], &[2, 1]]).is_positive_definite());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = RatMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        let x = m.solve(&[int(3), int(6)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![int(3), int(6)]);
        assert!(m.solve(&[int(3), int(5)]).is_none());
    }
}

//! Arithmetic in a real quadratic field `Q(sqrt d)`.
//!
//! Only what the exceptional isotropy checks need: ring operations and
//! matrix products over a single fixed radicand.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::matrix::RatMatrix;
use super::rational::Rational;

/// `a + b * sqrt(d)` with `d` a fixed non-square positive integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    pub a: Rational,
    pub b: Rational,
    pub d: i64,
}

impl Surd {
    pub fn new(a: Rational, b: Rational, d: i64) -> Self {
        Self { a, b, d }
    }

    pub fn rational(a: Rational, d: i64) -> Self {
        Self { a, b: Rational::zero(), d }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.d, other.d, "mixed radicands");
    }
}

impl Add for &Surd {
    type Output = Surd;
    fn add(self, o: &Surd) -> Surd {
        self.check(o);
        Surd::new(&self.a + &o.a, &self.b + &o.b, self.d)
    }
}

impl Sub for &Surd {
    type Output = Surd;
    fn sub(self, o: &Surd) -> Surd {
        self.check(o);
        Surd::new(&self.a - &o.a, &self.b - &o.b, self.d)
    }
}

impl Mul for &Surd {
    type Output = Surd;
    fn mul(self, o: &Surd) -> Surd {
        self.check(o);
        let d = Rational::from_integer(self.d.into());
        Surd::new(
            &self.a * &o.a + &self.b * &o.b * d,
            &self.a * &o.b + &self.b * &o.a,
            self.d,
        )
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd::new(-&self.a, -&self.b, self.d)
    }
}

/// Square matrix over `Q(sqrt d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurdMatrix {
    pub d: i64,
    pub entries: Vec<Vec<Surd>>,
}

impl SurdMatrix {
    /// `rational + irrational * sqrt(d)`, entry-wise.
    pub fn from_parts(rational: &RatMatrix, irrational: &RatMatrix, d: i64) -> Self {
        assert_eq!((rational.rows(), rational.cols()), (irrational.rows(), irrational.cols()));
        let entries = (0..rational.rows())
            .map(|i| {
                (0..rational.cols())
                    .map(|j| Surd::new(rational[(i, j)].clone(), irrational[(i, j)].clone(), d))
                    .collect()
            })
            .collect();
        Self { d, entries }
    }

    pub fn from_rational(m: &RatMatrix, d: i64) -> Self {
        Self::from_parts(m, &RatMatrix::zeros(m.rows(), m.cols()), d)
    }

    pub fn transpose(&self) -> Self {
        let n = self.entries.len();
        let m = self.entries.first().map_or(0, Vec::len);
        let entries = (0..m)
            .map(|j| (0..n).map(|i| self.entries[i][j].clone()).collect())
            .collect();
        Self { d: self.d, entries }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.d, o.d);
        let n = self.entries.len();
        let k = o.entries.len();
        let m = o.entries.first().map_or(0, Vec::len);
        let zero = Surd::rational(Rational::zero(), self.d);
        let entries = (0..n)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        (0..k).fold(zero.clone(), |acc, l| {
                            &acc + &(&self.entries[i][l] * &o.entries[l][j])
                        })
                    })
                    .collect()
            })
            .collect();
        Self { d: self.d, entries }
    }
}

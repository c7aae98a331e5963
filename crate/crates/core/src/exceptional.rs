//! One-parameter isometric automorphisms of h13, h19+ and h26- that lie
//! outside the component group.
//!
//! The metrics involve `sqrt(1 - r^2)`, so the checks run in `Q(sqrt d)`.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::Catalog;
use crate::linalg::{format_rational, RatMatrix, Rational, SurdMatrix};

/// `sqrt(1 - r^2) = coeff * sqrt(d)` with `d` squarefree.
fn radical(r: &Rational) -> Result<(Rational, i64)> {
    if !r.is_positive() || *r > Rational::one() {
        return Err(Error::Unsupported("r must lie in (0, 1]".into()));
    }
    let (a, b) = (r.numer().clone(), r.denom().clone());
    let m = &b * &b - &a * &a;
    let mut m: i64 = i64::try_from(m).map_err(|_| Error::Unsupported("r too large".into()))?;
    if m == 0 {
        return Ok((Rational::zero(), 1));
    }
    let mut k = 1i64;
    let mut p = 2i64;
    while p * p <= m {
        while m % (p * p) == 0 {
            m /= p * p;
            k *= p;
        }
        p += 1;
    }
    let b = Rational::from_integer(b);
    Ok((Rational::from_integer(k.into()) / b, m))
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// `(φ_r, rational part of σ_r, sqrt(d)-part of σ_r, d)` for one of the three algebras.
pub fn exceptional_pair(name: &str, r: &Rational) -> Result<(RatMatrix, RatMatrix, RatMatrix, i64)> {
    let (c, d) = radical(r)?;
    let ri = r.recip();
    let one = Rational::one();
    let mut phi = RatMatrix::zeros(6, 6);
    let mut sig = RatMatrix::identity(6);
    let mut rad = RatMatrix::zeros(6, 6);
    rad[(1, 0)] = &c * &ri;
    match name {
        "h13" => {
            phi[(0, 1)] = -r.clone();
            phi[(1, 0)] = -ri.clone();
            phi[(2, 2)] = one.clone();
            phi[(3, 2)] = -one.clone();
            phi[(3, 3)] = -one.clone();
            phi[(4, 5)] = r.clone();
            phi[(5, 4)] = ri.clone();
            sig[(3, 2)] = q(1, 2);
            sig[(4, 4)] = ri.clone();
        }
        "h19+" => {
            phi[(0, 2)] = r.clone();
            phi[(1, 1)] = one.clone();
            phi[(2, 0)] = ri.clone();
            phi[(3, 4)] = ri.clone();
            phi[(4, 3)] = r.clone();
            phi[(5, 5)] = one.clone();
            rad[(2, 1)] = c.clone();
            sig[(3, 3)] = r * r;
            sig[(4, 4)] = r.clone();
        }
        "h26-" => {
            phi[(0, 1)] = r.clone();
            phi[(1, 0)] = ri.clone();
            phi[(2, 2)] = -one.clone();
            phi[(3, 4)] = -r.clone();
            phi[(4, 3)] = -ri.clone();
            phi[(5, 5)] = -one.clone();
            sig[(3, 3)] = ri.clone();
        }
        other => return Err(Error::Unsupported(format!("no exceptional family for {other}"))),
    }
    Ok((phi, sig, rad, d))
}

#[derive(Clone, Debug, Serialize)]
pub struct ExceptionalCheck {
    pub algebra: String,
    pub r: String,
    /// Radicand of the field the metric lives in.
    pub radicand: i64,
    pub automorphism: bool,
    /// `φᵀ g φ = g`.
    pub isometry: bool,
    /// `φᵀ g = g φ`.
    pub linear_condition: bool,
    /// Whether φ is outside the component group `D`.
    pub outside_component_group: bool,
}

impl ExceptionalCheck {
    pub fn passed(&self) -> bool {
        self.automorphism && self.isometry && self.linear_condition
    }
}

pub fn check_exceptional(name: &str, r: &Rational) -> Result<ExceptionalCheck> {
    let entry = Catalog::builtin().get(name)?;
    let alg = entry.standard();
    let (phi, sig, rad, d) = exceptional_pair(&entry.name, r)?;
    let s = SurdMatrix::from_parts(&sig, &rad, d);
    let g = s.transpose().mul(&s);
    let p = SurdMatrix::from_rational(&phi, d);
    let pt = p.transpose();
    let group = crate::automorphisms::component_group(alg, &entry.component_generators)?;
    Ok(ExceptionalCheck {
        algebra: entry.name.clone(),
        r: format_rational(r),
        radicand: d,
        automorphism: alg.is_automorphism(&phi),
        isometry: pt.mul(&g).mul(&p) == g,
        linear_condition: pt.mul(&g) == g.mul(&p),
        outside_component_group: !group.contains(&phi),
    })
}

//! Ricci operator of left-invariant metrics on nilpotent Lie groups and the
//! nilsoliton equation `Ric = c I + D`.
//!
//! For a nilpotent algebra and an orthonormal frame,
//! `Ric(x, y) = -1/2 Σ g([x,ẽ_i],ẽ_k) g([y,ẽ_i],ẽ_k) + 1/4 Σ g([ẽ_i,ẽ_k],x) g([ẽ_i,ẽ_k],y)`.
//! With a diagonal rational metric every square root cancels, so the exact
//! path stays in `Q`. General metrics go through a floating Gram–Schmidt frame.

use std::str::FromStr;

use nalgebra::DMatrix;
use num_traits::{Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::derivations::{combine, derivation_space};
use crate::error::{Error, Result};
use crate::lie::{Catalog, LieAlgebra};
use crate::linalg::{format_rational, exact_root, parse_rational, rat, to_f64, RatMatrix, Rational};

/// Relative tolerance for the floating nilsoliton residual.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Approximate,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "approximate" | "approx" => Ok(Mode::Approximate),
            other => Err(Error::Parse(format!("unknown mode `{other}` (exact | approximate)"))),
        }
    }
}

/// A matrix that is either exact or floating.
#[derive(Clone, Debug, PartialEq)]
pub enum Operator {
    Exact(RatMatrix),
    Approximate(DMatrix<f64>),
}

impl Operator {
    pub fn exact(&self) -> Option<&RatMatrix> {
        match self {
            Operator::Exact(m) => Some(m),
            Operator::Approximate(_) => None,
        }
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        match self {
            Operator::Exact(m) => DMatrix::from_fn(m.rows(), m.cols(), |i, j| to_f64(&m[(i, j)])),
            Operator::Approximate(m) => m.clone(),
        }
    }
}

impl Serialize for Operator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Operator::Exact(m) => m.serialize(s),
            Operator::Approximate(m) => {
                let mut seq = s.serialize_seq(Some(m.nrows()))?;
                for i in 0..m.nrows() {
                    let row: Vec<f64> = (0..m.ncols()).map(|j| m[(i, j)]).collect();
                    seq.serialize_element(&row)?;
                }
                seq.end()
            }
        }
    }
}

/// An exact rational or a float, serialized as a string or a number.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Approximate(f64),
}

impl Scalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => to_f64(r),
            Scalar::Approximate(x) => *x,
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(r) => s.serialize_str(&format_rational(r)),
            Scalar::Approximate(x) => s.serialize_f64(*x),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RicciResult {
    pub mode: Mode,
    /// Matrix of the Ricci operator acting on columns in the basis `e_1, ..., e_n`.
    pub operator: Operator,
    pub basis_note: &'static str,
    /// Condition number of the metric (approximate mode only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition: Option<f64>,
}

const BASIS_NOTE: &str = "standard basis e_i; computed through the orthonormal frame obtained by Gram-Schmidt";

/// Checks that `g([e_i, e_k], e_i)`-type terms vanish, i.e. `c^i_{ik} = 0`.
///
/// Those terms belong to the non-unimodular part of the Ricci formula and
/// are assumed absent.
fn assert_trace_free(alg: &LieAlgebra) -> Result<()> {
    let n = alg.dim();
    for i in 0..n {
        for k in 0..n {
            if !alg.constant(i, k, i).is_zero() {
                return Err(Error::Unsupported(format!(
                    "structure constant c^{}_{{{}{}}} is nonzero; basis is not adapted",
                    i + 1,
                    i + 1,
                    k + 1
                )));
            }
        }
    }
    Ok(())
}

fn check_metric(alg: &LieAlgebra, g: &RatMatrix) -> Result<()> {
    if g.rows() != alg.dim() || g.cols() != alg.dim() {
        return Err(Error::Shape(format!("metric must be {0}x{0}", alg.dim())));
    }
    if !g.is_positive_definite() {
        return Err(Error::InvalidMetric("metric must be symmetric positive definite".into()));
    }
    Ok(())
}

/// Bilinear form `Ric(e_j, e_h)` for a diagonal metric.
fn exact_form(alg: &LieAlgebra, g: &RatMatrix) -> RatMatrix {
    let n = alg.dim();
    let w: Vec<Rational> = (0..n).map(|i| g[(i, i)].recip()).collect();
    // C(a, b, k) = g([e_a, e_b], e_k) = c^k_{ab} g_kk.
    let cc = |a: usize, b: usize, k: usize| alg.constant(a, b, k) * &g[(k, k)];
    let half = rat(1, 2);
    let quarter = rat(1, 4);
    let mut form = RatMatrix::zeros(n, n);
    for j in 0..n {
        for h in j..n {
            let mut acc = Rational::zero();
            for i in 0..n {
                for k in 0..n {
                    let wik = &w[i] * &w[k];
                    let a = cc(j, i, k) * cc(h, i, k);
                    let b = cc(i, k, j) * cc(i, k, h);
                    if !a.is_zero() {
                        acc -= &half * &wik * a;
                    }
                    if !b.is_zero() {
                        acc += &quarter * &wik * b;
                    }
                }
            }
            form[(j, h)] = acc.clone();
            form[(h, j)] = acc;
        }
    }
    form
}

fn approximate(alg: &LieAlgebra, g: &RatMatrix) -> Result<(DMatrix<f64>, f64)> {
    let n = alg.dim();
    let gf = DMatrix::from_fn(n, n, |i, j| to_f64(&g[(i, j)]));
    let chol = gf.clone().cholesky().ok_or_else(|| Error::InvalidMetric("Cholesky factorization failed".into()))?;
    // Columns of F are the Gram–Schmidt frame ẽ_i written in the basis e: F = L^{-T}.
    let l = chol.l();
    let f = l
        .transpose()
        .try_inverse()
        .ok_or_else(|| Error::InvalidMetric("singular Cholesky factor".into()))?;
    let ad: Vec<DMatrix<f64>> =
        (0..n).map(|a| DMatrix::from_fn(n, n, |k, b| to_f64(alg.constant(a, b, k)))).collect();
    // bracket(u, v) = Σ u_a v_b c^k_{ab} e_k
    let bracket = |u: &nalgebra::DVector<f64>, v: &nalgebra::DVector<f64>| {
        let mut out = nalgebra::DVector::zeros(n);
        for a in 0..n {
            if u[a] != 0.0 {
                out += &ad[a] * v * u[a];
            }
        }
        out
    };
    let frame: Vec<nalgebra::DVector<f64>> = (0..n).map(|i| f.column(i).into_owned()).collect();
    let mut c = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            let b = bracket(&frame[i], &frame[j]);
            let gb = &gf * b;
            for k in 0..n {
                c[(i * n + j) * n + k] = gb.dot(&frame[k]);
            }
        }
    }
    let cijk = |i: usize, j: usize, k: usize| c[(i * n + j) * n + k];
    let mut r = DMatrix::zeros(n, n);
    for j in 0..n {
        for h in 0..n {
            let mut acc = 0.0;
            for i in 0..n {
                for k in 0..n {
                    acc += -0.5 * cijk(j, i, k) * cijk(h, i, k) + 0.25 * cijk(i, k, j) * cijk(i, k, h);
                }
            }
            r[(j, h)] = acc;
        }
    }
    // r is the operator in the orthonormal frame; move it back to e.
    let finv = f.clone().try_inverse().ok_or_else(|| Error::InvalidMetric("singular frame".into()))?;
    let op = &f * r * finv;
    let sv = gf.singular_values();
    let cond = sv.max() / sv.min();
    Ok((op, cond))
}

pub fn ricci(alg: &LieAlgebra, g: &RatMatrix, mode: Mode) -> Result<RicciResult> {
    check_metric(alg, g)?;
    match mode {
        Mode::Exact => {
            if !g.is_diagonal() {
                return Err(Error::ExactModeNeedsDiagonal);
            }
            assert_trace_free(alg)?;
            let form = exact_form(alg, g);
            let ginv = g.inverse().expect("positive definite");
            Ok(RicciResult { mode, operator: Operator::Exact(&ginv * &form), basis_note: BASIS_NOTE, condition: None })
        }
        Mode::Approximate => {
            let (op, cond) = approximate(alg, g)?;
            Ok(RicciResult { mode, operator: Operator::Approximate(op), basis_note: BASIS_NOTE, condition: Some(cond) })
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NilsolitonCertificate {
    pub mode: Mode,
    pub c: Scalar,
    #[serde(rename = "D")]
    pub d: Operator,
    /// Max-norm of `Ric - cI - D`.
    pub residual: Scalar,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum NilsolitonOutcome {
    Nilsoliton(NilsolitonCertificate),
    /// `residual` is the max-norm of the part of `Ric` orthogonal to `R I + Der`.
    NotNilsoliton { mode: Mode, residual: Scalar },
}

impl NilsolitonOutcome {
    pub fn is_nilsoliton(&self) -> bool {
        matches!(self, NilsolitonOutcome::Nilsoliton(_))
    }

    pub fn certificate(&self) -> Option<&NilsolitonCertificate> {
        match self {
            NilsolitonOutcome::Nilsoliton(c) => Some(c),
            NilsolitonOutcome::NotNilsoliton { .. } => None,
        }
    }
}

pub fn nilsoliton_check(alg: &LieAlgebra, g: &RatMatrix, mode: Mode) -> Result<NilsolitonOutcome> {
    nilsoliton_check_with(alg, g, mode, DEFAULT_TOLERANCE)
}

/// Solves `Ric = c I + Σ x_l D_l` over a basis `D_l` of `Der(h)`.
pub fn nilsoliton_check_with(alg: &LieAlgebra, g: &RatMatrix, mode: Mode, tolerance: f64) -> Result<NilsolitonOutcome> {
    let ric = ricci(alg, g, mode)?;
    let der = derivation_space(alg);
    let n = alg.dim();
    let mut cols = vec![RatMatrix::identity(n)];
    cols.extend(der.basis.iter().cloned());
    match ric.operator {
        Operator::Exact(r) => {
            let a = RatMatrix::from_columns(&cols.iter().map(RatMatrix::to_vector).collect::<Vec<_>>())?;
            let b = r.to_vector();
            match a.solve(&b) {
                Some(x) => {
                    let d = combine(&der.basis, &x[1..]);
                    debug_assert!(alg.is_derivation(&d));
                    let c = x[0].clone();
                    let resid = &(&r - &RatMatrix::identity(n).scale(&c)) - &d;
                    Ok(NilsolitonOutcome::Nilsoliton(NilsolitonCertificate {
                        mode,
                        c: Scalar::Exact(c),
                        d: Operator::Exact(d),
                        residual: Scalar::Exact(max_abs(&resid)),
                    }))
                }
                None => {
                    // Exact least squares through the normal equations.
                    let at = a.transpose();
                    let basis = crate::linalg::span_basis(&at.to_rows());
                    let p = RatMatrix::from_columns(&basis)?;
                    let pt = p.transpose();
                    let x = (&pt * &p).solve(&pt.mul_vec(&b)).expect("full column rank");
                    let fit = p.mul_vec(&x);
                    let resid: Vec<Rational> = b.iter().zip(&fit).map(|(u, v)| u - v).collect();
                    let m = resid.iter().map(|v| v.abs()).max().unwrap_or_else(Rational::zero);
                    Ok(NilsolitonOutcome::NotNilsoliton { mode, residual: Scalar::Exact(m) })
                }
            }
        }
        Operator::Approximate(r) => {
            let m = cols.len();
            let a = DMatrix::from_fn(n * n, m, |row, col| to_f64(&cols[col][(row / n, row % n)]));
            let b = nalgebra::DVector::from_fn(n * n, |row, _| r[(row / n, row % n)]);
            let svd = a.clone().svd(true, true);
            let x = svd.solve(&b, 1e-12).map_err(|e| Error::Unsupported(e.to_string()))?;
            let resid = &b - &a * &x;
            let scale = r.amax().max(1.0);
            let res = resid.amax();
            if res > tolerance * scale {
                return Ok(NilsolitonOutcome::NotNilsoliton { mode, residual: Scalar::Approximate(res) });
            }
            let mut d = DMatrix::zeros(n, n);
            for (l, dl) in der.basis.iter().enumerate() {
                d += DMatrix::from_fn(n, n, |i, j| to_f64(&dl[(i, j)])) * x[l + 1];
            }
            Ok(NilsolitonOutcome::Nilsoliton(NilsolitonCertificate {
                mode,
                c: Scalar::Approximate(x[0]),
                d: Operator::Approximate(d),
                residual: Scalar::Approximate(res),
            }))
        }
    }
}

fn max_abs(m: &RatMatrix) -> Rational {
    m.to_vector().iter().map(|v| v.abs()).max().unwrap_or_else(Rational::zero)
}

/// Algebras with a one-parameter family of diagonal nilsoliton metrics.
pub const NILSOLITON_ALGEBRAS: [&str; 5] = ["h9", "h10", "h21", "h22", "h28"];

/// Diagonal nilsoliton metric of the family at `r`, when its entries are rational.
///
/// h21 needs `r = 6 t^3` and h28 needs `r = 6 t^2`. The h22 family is
/// rational only for irrational `r`; use [`h22_family`] or [`nilsoliton_witness`].
pub fn nilsoliton_family(name: &str, r: &Rational) -> Result<RatMatrix> {
    let entry = Catalog::builtin().get(name)?;
    if !r.is_positive() {
        return Err(Error::InvalidMetric("r must be positive".into()));
    }
    let one = Rational::from_integer(1.into());
    let r2 = r * r;
    let diag = match entry.name.as_str() {
        "h9" => vec![one.clone(), one.clone(), r * rat(2, 1), one, r.clone(), r2],
        "h10" => vec![one.clone(), one.clone(), one, r.clone(), r * rat(1, 2), r2],
        "h21" => {
            let t = exact_root(&(r / rat(6, 1)), 3)
                .ok_or_else(|| Error::Unsupported(format!("h21 family is irrational unless r/6 is a rational cube (r = {})", format_rational(r))))?;
            let t2 = &t * &t;
            vec![one.clone(), one.clone(), one, &t2 * rat(3, 1), &t2 * &t2 * rat(12, 1), r2]
        }
        "h28" => {
            let t = exact_root(&(r / rat(6, 1)), 2)
                .ok_or_else(|| Error::Unsupported(format!("h28 family is irrational unless r/6 is a rational square (r = {})", format_rational(r))))?;
            vec![one.clone(), one, &t * rat(2, 1), r.clone(), &t * &t * &t * rat(18, 1), r2]
        }
        "h22" => {
            return Err(Error::Unsupported(
                "h22 family has irrational entries for every rational r; use the witness or the t-parametrization".into(),
            ))
        }
        other => return Err(Error::Unsupported(format!("no nilsoliton family recorded for {other}"))),
    };
    Ok(RatMatrix::diagonal(&diag))
}

/// The h22 family at `r = 3 sqrt(6) t^4`, where it is rational.
pub fn h22_family(t: &Rational) -> Result<RatMatrix> {
    if !t.is_positive() {
        return Err(Error::InvalidMetric("t must be positive".into()));
    }
    let t2 = t * t;
    let t4 = &t2 * &t2;
    let one = Rational::from_integer(1.into());
    Ok(RatMatrix::diagonal(&[
        one.clone(),
        &t2 * rat(3, 1),
        one,
        &t4 * rat(9, 1),
        &t4 * &t2 * rat(27, 1),
        &t4 * &t4 * rat(54, 1),
    ]))
}

/// Tabulated diagonal nilsoliton metric for one of the five algebras.
pub fn nilsoliton_witness(name: &str) -> Result<RatMatrix> {
    let entry = Catalog::builtin().get(name)?;
    let diag = crate::reference::Reference::get()
        .nilsoliton_witnesses
        .get(&entry.name)
        .ok_or_else(|| Error::Unsupported(format!("no nilsoliton witness for {}", entry.name)))?;
    let diag = diag.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
    Ok(RatMatrix::diagonal(&diag))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::parse_tuple;

    #[test]
    fn heisenberg_plus_abelian() {
        let h = parse_tuple("(0,0,0,0,0,12)").unwrap();
        let r = ricci(&h, &RatMatrix::identity(6), Mode::Exact).unwrap();
        let m = r.operator.exact().unwrap();
        let expect = RatMatrix::diagonal(&[rat(-1, 2), rat(-1, 2), rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 2)]);
        assert_eq!(m, &expect);
    }

    #[test]
    fn exact_needs_diagonal() {
        let h = parse_tuple("(0,0,0,0,0,12)").unwrap();
        let mut g = RatMatrix::identity(6);
        g[(1, 0)] = rat(1, 3);
        g[(0, 1)] = rat(1, 3);
        assert_eq!(ricci(&h, &g, Mode::Exact).unwrap_err(), Error::ExactModeNeedsDiagonal);
        assert!(ricci(&h, &g, Mode::Approximate).is_ok());
    }

    #[test]
    fn families() {
        assert_eq!(nilsoliton_family("h9", &rat(2, 1)).unwrap(), nilsoliton_witness("h9").unwrap());
        assert_eq!(nilsoliton_family("h10", &rat(2, 1)).unwrap(), nilsoliton_witness("h10").unwrap());
        assert_eq!(nilsoliton_family("h21", &rat(6, 1)).unwrap(), nilsoliton_witness("h21").unwrap());
        assert_eq!(nilsoliton_family("h28", &rat(24, 1)).unwrap(), nilsoliton_witness("h28").unwrap());
        assert_eq!(h22_family(&rat(1, 1)).unwrap(), nilsoliton_witness("h22").unwrap());
        assert!(matches!(nilsoliton_family("h22", &rat(1, 1)), Err(Error::Unsupported(_))));
        assert!(matches!(nilsoliton_family("h21", &rat(2, 1)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("exact".parse::<Mode>().unwrap(), Mode::Exact);
        assert!("fast".parse::<Mode>().is_err());
    }
}

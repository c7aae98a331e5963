//! Tuple notation: slot `k` holding the token `ij` means `[e_i, e_j] = -e_k`.
//!
//! `(0,0,0,0,12,51+23)` therefore has `[e_1,e_2] = -e_5`, `[e_1,e_5] = e_6`
//! and `[e_2,e_3] = -e_6`.

use num_traits::{One, Signed, Zero};

use super::algebra::{Basis, LieAlgebra};
use crate::error::{Error, Result};
use crate::linalg::Rational;

pub fn parse_tuple(s: &str) -> Result<LieAlgebra> {
    parse_tuple_named(s.trim(), Basis::Custom, s)
}

pub fn parse_tuple_named(name: &str, basis: Basis, s: &str) -> Result<LieAlgebra> {
    let t = s.trim();
    let inner = t
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("tuple `{s}` must be enclosed in parentheses")))?;
    let slots: Vec<&str> = inner.split(',').map(str::trim).collect();
    let n = slots.len();
    if !(1..=9).contains(&n) {
        return Err(Error::Parse(format!("tuple `{s}` must have between 1 and 9 slots")));
    }
    let mut c = vec![Rational::zero(); n * n * n];
    for (k, slot) in slots.iter().enumerate() {
        for (sign, i, j) in parse_slot(slot, n).map_err(|m| Error::Parse(format!("slot {}: {m}", k + 1)))? {
            let v = Rational::from_integer((-sign).into());
            c[(i * n + j) * n + k] += &v;
            c[(j * n + i) * n + k] -= &v;
        }
    }
    LieAlgebra::new(name, basis, n, c).map_err(|e| match e {
        Error::Jacobi(m) => Error::Parse(format!("tuple `{s}`: {m}")),
        other => other,
    })
}

/// Terms of one slot as `(sign, i, j)` with zero-based indices.
fn parse_slot(slot: &str, n: usize) -> std::result::Result<Vec<(i64, usize, usize)>, String> {
    if slot.is_empty() {
        return Err("empty slot".into());
    }
    if slot == "0" {
        return Ok(Vec::new());
    }
    let mut terms = Vec::new();
    let mut sign = 1i64;
    let mut token = String::new();
    let mut expect_token = true;
    let flush = |token: &mut String, sign: i64, terms: &mut Vec<(i64, usize, usize)>| {
        let b = token.as_bytes();
        if b.len() != 2 || !b.iter().all(u8::is_ascii_digit) {
            return Err(format!("malformed token `{token}`"));
        }
        let (i, j) = ((b[0] - b'0') as usize, (b[1] - b'0') as usize);
        if i == 0 || j == 0 || i > n || j > n {
            return Err(format!("index out of range in `{token}`"));
        }
        if i == j {
            return Err(format!("repeated index in `{token}`"));
        }
        terms.push((sign, i - 1, j - 1));
        token.clear();
        Ok(())
    };
    for (pos, ch) in slot.chars().enumerate() {
        match ch {
            '+' | '-' => {
                if !token.is_empty() {
                    flush(&mut token, sign, &mut terms)?;
                } else if !(pos == 0 && expect_token) {
                    return Err(format!("misplaced sign in `{slot}`"));
                }
                sign = if ch == '-' { -1 } else { 1 };
                expect_token = true;
            }
            c if c.is_whitespace() => return Err(format!("whitespace inside `{slot}`")),
            c => {
                token.push(c);
                expect_token = false;
            }
        }
    }
    if token.is_empty() {
        return Err(format!("dangling sign in `{slot}`"));
    }
    flush(&mut token, sign, &mut terms)?;
    Ok(terms)
}

/// Inverse of [`parse_tuple`] for integral structure constants.
pub fn serialize_tuple(alg: &LieAlgebra) -> Result<String> {
    let n = alg.dim();
    if n > 9 {
        return Err(Error::Unsupported("tuple notation needs single-digit indices".into()));
    }
    let mut slots = Vec::with_capacity(n);
    for k in 0..n {
        let mut s = String::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let c = alg.constant(i, j, k);
                if c.is_zero() {
                    continue;
                }
                if !c.is_integer() {
                    return Err(Error::Unsupported(format!(
                        "non-integral constant {c} cannot be written as a tuple"
                    )));
                }
                // c = -1 is the bare token; c = +1 carries a minus sign.
                let sign = if c.is_positive() { '-' } else { '+' };
                let reps = c.abs();
                let mut r = Rational::zero();
                while r < reps {
                    if !s.is_empty() || sign == '-' {
                        s.push(sign);
                    }
                    s.push_str(&format!("{}{}", i + 1, j + 1));
                    r += Rational::one();
                }
            }
        }
        slots.push(if s.is_empty() { "0".to_string() } else { s });
    }
    Ok(format!("({})", slots.join(",")))
}

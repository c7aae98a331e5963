//! Exact rational linear algebra.

pub mod matrix;
pub mod rational;
pub mod surd;

pub use matrix::{dot, in_span, same_span, span_basis, span_rank, RatMatrix, RatVector};
pub use rational::{exact_root, format_rational, int, parse_rational, pow_i, rat, rational_sqrt, to_f64, Rational};
pub use surd::{Surd, SurdMatrix};

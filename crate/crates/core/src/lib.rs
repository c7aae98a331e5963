//! Exact computations on six-dimensional nilpotent Lie algebras and their left-invariant metrics.

pub mod automorphisms;
pub mod curvature;
pub mod derivations;
pub mod error;
pub mod exceptional;
pub mod lie;
pub mod linalg;
pub mod moduli;
pub mod reference;
pub mod symmetry;
pub mod verify;

pub use error::{Error, Result};
pub use lie::{Catalog, LieAlgebra, Subspace};
pub use linalg::{RatMatrix, RatVector, Rational};
pub use curvature::Mode;
pub use moduli::{SigmaPattern, SigmaPoint};
pub use symmetry::SymmetryResult;

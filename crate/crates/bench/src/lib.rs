//! Fixtures shared by the benchmarks.

use nilmetriq::moduli::{seeded_point, sigma_pattern};
use nilmetriq::{Catalog, LieAlgebra, RatMatrix};

pub fn algebra(name: &str) -> &'static LieAlgebra {
    Catalog::builtin().algebra(name).expect("catalog name")
}

/// A seeded generic metric from the cross-section of `name`.
pub fn generic_metric(name: &str, seed: u64) -> RatMatrix {
    let pattern = sigma_pattern(algebra(name)).expect("section pattern");
    seeded_point(&pattern, seed).metric()
}

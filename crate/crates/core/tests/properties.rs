mod common;

use common::props;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jacobi_holds_in_every_basis(seed in any::<u64>()) {
        prop_assert_eq!(props::jacobi(seed), Ok(()));
    }

    #[test]
    fn derivations_satisfy_leibniz(seed in any::<u64>()) {
        prop_assert_eq!(props::derivation_identity(seed), Ok(()));
    }

    #[test]
    fn exp_of_negative_is_inverse(seed in any::<u64>()) {
        prop_assert_eq!(props::exp_inverse(seed), Ok(()));
    }

    #[test]
    fn ricci_is_self_adjoint(seed in any::<u64>()) {
        prop_assert_eq!(props::ricci_self_adjoint(seed), Ok(()));
    }

    #[test]
    fn ricci_scales_inversely(seed in any::<u64>()) {
        prop_assert_eq!(props::ricci_scaling(seed), Ok(()));
    }

    #[test]
    fn ricci_commutes_with_automorphisms(seed in any::<u64>()) {
        prop_assert_eq!(props::ricci_equivariance(seed), Ok(()));
    }

    #[test]
    fn symmetry_kernel_follows_automorphisms(seed in any::<u64>()) {
        prop_assert_eq!(props::kernel_equivariance(seed), Ok(()));
    }

    #[test]
    fn ricci_agrees_with_oracle(seed in any::<u64>()) {
        prop_assert_eq!(props::ricci_oracle_agreement(seed), Ok(()));
    }
}

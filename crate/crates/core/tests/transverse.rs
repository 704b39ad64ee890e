//! Transverse structures: Riccati triples from structural betas and
//! Godbillon-Vey sequences of blow-up normal forms.

mod common;

use common::structures::*;
use folia_core::forms::VField;
use folia_core::transverse::{gvs_compute, gvs_verify, riccati_triple, structural_system_check, StructuralBetas, DEFAULT_CAP};
use proptest::prelude::*;

fn nonzero() -> impl Strategy<Value = (i64, i64)> {
    ((-9i64..=9).prop_filter("nonzero", |p| *p != 0), 1i64..=7)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn log_family_triples(c in nonzero()) {
        prop_assert_eq!(check_family(&log_family(c)), Ok(()));
    }

    #[test]
    fn affine_family_triples(c in nonzero()) {
        prop_assert_eq!(check_family(&affine_family(c)), Ok(()));
    }
}

#[test]
fn riccati_triple_refuses_violations() {
    let b = StructuralBetas::new([f("dtau1"), f("dtau2"), f("tau1 dtau2")], "z").unwrap();
    assert!(structural_system_check(&b).is_err());
    assert!(riccati_triple(&b).is_err());
    assert!(StructuralBetas::new([f("z dtau1"), f("dtau2"), f("dtau2")], "z").is_err());
}

#[test]
fn case2_shapes_have_lengths_zero_to_four() {
    for (c, want) in CASE2_ROWS {
        assert_eq!(length_along(&case2_shape(c, "tau1 + 2"), "x"), Ok(want), "{c:?}");
    }
}

#[test]
fn case3_shapes_have_lengths_zero_to_three() {
    for (c, want) in CASE3_ROWS {
        assert_eq!(length_along(&case3_shape(c, "1 - tau1"), "z"), Ok(want), "{c:?}");
    }
}

#[test]
fn non_integrable_shape_fails_verification() {
    let w = f("dz + z dtau1 + z^2 tau1 dtau2");
    let s = gvs_compute(&w, &VField::partial("z"), DEFAULT_CAP).unwrap();
    assert_eq!(s.length(), 2);
    assert!(gvs_verify(&s).is_err());
}

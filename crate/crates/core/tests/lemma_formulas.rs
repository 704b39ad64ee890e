//! The coordinate changes of the blow-up analysis, recomputed with the
//! generic pull-back machinery and compared with closed-form coefficient
//! lists on generic symbolic data.

mod common;

use common::lemmas;

const SEEDS: [u64; 2] = [1, 2];

#[test]
fn case2_normalization_and_inversion() {
    lemmas::case2_normalization_and_inversion(&SEEDS);
}

#[test]
fn case3_inversion_and_projective_triple() {
    lemmas::case3_inversion_and_projective_triple(&SEEDS);
}

#[test]
fn case5_inversion_fraction_and_cover() {
    lemmas::case5_inversion_fraction_and_cover(&SEEDS);
}

#[test]
fn case6_cover_and_fraction() {
    lemmas::case6_cover_and_fraction(&SEEDS);
}

#[test]
fn case7_fraction_with_x_dependent_g() {
    lemmas::case7_fraction_with_x_dependent_g(&SEEDS);
}

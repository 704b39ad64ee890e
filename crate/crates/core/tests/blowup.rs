//! The blow-up chart against a direct pull-back of random expansions.

use folia_core::algebra::{rat, MPoly, RatFun};
use folia_core::blowup::{blowup_chart, sigma, tau_vars, AffineExpansion, CaseTag, X};
use folia_core::foliation::affine_vars;
use folia_core::forms::{interior_product, DForm, VField};
use proptest::prelude::*;

const N: usize = 3;

/// A homogeneous polynomial of degree `deg` in `a1..a3`.
fn homogeneous(deg: u32) -> impl Strategy<Value = MPoly> {
    prop::collection::vec((0..=deg, 0..=deg, -4i64..=4), 0..4).prop_map(move |ts| {
        let a = affine_vars(N);
        MPoly::from_terms(
            &a,
            ts.into_iter().filter(|(i, j, _)| i + j <= deg).map(|(i, j, c)| (vec![i, j, deg - i - j], rat(c, 1))),
        )
    })
}

fn homogeneous_form(deg: u32) -> impl Strategy<Value = DForm> {
    prop::collection::vec(homogeneous(deg), N).prop_map(|cs| {
        let a = affine_vars(N);
        DForm::one_form(&a, a.iter().map(|s| s.as_str()).zip(cs.into_iter().map(RatFun::from))).with_vars(&a)
    })
}

/// `alpha_2, alpha_3, alpha_4` arbitrary and `alpha_5 = i_R(g ^ h)`.
fn expansion() -> impl Strategy<Value = AffineExpansion> {
    (homogeneous_form(2), homogeneous_form(3), homogeneous_form(4), homogeneous_form(2), homogeneous_form(2)).prop_map(
        |(a2, a3, a4, g, h)| {
            let a = affine_vars(N);
            let a5 = interior_product(&VField::radial(&a), &g.wedge(&h).unwrap()).with_vars(&a);
            let w = a2.add(&a3).unwrap().add(&a4).unwrap().add(&a5).unwrap();
            AffineExpansion::from_form(&w, 0, &vec![rat(0, 1); N]).unwrap()
        },
    )
}

fn contraction(w: &DForm) -> RatFun {
    interior_product(&VField::radial(w.vars()), w).value().even
}

/// `(i_R alpha)(x tau, x)`.
fn on_chart(f: &RatFun) -> RatFun {
    let a = affine_vars(N);
    sigma(N).pullback(&DForm::function(&a, f.clone())).unwrap().value().even
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn strict_transform_matches_pullback(e in expansion()) {
        prop_assume!(!e.total().is_zero());
        let b = blowup_chart(&e).unwrap();
        let x = RatFun::var(X);
        // sigma^* omega = x^2 eta
        let pulled = sigma(N).pullback(&e.total()).unwrap();
        prop_assert!(pulled.same_as(&b.eta.scale(&x.mul(&x))));

        // eta = sum_j x^(j-1) theta_j + (F3 + x F4 + x^2 F5) dx, theta_j free of x and dx
        let mut chart = tau_vars(N);
        chart.push(X.to_string());
        for j in 2..=5 {
            prop_assert!(!b.theta(j).has_var(X));
            prop_assert!(b.theta(j).coeff(X).is_zero());
        }
        let horizontal = b.eta.without(X).expand_in(X).unwrap_or_default();
        for (k, piece) in horizontal.iter().enumerate() {
            let want = if (1..=4).contains(&k) { b.theta(k + 1).clone() } else { DForm::zero(&chart, 1).unwrap() };
            prop_assert!(piece.same_as(&want), "x^{} piece", k);
        }
        let f: Vec<RatFun> = (3..=5).map(|j| RatFun::from(b.f(j).clone())).collect();
        let dx = f[0].add(&x.mul(&f[1])).add(&x.mul(&x).mul(&f[2]));
        prop_assert_eq!(b.eta.coeff(X), dx);

        // i_R(omega)(x tau, x) = x^3 F3 + x^4 F4 + x^5 F5
        let lhs = on_chart(&contraction(&e.total()));
        let rhs = x.pow(3).unwrap().mul(&f[0]).add(&x.pow(4).unwrap().mul(&f[1])).add(&x.pow(5).unwrap().mul(&f[2]));
        prop_assert_eq!(lhs, rhs);
        // F_{j+1} = (i_R alpha_j)(tau, 1)
        for j in 2..=4 {
            let want = on_chart(&contraction(e.piece(j))).substitute(&[(X.to_string(), RatFun::one())].into()).unwrap();
            prop_assert_eq!(&f[j - 2], &want);
        }
        prop_assert!(contraction(e.piece(5)).is_zero());
        let tag = CaseTag::from_pattern(f[0].is_zero(), f[1].is_zero(), f[2].is_zero());
        prop_assert_eq!(b.case_tag(), tag);
    }
}

#[test]
fn radial_quintic_piece_is_rejected() {
    let a = affine_vars(N);
    let r = VField::radial(&a);
    // alpha_5 = a1^4 (a1 da1 + a2 da2 + a3 da3) has i_R alpha_5 != 0
    let p = RatFun::var("a1").pow(4).unwrap();
    let w = DForm::one_form(&a, a.iter().map(|v| (v.as_str(), p.mul(&RatFun::var(v))))).with_vars(&a);
    assert!(!interior_product(&r, &w).is_zero());
    assert!(AffineExpansion::from_form(&w, 0, &vec![rat(0, 1); N]).is_err());
}

#[test]
fn case_patterns() {
    let tags: Vec<u8> = [
        (true, true, true),
        (false, true, true),
        (true, true, false),
        (true, false, true),
        (false, false, true),
        (false, true, false),
        (false, false, false),
    ]
    .iter()
    .map(|&(a, b, c)| CaseTag::from_pattern(a, b, c).case)
    .collect();
    assert_eq!(tags, [1, 2, 3, 4, 5, 6, 7]);
    assert_eq!(CaseTag::from_pattern(true, false, false).case, 4);
}

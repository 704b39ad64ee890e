use super::*;
use crate::algebra::{rat, MPoly};
use crate::blowup::{assemble_eta, BlowupChartData, AffineExpansion};
use crate::io::parse::{parse_form_expr, parse_ratfun};

fn tau() -> Vec<String> {
    vec!["tau1".into(), "tau2".into()]
}

fn r(s: &str) -> RatFun {
    parse_ratfun(s, Some(&tau())).unwrap()
}

fn d(f: &RatFun) -> DForm {
    DForm::function(&tau(), f.clone()).d().unwrap().with_vars(&tau())
}

/// Chart data with `F3 = F5 = 0`, `F4 = 1`, `theta5 = 0`.
fn case4_data(theta2: DForm, theta3: DForm, theta4: DForm) -> BlowupChartData {
    let zero = DForm::zero(&tau(), 1).unwrap();
    let theta = [theta2, theta3, theta4, zero].map(|t| t.with_vars(&tau()));
    let f = [MPoly::zero(), MPoly::one(), MPoly::zero()];
    let eta = assemble_eta(3, &theta, &f).unwrap();
    BlowupChartData { n: 3, theta, f, eta }
}

fn no_expansion() -> AffineExpansion {
    let a = affine_vars(3);
    let z = DForm::zero(&a, 1).unwrap();
    AffineExpansion {
        chart: 0,
        point: vec!["0".into(); 3],
        n: 3,
        alpha: [z.clone(), z.clone(), z.clone(), z],
    }
}

/// `theta2 = psi1(u) du`, `theta3 = g theta2`, `theta4 = (u + g^2/4) theta2 - dg/2`.
fn riccati_input(u: &str, lambda: &str, g: &str) -> BlowupChartData {
    let (u, lambda, g) = (r(u), r(lambda), r(g));
    let b0 = d(&u).scale(&lambda);
    let h = u.add(&g.mul(&g).scale(&rat(1, 4)));
    let b2 = b0.scale(&h).sub(&d(&g).scale(&RatFun::constant(rat(1, 2)))).unwrap();
    case4_data(b0.clone(), b0.scale(&g), b2)
}

fn run4(b: &BlowupChartData) -> Outcome {
    handle_case4(b, &no_expansion(), &Hints::default()).unwrap()
}

#[test]
fn case4_riccati_pullback_verifies() {
    let b = riccati_input("tau1 + tau2^2", "tau1 + tau2^2", "tau2");
    let o = run4(&b);
    assert_eq!(o.tag(), "riccati_pullback");
    let report = verify_body(&o, &b.eta);
    assert!(report.ok(), "{:?}", report.failures());
    let Outcome::RiccatiPullback { data, .. } = &o else { unreachable!() };
    assert_eq!(data.psi1, RatFun::var("x"));
    assert_eq!(data.case4.g, r("tau2"));
}

#[test]
fn case4_riccati_mutations_are_rejected() {
    let b = riccati_input("tau1 - 2*tau2", "1", "tau1*tau2");
    let o = run4(&b);
    assert_eq!(o.tag(), "riccati_pullback");
    assert!(verify_body(&o, &b.eta).ok());
    let mutate = |f: &dyn Fn(&mut RiccatiData)| {
        let mut m = o.clone();
        if let Outcome::RiccatiPullback { data, .. } = &mut m {
            f(data);
        }
        verify_body(&m, &b.eta)
    };
    let psi = mutate(&|d| d.psi1 = d.psi1.scale(&rat(2, 1)));
    assert!(psi.failures().contains(&"theta = dy - (y^2 + psi2(x)) psi1(x) dx"));
    let theta = mutate(&|d| {
        d.psi1 = d.psi1.scale(&rat(2, 1));
        d.theta = crate::classify::handlers::riccati_form(&d.psi1, &d.psi2).unwrap();
    });
    assert!(theta.failures().contains(&"phi^* theta defines the foliation"));
    let g = mutate(&|d| d.case4.g = d.case4.g.add(&RatFun::one()));
    assert!(g.failures().contains(&"beta1 = g beta0"));
    let u = mutate(&|d| d.case4.u = d.case4.u.add(&RatFun::one()));
    assert!(u.failures().contains(&"u = h - g^2/4"));
}

#[test]
fn case4_constant_u_is_affine() {
    // u = 3 with a closed beta0 = dtau1
    let b0 = parse_form_expr("dtau1", Some(&tau())).unwrap().with_vars(&tau());
    let g = r("tau2");
    let h = RatFun::from_int(3).add(&g.mul(&g).scale(&rat(1, 4)));
    let b2 = b0.scale(&h).sub(&d(&g).scale(&RatFun::constant(rat(1, 2)))).unwrap();
    let b = case4_data(b0.clone(), b0.scale(&g), b2);
    let o = run4(&b);
    assert_eq!(o.tag(), "affine");
    assert!(verify_body(&o, &b.eta).ok());
}

#[test]
fn case4_without_rational_psi1_reports_missing_data() {
    // u = tau1^2 and beta0 = tau1 du: psi1(u) = sqrt(u) is not rational
    let b = riccati_input("tau1^2", "tau1", "tau2");
    let o = run4(&b);
    assert_eq!(o.tag(), "case4_needs_data");
    let Outcome::Case4NeedsData { missing, .. } = &o else { unreachable!() };
    assert!(missing.contains("psi1"));
    assert!(verify_body(&o, &b.eta).ok());
}

#[test]
fn case4_with_theta5_gives_long_sequence() {
    let mut b = riccati_input("tau1 + tau2^2", "1", "0");
    b.theta[3] = parse_form_expr("dtau2", Some(&tau())).unwrap().with_vars(&tau());
    b.eta = assemble_eta(3, &b.theta, &b.f).unwrap();
    match handle_case4(&b, &no_expansion(), &Hints::default()) {
        Ok(o) => assert_eq!(o.tag(), "finite_gvs"),
        Err(e) => assert!(matches!(e, Error::DerivedRelationFailed(_) | Error::NotIntegrable(_)), "{e}"),
    }
}

#[test]
fn handlers_reject_other_patterns() {
    let b = riccati_input("tau1 + tau2^2", "1", "tau2");
    assert!(matches!(handle_case2(&b), Err(Error::CaseMismatch { .. })));
    assert!(matches!(handle_case3(&b), Err(Error::CaseMismatch { .. })));
    assert!(matches!(handle_case567(&b), Err(Error::CaseMismatch { .. })));
}

#[test]
fn replay_and_tags() {
    let b = riccati_input("tau1 + tau2^2", "1", "tau2");
    let o = run4(&b);
    let replayed = replay(o.provenance(), &b.eta).unwrap();
    let Outcome::RiccatiPullback { data, .. } = &o else { unreachable!() };
    assert!(replayed.wedge(&data.base).unwrap().is_zero());
    for s in o.provenance() {
        assert!(!s.describe().is_empty());
    }
}

//! Fixture classification with re-verification and rejection against a
//! perturbed foliation.

use folia_core::algebra::RatFun;
use folia_core::classify::{classify, verify_certificate, Certificate, Hints, Outcome, SourceRecord};
use folia_core::foliation::{ChartPoint, Foliation};
use folia_core::forms::RationalMap;
use folia_core::io::cert::CertificateDocument;
use folia_core::io::parse::parse_document;

/// Fixture file, blow-up case and expected certificate variant.
pub const TABLE: [(&str, u8, &str); 7] = [
    ("case1.fol", 1, "linear_pullback"),
    ("case2.fol", 2, "finite_gvs"),
    ("case3.fol", 3, "pure_projective"),
    ("case4.fol", 4, "finite_gvs"),
    ("case5.fol", 5, "affine"),
    ("case6.fol", 6, "affine"),
    ("case7.fol", 7, "affine"),
];

pub struct Fixture {
    pub foliation: Foliation,
    pub point: Option<ChartPoint>,
}

pub fn load(name: &str) -> Fixture {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let doc = parse_document(&std::fs::read_to_string(path).unwrap()).unwrap();
    let point = doc.point.clone().map(|point| ChartPoint {
        chart: doc.chart.unwrap_or(0),
        point,
    });
    Fixture {
        foliation: Foliation::saturating(doc.form).unwrap(),
        point,
    }
}

/// The foliation after `z3 -> z3 + z1`, which fixes the chart-0 origin.
pub fn sheared(f: &Foliation) -> Foliation {
    let z = f.vars().to_vec();
    let image = RatFun::var("z3").add(&RatFun::var("z1"));
    let map = RationalMap::new(&z, [("z3".to_string(), image)]).unwrap();
    Foliation::saturating(map.pullback(f.omega()).unwrap().with_vars(&z)).unwrap()
}

pub fn case_of(c: &Certificate) -> Option<u8> {
    match &c.outcome {
        Outcome::LinearPullback { case, .. } => Some(case.case),
        Outcome::Affine { case, .. }
        | Outcome::PureProjective { case, .. }
        | Outcome::FiniteGvs { case, .. }
        | Outcome::RiccatiPullback { case, .. }
        | Outcome::Case4NeedsData { case, .. } => case.as_ref().map(|c| c.case),
        Outcome::FirstIntegralConditional { .. } => None,
    }
}

pub fn run(name: &str, case: Option<u8>, tag: &str) {
    let fx = load(name);
    let c = classify(&fx.foliation, fx.point.as_ref(), &Hints::default()).unwrap();
    assert_eq!(c.tag(), tag, "{name}");
    assert_eq!(case_of(&c), case, "{name}");
    let report = verify_certificate(&c, &fx.foliation);
    assert!(report.ok(), "{name}: {:?}", report.failures());

    // the serialized document verifies after a round trip
    let doc = CertificateDocument::new(c.clone(), &fx.foliation);
    let back = CertificateDocument::from_text(&doc.to_text()).unwrap();
    assert_eq!(back.certificate, c);
    assert!(verify_certificate(&back.certificate, &fx.foliation).ok());

    // the same certificate, relabelled with a perturbed source, is rejected
    let other = sheared(&fx.foliation);
    assert_ne!(other.omega(), fx.foliation.omega());
    let mut forged = c.clone();
    forged.source = SourceRecord::of(&other);
    let report = verify_certificate(&forged, &other);
    assert!(!report.ok(), "{name}: perturbed foliation accepted");
    assert!(!report.failures().contains(&"source foliation"));
    assert!(!verify_certificate(&c, &other).ok());
}

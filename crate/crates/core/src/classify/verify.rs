//! Independent re-checking of certificates: every claimed identity is
//! recomputed from the foliation and the recorded coordinate changes.

use std::collections::BTreeMap;

use super::handlers::riccati_form;
use super::{replay, Certificate, Outcome, PointRecord, SourceRecord};
use crate::blowup::{blowup_chart, case_tag, expand_at_point, CaseTag};
use crate::foliation::{find_jet2_witness, grid_values, projective_vars, ChartPoint, Foliation};
use crate::forms::{interior_product, DForm, VField};
use crate::transverse::{
    gvs_compute, gvs_verify, verify_affine, verify_projective, DEFAULT_CAP,
};
use crate::algebra::{rat, RatFun};

/// Outcome of each checked identity, in order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub lines: Vec<(String, std::result::Result<(), String>)>,
}

impl Report {
    pub fn ok(&self) -> bool {
        !self.lines.is_empty() && self.lines.iter().all(|(_, r)| r.is_ok())
    }

    fn push(&mut self, name: &str, r: std::result::Result<(), String>) {
        self.lines.push((name.to_string(), r));
    }

    fn check(&mut self, name: &str, cond: bool) {
        self.push(name, if cond { Ok(()) } else { Err("does not hold".into()) });
    }

    /// Names of the failing identities.
    pub fn failures(&self) -> Vec<&str> {
        self.lines
            .iter()
            .filter(|(_, r)| r.is_err())
            .map(|(n, _)| n.as_str())
            .collect()
    }

    /// One `ok:` or `fail:` line per identity.
    pub fn transcript(&self) -> Vec<String> {
        self.lines
            .iter()
            .map(|(n, r)| match r {
                Ok(()) => format!("ok: {n}"),
                Err(e) => format!("fail: {n}: {e}"),
            })
            .collect()
    }

    fn absorb(&mut self, prefix: &str, other: Report) {
        for (n, r) in other.lines {
            self.lines.push((format!("{prefix}{n}"), r));
        }
    }
}

/// `a ^ b = 0` with `b != 0`.
fn proportional(report: &mut Report, name: &str, a: &DForm, b: &DForm) {
    let r = if b.is_zero() {
        Err("replayed form vanishes".to_string())
    } else {
        match a.wedge(b) {
            Ok(w) if w.is_zero() => Ok(()),
            Ok(w) => Err(format!("wedge is {w}")),
            Err(e) => Err(e.to_string()),
        }
    };
    report.push(name, r);
}

fn check_result(report: &mut Report, name: &str, r: crate::transverse::Check) {
    report.push(name, r.map_err(|f| f.to_string()));
}

/// Replays the provenance of a handler-level outcome from `start` and
/// checks its identities. Location data are not checked.
pub fn verify_body(o: &Outcome, start: &DForm) -> Report {
    let mut report = Report::default();
    let replayed = match replay(o.provenance(), start) {
        Ok(r) => r,
        Err(e) => {
            report.push("provenance replays", Err(e.to_string()));
            return report;
        }
    };
    let same = "witness defines the replayed foliation";
    match o {
        Outcome::Affine { witness, .. } => {
            proportional(&mut report, same, &witness.omega0, &replayed);
            check_result(&mut report, "affine structure", verify_affine(witness));
        }
        Outcome::PureProjective {
            triple,
            lemma_signs,
            cover,
            provenance,
            ..
        } => {
            proportional(&mut report, same, &triple.omega0, &replayed);
            check_result(&mut report, "projective structure", verify_projective(triple));
            report.check("omega2 != 0", triple.is_pure());
            report.check(
                "lemma signs are (omega0, -omega1, -omega2)",
                lemma_signs.omega0 == triple.omega0
                    && lemma_signs.omega1 == triple.omega1.neg()
                    && lemma_signs.omega2 == triple.omega2.neg(),
            );
            if let Some(c) = cover {
                report.check(
                    "cover recorded in provenance",
                    provenance.iter().any(|s| &s.describe() == c),
                );
            }
        }
        Outcome::FiniteGvs { gvs, .. } => {
            proportional(&mut report, same, &gvs.forms[0], &replayed);
            let cap = DEFAULT_CAP.max(gvs.forms.len());
            let again = gvs_compute(&gvs.forms[0], &gvs.field, cap);
            report.check(
                "sequence is the Lie derivative iteration",
                again.is_ok_and(|s| s.forms == gvs.forms && !s.capped),
            );
            check_result(&mut report, "Omega ^ dOmega = 0", gvs_verify(gvs));
            report.check("length >= 3", gvs.length() >= 3);
        }
        Outcome::RiccatiPullback { data, .. } => {
            proportional(&mut report, same, &data.base, &replayed);
            report.check(
                "theta = dy - (y^2 + psi2(x)) psi1(x) dx",
                riccati_form(&data.psi1, &data.psi2).is_ok_and(|t| t == data.theta),
            );
            match data.phi.pullback(&data.theta) {
                Ok(pulled) => proportional(&mut report, "phi^* theta defines the foliation", &pulled, &data.base),
                Err(e) => report.push("phi^* theta defines the foliation", Err(e.to_string())),
            }
            case4_identities(&mut report, data);
        }
        Outcome::Case4NeedsData { form, missing, .. } => {
            proportional(&mut report, same, form, &replayed);
            report.check("missing ingredient named", !missing.is_empty());
        }
        Outcome::LinearPullback { .. } | Outcome::FirstIntegralConditional { .. } => {
            report.push("variant needs the source foliation", Err("use verify_certificate".into()));
        }
    }
    report
}

fn case4_identities(report: &mut Report, data: &super::RiccatiData) {
    let c = &data.case4;
    let Some(w) = data.phi.sources().last().cloned() else {
        report.push("phi has a fiber coordinate", Err("no sources".into()));
        return;
    };
    let pieces = data.base.without(&w).expand_in(&w).unwrap_or_default();
    let get = |k: usize| pieces.get(k).map(|p| p.neg());
    let (Some(b2), Some(b1), Some(b0)) = (get(0), get(1), get(2)) else {
        report.push("base is dw - b2 - w b1 - w^2 b0", Err("missing pieces".into()));
        return;
    };
    report.check("base is dw - b2 - w b1 - w^2 b0", pieces.len() == 3 && data.base.coeff(&w).is_one());
    report.check("recorded beta0 matches", b0 == c.beta0);
    report.check("d beta0 = 0", b0.d().is_ok_and(|d| d.is_zero()));
    let vars = b0.vars().to_vec();
    let dfn = |f: &RatFun| DForm::function(&vars, f.clone()).d();
    report.check("beta1 = g beta0", b1 == b0.scale(&c.g));
    report.check(
        "beta2 = h beta0 - dg/2",
        dfn(&c.g).is_ok_and(|dg| {
            b0.scale(&c.h)
                .sub(&dg.scale(&RatFun::constant(rat(1, 2))))
                .is_ok_and(|r| r == b2)
        }),
    );
    report.check("u = h - g^2/4", c.u == c.h.sub(&c.g.mul(&c.g).scale(&rat(1, 4))));
    report.check(
        "du ^ beta0 = 0",
        dfn(&c.u).is_ok_and(|du| du.wedge(&b0).is_ok_and(|t| t.is_zero())),
    );
    report.check("d(theta2 / f) = 0 factor nonzero", !c.factor.is_zero());
}

fn check_location(report: &mut Report, f: &Foliation, at: &PointRecord, case: &CaseTag) {
    match expand_at_point(f, at.chart, &at.point).and_then(|e| blowup_chart(&e)) {
        Ok(b) => report.check("case tag", case_tag(&b) == *case),
        Err(e) => report.push("jet order >= 2 at the point", Err(e.to_string())),
    }
}

/// Checks a certificate against `f`.
pub fn verify_certificate(c: &Certificate, f: &Foliation) -> Report {
    let mut report = Report::default();
    report.check("source foliation", c.source == SourceRecord::of(f));
    match &c.outcome {
        Outcome::FirstIntegralConditional { scanned } => {
            let candidates: Vec<ChartPoint> = scanned
                .candidates
                .iter()
                .map(|p| ChartPoint {
                    chart: p.chart,
                    point: p.point.clone(),
                })
                .collect();
            report.check("scan grid", scanned.coordinate_points && scanned.chart0_grid == grid_values());
            report.push(
                "no jet-order-two point among the scanned points",
                match find_jet2_witness(f, &candidates) {
                    Ok(None) => Ok(()),
                    Ok(Some(p)) => Err(format!("chart {} point {:?}", p.chart, p.point)),
                    Err(e) => Err(e.to_string()),
                },
            );
        }
        Outcome::LinearPullback {
            at,
            case,
            alpha5,
            target_n,
            nested,
        } => {
            check_location(&mut report, f, at, case);
            match expand_at_point(f, at.chart, &at.point) {
                Ok(e) => {
                    report.check("alpha2 = alpha3 = alpha4 = 0", (2..=4).all(|j| e.piece(j).is_zero()));
                    proportional(&mut report, "omega = alpha5 up to a factor", alpha5, e.piece(5));
                    let r = VField::radial(&e.vars());
                    report.check("i_R alpha5 = 0", interior_product(&r, alpha5).is_zero());
                    report.check("target dimension", *target_n + 1 == f.n());
                }
                Err(err) => report.push("expansion", Err(err.to_string())),
            }
            let z = projective_vars(*target_n);
            let names: BTreeMap<String, String> =
                alpha5.vars().iter().cloned().zip(z.iter().cloned()).collect();
            let target = Foliation::saturating(alpha5.rename(&names).with_vars(&z));
            match (nested, target) {
                (Some(inner), Ok(g)) => report.absorb("nested: ", verify_certificate(inner, &g)),
                (None, Ok(g)) => report.check(
                    "no nested certificate needed",
                    *target_n < 3 || g.degree() != 4,
                ),
                (_, Err(e)) => report.push("target foliation", Err(e.to_string())),
            }
        }
        o => {
            let loc = match o {
                Outcome::Affine { at, case, .. }
                | Outcome::PureProjective { at, case, .. }
                | Outcome::FiniteGvs { at, case, .. }
                | Outcome::RiccatiPullback { at, case, .. }
                | Outcome::Case4NeedsData { at, case, .. } => at.as_ref().zip(case.as_ref()),
                _ => None,
            };
            match loc {
                Some((at, case)) => check_location(&mut report, f, at, case),
                None => report.push("location recorded", Err("missing point or case".into())),
            }
            report.absorb("", verify_body(o, f.omega()));
        }
    }
    report
}

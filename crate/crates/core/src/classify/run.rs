use std::collections::BTreeMap;

use super::factor::integrating_factor;
use super::handlers::{
    handle_case1, handle_case2, handle_case3, handle_case4, handle_case567, Hints, FACTOR_DEGREE,
};
use super::{
    restriction_map, translation_map, Certificate, Outcome, PointRecord, ScanRecord, SourceRecord,
    Step,
};
use crate::blowup::{blowup_chart, case_tag, expand_at_point, sigma};
use crate::error::{Error, Result};
use crate::foliation::{
    affine_restrict, find_jet2_witness, grid_values, jet_order, projective_vars, translate,
    ChartPoint, Foliation,
};
use crate::forms::DForm;
use crate::transverse::AffineWitness;

fn has_jet2(f: &Foliation, p: &ChartPoint) -> Result<bool> {
    let w = affine_restrict(f, p.chart)?;
    Ok(jet_order(&w, &p.point)? >= 2)
}

/// Steps taking `F.omega` to the affine form centered at `p`.
pub(crate) fn location_steps(n: usize, p: &ChartPoint) -> Result<Vec<Step>> {
    let mut steps = vec![Step::pullback(restriction_map(n, p.chart)?)];
    if p.point.iter().any(|c| !num_traits::Zero::is_zero(c)) {
        steps.push(Step::pullback(translation_map(&p.point)?));
    }
    Ok(steps)
}

/// Classifies a degree-four foliation on `P^n`, `n >= 3`. The point `p`
/// (chart and affine coordinates) is tried first, then a bounded search.
pub fn classify(f: &Foliation, p: Option<&ChartPoint>, hints: &Hints) -> Result<Certificate> {
    if f.degree() != 4 {
        return Err(Error::DegreeMismatch(f.degree()));
    }
    let n = f.n();
    if n < 3 {
        return Err(Error::DimensionTooLow(n));
    }
    let candidates: Vec<ChartPoint> = p.into_iter().cloned().collect();
    let mut witness = None;
    if let Some(p) = p {
        if has_jet2(f, p)? {
            witness = Some(p.clone());
        }
    }
    if witness.is_none() {
        witness = find_jet2_witness(f, &candidates)?;
    }
    let source = SourceRecord::of(f);
    let Some(at) = witness else {
        return Ok(Certificate {
            source,
            outcome: Outcome::FirstIntegralConditional {
                scanned: ScanRecord {
                    coordinate_points: true,
                    candidates: candidates.iter().map(PointRecord::from).collect(),
                    chart0_grid: grid_values(),
                },
            },
        });
    };
    let e = expand_at_point(f, at.chart, &at.point)?;
    let b = blowup_chart(&e)?;
    let tag = case_tag(&b);
    let located = location_steps(n, &at)?;
    let mut blown = located.clone();
    blown.push(Step::pullback(sigma(n)));
    let record = PointRecord::from(&at);
    let outcome = match tag.case {
        1 => {
            let alpha5 = handle_case1(&b, &e)?;
            let nested = if n >= 4 {
                let z = projective_vars(n - 1);
                let names: BTreeMap<String, String> =
                    alpha5.vars().iter().cloned().zip(z.iter().cloned()).collect();
                let renamed = alpha5.rename(&names).with_vars(&z);
                let g = Foliation::saturating(renamed)?;
                if g.degree() == 4 {
                    Some(Box::new(classify(&g, None, hints)?))
                } else {
                    None
                }
            } else {
                None
            };
            Outcome::LinearPullback {
                at: record,
                case: tag,
                alpha5,
                target_n: n - 1,
                nested,
            }
        }
        2 => handle_case2(&b)?.located(record, tag, blown),
        3 => handle_case3(&b)?.located(record, tag, blown),
        4 => handle_case4(&b, &e, hints)?.located(record, tag, blown),
        _ => match handle_case567(&b) {
            Ok(o) => o.located(record, tag, blown),
            Err(Error::DerivedRelationFailed(why)) => {
                let w = translate(&affine_restrict(f, at.chart)?, &at.point)?;
                match factor_fallback(&w)? {
                    Some(o) => o.located(record, tag, located),
                    None => return Err(Error::DerivedRelationFailed(why)),
                }
            }
            Err(e) => return Err(e),
        },
    };
    Ok(Certificate { source, outcome })
}

/// Affine structure `(w, -dP/P)` from a polynomial integrating factor `P`.
fn factor_fallback(w: &DForm) -> Result<Option<Outcome>> {
    let Some(p) = integrating_factor(w, FACTOR_DEGREE) else {
        return Ok(None);
    };
    let dp = DForm::function(w.vars(), p.clone()).d()?;
    let omega1 = dp.scale(&p.recip()?).neg();
    Ok(Some(Outcome::Affine {
        at: None,
        case: None,
        witness: AffineWitness {
            omega0: w.clone(),
            omega1,
        },
        provenance: Vec::new(),
    }))
}

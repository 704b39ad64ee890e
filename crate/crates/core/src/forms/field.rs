//! Vector fields, interior products and Lie derivatives.

use std::collections::BTreeMap;

use super::dform::DForm;
use crate::algebra::{QuadElem, RatFun};
use crate::error::Result;

/// A vector field `sum X_v d/dv` with base-field components.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VField {
    comps: BTreeMap<String, RatFun>,
}

impl VField {
    pub fn new<I, S>(comps: I) -> VField
    where
        I: IntoIterator<Item = (S, RatFun)>,
        S: Into<String>,
    {
        let comps = comps
            .into_iter()
            .map(|(v, c)| (v.into(), c))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        VField { comps }
    }

    /// `d/dv`.
    pub fn partial(v: &str) -> VField {
        VField::new([(v, RatFun::one())])
    }

    /// The radial (Euler) field `sum v d/dv`.
    pub fn radial(vars: &[String]) -> VField {
        VField::new(vars.iter().map(|v| (v.clone(), RatFun::var(v))))
    }

    pub fn component(&self, v: &str) -> RatFun {
        self.comps.get(v).cloned().unwrap_or_default()
    }

    pub fn components(&self) -> impl Iterator<Item = (&String, &RatFun)> {
        self.comps.iter()
    }

    pub fn scale(&self, f: &RatFun) -> VField {
        VField::new(self.comps.iter().map(|(v, c)| (v.clone(), c.mul(f))))
    }

    pub fn add(&self, other: &VField) -> VField {
        let mut comps = self.comps.clone();
        for (v, c) in &other.comps {
            let e = comps.entry(v.clone()).or_default();
            *e = e.add(c);
        }
        VField::new(comps)
    }
}

/// `i_X a`; a 0-form maps to the zero 0-form.
pub fn interior_product(x: &VField, a: &DForm) -> DForm {
    if a.arity() == 0 {
        return a.scale(&RatFun::zero());
    }
    let mut terms: Vec<(Vec<String>, QuadElem)> = Vec::new();
    for (names, c) in a.components() {
        for (m, v) in names.iter().enumerate() {
            let xv = x.component(v);
            if xv.is_zero() {
                continue;
            }
            let mut rest: Vec<String> = names.iter().map(|s| s.to_string()).collect();
            rest.remove(m);
            let t = c.scale(&xv);
            terms.push((rest, if m % 2 == 0 { t } else { t.neg() }));
        }
    }
    DForm::from_components(a.ring().clone(), a.vars(), a.arity() - 1, terms)
        .expect("arity decreases")
}

/// `L_X a = d i_X a + i_X d a`.
pub fn lie_derivative(x: &VField, a: &DForm) -> Result<DForm> {
    let first = interior_product(x, a).d()?;
    if a.arity() == super::dform::MAX_ARITY {
        // i_X d a would need a 4-form; expand L_X by components instead
        return lie_top(x, a, first);
    }
    let second = interior_product(x, &a.d()?);
    first.add(&second)
}

/// Lie derivative of a 3-form via `L_X(c dv1^dv2^dv3)` expanded with
/// `L_X dv = d X_v`.
fn lie_top(x: &VField, a: &DForm, _first: DForm) -> Result<DForm> {
    let mut acc = a.scale(&RatFun::zero());
    let vars = a.vars().to_vec();
    for (names, c) in a.components() {
        let cf = DForm::function_in(a.ring().clone(), &vars, c.clone());
        let dc = cf.d()?;
        let xc = interior_product(x, &dc);
        let mut basis: Vec<DForm> = names
            .iter()
            .map(|v| DForm::differential(&vars, v))
            .collect();
        let wedge_all = |bs: &[DForm]| -> Result<DForm> {
            let mut w = bs[0].clone();
            for b in &bs[1..] {
                w = w.wedge(b)?;
            }
            Ok(w)
        };
        let mut term = xc.wedge(&wedge_all(&basis)?)?;
        for m in 0..basis.len() {
            let saved = basis[m].clone();
            basis[m] = DForm::function(&vars, x.component(names[m])).d()?;
            term = term.add(&cf.wedge(&wedge_all(&basis)?)?)?;
            basis[m] = saved;
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

impl serde::Serialize for VField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m: BTreeMap<&String, String> = self.comps.iter().map(|(v, c)| (v, c.render())).collect();
        m.serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for VField {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m: BTreeMap<String, String> = BTreeMap::deserialize(d)?;
        let mut comps = Vec::new();
        for (v, text) in m {
            let c = crate::io::parse::parse_ratfun(&text, None).map_err(serde::de::Error::custom)?;
            comps.push((v, c));
        }
        Ok(VField::new(comps))
    }
}

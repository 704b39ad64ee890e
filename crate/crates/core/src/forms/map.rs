//! Rational maps between coordinate systems and pullback of forms.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::dform::DForm;
use crate::algebra::{CoeffRing, QuadCoverRing, QuadElem, RatFun};
use crate::error::{Error, Result};

/// `phi: (sources) -> (targets)`, given by one rational function of the
/// sources per target coordinate. Pulling back replaces every target
/// coordinate simultaneously.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMap {
    sources: Vec<String>,
    images: Vec<(String, RatFun)>,
}

#[derive(Serialize, Deserialize)]
struct MapRepr {
    sources: Vec<String>,
    images: Vec<(String, String)>,
}

impl Serialize for RationalMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MapRepr {
            sources: self.sources.clone(),
            images: self
                .images
                .iter()
                .map(|(v, f)| (v.clone(), f.render()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MapRepr::deserialize(d)?;
        let mut images = Vec::new();
        for (v, text) in repr.images {
            let f = crate::io::parse::parse_ratfun(&text, Some(&repr.sources))
                .map_err(serde::de::Error::custom)?;
            images.push((v, f));
        }
        RationalMap::new(&repr.sources, images).map_err(serde::de::Error::custom)
    }
}

impl RationalMap {
    pub fn new<I, S>(sources: &[String], images: I) -> Result<RationalMap>
    where
        I: IntoIterator<Item = (S, RatFun)>,
        S: Into<String>,
    {
        let mut out: Vec<(String, RatFun)> = Vec::new();
        for (v, f) in images {
            let v = v.into();
            if out.iter().any(|(w, _)| *w == v) {
                return Err(Error::Internal(format!("target {v} given twice")));
            }
            for u in f.vars() {
                if !sources.contains(&u) {
                    return Err(Error::UnknownVariable(u));
                }
            }
            out.push((v, f));
        }
        Ok(RationalMap {
            sources: sources.to_vec(),
            images: out,
        })
    }

    pub fn identity(vars: &[String]) -> RationalMap {
        RationalMap {
            sources: vars.to_vec(),
            images: vars.iter().map(|v| (v.clone(), RatFun::var(v))).collect(),
        }
    }

    pub fn sources(&self) -> &[String] {
        &self.sources
    }

    pub fn targets(&self) -> impl Iterator<Item = &str> {
        self.images.iter().map(|(v, _)| v.as_str())
    }

    pub fn image(&self, v: &str) -> Option<&RatFun> {
        self.images.iter().find(|(w, _)| w == v).map(|(_, f)| f)
    }

    fn bindings(&self) -> BTreeMap<String, RatFun> {
        self.images.iter().cloned().collect()
    }

    /// Pulls back a function.
    pub fn pullback_fn(&self, f: &RatFun) -> Result<RatFun> {
        f.substitute(&self.bindings())
    }

    /// `(self o inner)`: first `inner`, then `self`. Pullback satisfies
    /// `(self o inner)^* = inner^* o self^*`.
    pub fn compose(&self, inner: &RationalMap) -> Result<RationalMap> {
        let b = inner.bindings();
        let mut images = Vec::new();
        for (v, f) in &self.images {
            images.push((v.clone(), f.substitute(&b)?));
        }
        // coordinates the outer map passes through are still moved by the inner map
        for (v, f) in &inner.images {
            if !self.sources.contains(v) && self.image(v).is_none() {
                images.push((v.clone(), f.clone()));
            }
        }
        RationalMap::new(&inner.sources, images)
    }

    /// `phi^* a`. Coordinates of `a` that are not targets pass through. On a
    /// cover-ring form the relation is pulled back as well; the generator
    /// must not be a target.
    pub fn pullback(&self, a: &DForm) -> Result<DForm> {
        let b = self.bindings();
        let ring = match a.ring() {
            CoeffRing::Base => CoeffRing::Base,
            CoeffRing::Quad(q) => {
                if self.image(q.generator()).is_some() {
                    return Err(Error::Internal(format!(
                        "cannot pull back along a map moving the cover generator {}",
                        q.generator()
                    )));
                }
                CoeffRing::Quad(QuadCoverRing::new(q.generator(), q.relation().substitute(&b)?)?)
            }
        };
        let mut vars = self.sources.clone();
        for v in a.vars() {
            if !vars.contains(v) && self.image(v).is_none() {
                vars.push(v.clone());
            }
        }
        let mut images: BTreeMap<String, DForm> = BTreeMap::new();
        for v in a.vars() {
            let img = match self.image(v) {
                Some(f) => DForm::function(&vars, f.clone()).d()?,
                None => DForm::differential(&vars, v),
            };
            images.insert(v.clone(), img.with_ring(ring.clone())?);
        }
        substitute_components(a, &ring, &vars, &images, |c| {
            Ok(QuadElem {
                even: c.even.substitute(&b)?,
                odd: c.odd.substitute(&b)?,
            })
        })
    }
}

/// Rebuilds `a` with coefficients mapped by `coeff` and each `dv` replaced
/// by `images[v]`.
pub(crate) fn substitute_components<F>(
    a: &DForm,
    ring: &CoeffRing,
    vars: &[String],
    images: &BTreeMap<String, DForm>,
    mut coeff: F,
) -> Result<DForm>
where
    F: FnMut(&QuadElem) -> Result<QuadElem>,
{
    let mut acc = DForm::zero(vars, a.arity())?.with_ring(ring.clone())?;
    for (names, c) in a.components() {
        let nc = coeff(c)?;
        if nc.is_zero() {
            continue;
        }
        let mut term = DForm::function_in(ring.clone(), vars, nc);
        for v in &names {
            term = term.wedge(&images[*v])?;
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

impl fmt::Debug for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) -> [", self.sources.join(", "))?;
        for (i, (v, g)) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v} = {}", g.render())?;
        }
        f.write_str("]")
    }
}

/// Pulls a base form back to a double cover: the coordinate
/// `ring.generator()` becomes the ring generator `g` with `g^2 = r`, where
/// the relation `r` is written in the new coordinate `vertical`. Thus
/// `dg = g dr / (2r)`.
pub fn cover_pullback(a: &DForm, ring: &QuadCoverRing, vertical: &str) -> Result<DForm> {
    if !a.ring().quad().is_none() {
        return Err(Error::IncompatibleRings);
    }
    let g = ring.generator();
    let qring = CoeffRing::Quad(ring.clone());
    let mut vars: Vec<String> = a
        .vars()
        .iter()
        .filter(|v| v.as_str() != g)
        .cloned()
        .collect();
    if !vars.iter().any(|v| v == vertical) {
        vars.push(vertical.to_string());
    }
    for v in ring.relation().vars() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    let r = ring.relation();
    let mut images: BTreeMap<String, DForm> = BTreeMap::new();
    for v in a.vars() {
        let img = if v == g {
            let dr = DForm::function(&vars, r.clone()).d()?;
            let half_inv = r.scale(&crate::algebra::poly::int(2)).recip()?;
            dr.with_ring(qring.clone())?.scale_elem(&QuadElem {
                even: RatFun::zero(),
                odd: half_inv,
            })
        } else {
            DForm::differential(&vars, v).with_ring(qring.clone())?
        };
        images.insert(v.clone(), img);
    }
    substitute_components(a, &qring, &vars, &images, |c| {
        let e = ring.reduce(&c.even)?;
        if !c.odd.is_zero() {
            return Err(Error::IncompatibleRings);
        }
        Ok(e)
    })
}

//! Quadratic extensions K[g]/(g^2 - r) of a rational function field, used
//! for branched double covers such as `x^2 = z` or `t^2 = -2s`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::poly::MPoly;
use super::ratfun::RatFun;
use crate::error::{Error, Result};

/// The cover ring: `generator^2 = relation`, where `relation` lives in the
/// base field and never mentions the generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadCoverRing {
    generator: String,
    relation: RatFun,
}

impl QuadCoverRing {
    pub fn new(generator: &str, relation: RatFun) -> Result<Self> {
        if relation.is_zero() {
            return Err(Error::DegenerateCover);
        }
        if relation.has_var(generator) {
            return Err(Error::Internal(format!(
                "cover relation {relation} mentions its generator {generator}"
            )));
        }
        Ok(QuadCoverRing {
            generator: generator.to_string(),
            relation,
        })
    }

    pub fn generator(&self) -> &str {
        &self.generator
    }

    pub fn relation(&self) -> &RatFun {
        &self.relation
    }

    /// Reduces an arbitrary rational function in which the generator occurs
    /// as a variable to canonical form `a + g*b`.
    pub fn reduce(&self, f: &RatFun) -> Result<QuadElem> {
        if !f.has_var(&self.generator) {
            return Ok(QuadElem::base(f.clone()));
        }
        let (ne, no) = self.split_poly(f.num());
        let (de, dd) = self.split_poly(f.den());
        let num = QuadElem { even: ne, odd: no };
        let den = QuadElem { even: de, odd: dd };
        self.div(&num, &den)
    }

    fn split_poly(&self, p: &MPoly) -> (RatFun, RatFun) {
        let coeffs = p.coefficients_in(&self.generator);
        let mut even = RatFun::zero();
        let mut odd = RatFun::zero();
        let mut rpow = RatFun::one();
        for (k, c) in coeffs.iter().enumerate() {
            if k >= 2 && k % 2 == 0 {
                rpow = rpow.mul(&self.relation);
            }
            let term = RatFun::from(c.clone()).mul(&rpow);
            if k % 2 == 0 {
                even = even.add(&term);
            } else {
                odd = odd.add(&term);
            }
        }
        (even, odd)
    }

    pub fn mul(&self, a: &QuadElem, b: &QuadElem) -> QuadElem {
        if a.odd.is_zero() && b.odd.is_zero() {
            return QuadElem::base(a.even.mul(&b.even));
        }
        let even = a
            .even
            .mul(&b.even)
            .add(&a.odd.mul(&b.odd).mul(&self.relation));
        let odd = a.even.mul(&b.odd).add(&a.odd.mul(&b.even));
        QuadElem { even, odd }
    }

    /// `a + g b  ->  a - g b`.
    pub fn conjugate(&self, a: &QuadElem) -> QuadElem {
        QuadElem {
            even: a.even.clone(),
            odd: a.odd.neg(),
        }
    }

    /// Field norm `a^2 - r b^2`.
    pub fn norm(&self, a: &QuadElem) -> RatFun {
        a.even
            .mul(&a.even)
            .sub(&a.odd.mul(&a.odd).mul(&self.relation))
    }

    pub fn inv(&self, a: &QuadElem) -> Result<QuadElem> {
        if a.odd.is_zero() {
            return Ok(QuadElem::base(a.even.recip()?));
        }
        let n = self.norm(a);
        if n.is_zero() {
            return Err(Error::ZeroDivisor(self.render(a)));
        }
        let ninv = n.recip()?;
        let c = self.conjugate(a);
        Ok(QuadElem {
            even: c.even.mul(&ninv),
            odd: c.odd.mul(&ninv),
        })
    }

    pub fn div(&self, a: &QuadElem, b: &QuadElem) -> Result<QuadElem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Partial derivative along a base coordinate, with
    /// `dg/dv = g * (dr/dv) / (2r)`.
    pub fn derivative(&self, a: &QuadElem, v: &str) -> QuadElem {
        let even = a.even.derivative(v);
        let mut odd = a.odd.derivative(v);
        if !a.odd.is_zero() && self.relation.has_var(v) {
            let dr = self.relation.derivative(v);
            let factor = dr
                .div(&self.relation.scale(&super::poly::int(2)))
                .expect("relation is nonzero");
            odd = odd.add(&a.odd.mul(&factor));
        }
        QuadElem { even, odd }
    }

    /// Rewrites the element as a single rational function in the generator.
    pub fn to_ratfun(&self, a: &QuadElem) -> RatFun {
        a.even.add(&a.odd.mul(&RatFun::var(&self.generator)))
    }

    pub fn render(&self, a: &QuadElem) -> String {
        render_quad(&self.generator, a)
    }
}

pub fn render_quad(generator: &str, a: &QuadElem) -> String {
    if a.odd.is_zero() {
        return a.even.render();
    }
    let odd = a.odd.render();
    let odd_term = if a.odd.is_one() {
        generator.to_string()
    } else {
        format!("{generator}*({odd})")
    };
    if a.even.is_zero() {
        odd_term
    } else {
        format!("{} + {odd_term}", a.even.render())
    }
}

/// `even + generator * odd` with both parts in the base field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QuadElem {
    pub even: RatFun,
    pub odd: RatFun,
}

impl QuadElem {
    pub fn base(even: RatFun) -> Self {
        QuadElem {
            even,
            odd: RatFun::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::base(RatFun::zero())
    }

    pub fn one() -> Self {
        Self::base(RatFun::one())
    }

    pub fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }

    pub fn is_base(&self) -> bool {
        self.odd.is_zero()
    }

    pub fn add(&self, o: &QuadElem) -> QuadElem {
        QuadElem {
            even: self.even.add(&o.even),
            odd: self.odd.add(&o.odd),
        }
    }

    pub fn sub(&self, o: &QuadElem) -> QuadElem {
        QuadElem {
            even: self.even.sub(&o.even),
            odd: self.odd.sub(&o.odd),
        }
    }

    pub fn neg(&self) -> QuadElem {
        QuadElem {
            even: self.even.neg(),
            odd: self.odd.neg(),
        }
    }

    /// Multiplication by a base-field element (no ring needed).
    pub fn scale(&self, c: &RatFun) -> QuadElem {
        QuadElem {
            even: self.even.mul(c),
            odd: self.odd.mul(c),
        }
    }

    pub fn has_var(&self, v: &str) -> bool {
        self.even.has_var(v) || self.odd.has_var(v)
    }

    pub fn substitute(&self, bindings: &BTreeMap<String, RatFun>) -> Result<QuadElem> {
        Ok(QuadElem {
            even: self.even.substitute(bindings)?,
            odd: self.odd.substitute(bindings)?,
        })
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_quad("g", self))
    }
}

/// The coefficient domain of a form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "CoeffRingRepr", try_from = "CoeffRingRepr")]
pub enum CoeffRing {
    #[default]
    Base,
    Quad(QuadCoverRing),
}

#[derive(Serialize, Deserialize)]
struct CoeffRingRepr {
    generator: Option<String>,
    relation: Option<String>,
}

impl From<CoeffRing> for CoeffRingRepr {
    fn from(r: CoeffRing) -> Self {
        match r {
            CoeffRing::Base => CoeffRingRepr {
                generator: None,
                relation: None,
            },
            CoeffRing::Quad(q) => CoeffRingRepr {
                generator: Some(q.generator.clone()),
                relation: Some(q.relation.render()),
            },
        }
    }
}

impl TryFrom<CoeffRingRepr> for CoeffRing {
    type Error = Error;
    fn try_from(r: CoeffRingRepr) -> Result<Self> {
        match (r.generator, r.relation) {
            (Some(g), Some(rel)) => {
                let rel = crate::io::parse::parse_ratfun(&rel, None)?;
                Ok(CoeffRing::Quad(QuadCoverRing::new(&g, rel)?))
            }
            (None, None) => Ok(CoeffRing::Base),
            _ => Err(Error::Certificate("incomplete cover ring".into())),
        }
    }
}

impl CoeffRing {
    pub fn quad(&self) -> Option<&QuadCoverRing> {
        match self {
            CoeffRing::Base => None,
            CoeffRing::Quad(q) => Some(q),
        }
    }

    /// Common ring of two forms: base embeds into any cover.
    pub fn join(&self, other: &CoeffRing) -> Result<CoeffRing> {
        match (self, other) {
            (CoeffRing::Base, r) | (r, CoeffRing::Base) => Ok(r.clone()),
            (a, b) if a == b => Ok(a.clone()),
            _ => Err(Error::IncompatibleRings),
        }
    }

    pub fn mul(&self, a: &QuadElem, b: &QuadElem) -> QuadElem {
        match self {
            CoeffRing::Base => QuadElem::base(a.even.mul(&b.even)),
            CoeffRing::Quad(q) => q.mul(a, b),
        }
    }

    pub fn inv(&self, a: &QuadElem) -> Result<QuadElem> {
        match self {
            CoeffRing::Base => Ok(QuadElem::base(a.even.recip()?)),
            CoeffRing::Quad(q) => q.inv(a),
        }
    }

    pub fn div(&self, a: &QuadElem, b: &QuadElem) -> Result<QuadElem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn derivative(&self, a: &QuadElem, v: &str) -> QuadElem {
        match self {
            CoeffRing::Base => QuadElem::base(a.even.derivative(v)),
            CoeffRing::Quad(q) => q.derivative(a, v),
        }
    }

    pub fn render(&self, a: &QuadElem) -> String {
        match self {
            CoeffRing::Base => a.even.render(),
            CoeffRing::Quad(q) => q.render(a),
        }
    }

    /// Parses a coefficient expression; the generator may appear as a variable.
    pub fn lift(&self, f: &RatFun) -> Result<QuadElem> {
        match self {
            CoeffRing::Base => Ok(QuadElem::base(f.clone())),
            CoeffRing::Quad(q) => q.reduce(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::int;

    fn v(n: &str) -> RatFun {
        RatFun::var(n)
    }

    #[test]
    fn square_of_generator() {
        let ring = QuadCoverRing::new("x", v("z")).unwrap();
        let x = ring.reduce(&v("x")).unwrap();
        assert_eq!(ring.mul(&x, &x), QuadElem::base(v("z")));
    }

    #[test]
    fn cube_of_generator() {
        let ring = QuadCoverRing::new("t", v("s").scale(&int(-2))).unwrap();
        let t3 = ring.reduce(&v("t").pow(3).unwrap()).unwrap();
        assert!(t3.even.is_zero());
        assert_eq!(t3.odd, v("s").scale(&int(-2)));
    }

    #[test]
    fn conjugate_product() {
        let ring = QuadCoverRing::new("t", v("s").scale(&int(-2))).unwrap();
        let a = ring.reduce(&(RatFun::one() + v("t"))).unwrap();
        let b = ring.reduce(&(RatFun::one() - v("t"))).unwrap();
        assert_eq!(ring.mul(&a, &b), QuadElem::base(RatFun::one() + v("s").scale(&int(2))));
    }

    #[test]
    fn inverse_and_reduce_of_fraction() {
        let ring = QuadCoverRing::new("x", v("z")).unwrap();
        let f = RatFun::one().div(&v("x")).unwrap();
        let r = ring.reduce(&f).unwrap();
        assert!(r.even.is_zero());
        assert_eq!(r.odd, RatFun::one().div(&v("z")).unwrap());
    }

    #[test]
    fn generator_derivative() {
        let ring = QuadCoverRing::new("x", v("z")).unwrap();
        let x = ring.reduce(&v("x")).unwrap();
        let dx = ring.derivative(&x, "z");
        // d(sqrt z)/dz = sqrt z / (2 z)
        assert_eq!(dx.odd, RatFun::one().div(&v("z").scale(&int(2))).unwrap());
    }

    #[test]
    fn zero_relation_rejected() {
        assert_eq!(QuadCoverRing::new("x", RatFun::zero()), Err(Error::DegenerateCover));
    }
}

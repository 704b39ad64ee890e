//! A 1-form on `(tau, fiber)` carried through substitutions of the fiber
//! coordinate and double covers, with the steps recorded.

use std::collections::BTreeMap;

use super::Step;
use crate::algebra::{CoeffRing, QuadCoverRing, QuadElem, RatFun};
use crate::error::{Error, Result};
use crate::forms::{cover_pullback, DForm, RationalMap};

#[derive(Clone, Debug)]
pub(crate) struct Chain {
    pub form: DForm,
    pub base: Vec<String>,
    pub fiber: String,
    pub steps: Vec<Step>,
}

impl Chain {
    pub fn new(form: &DForm, base: &[String], fiber: &str) -> Chain {
        Chain {
            form: form.clone(),
            base: base.to_vec(),
            fiber: fiber.to_string(),
            steps: Vec::new(),
        }
    }

    fn sources(&self, fiber: &str) -> Vec<String> {
        let mut s = self.base.clone();
        s.push(fiber.to_string());
        s
    }

    /// Pulls back along `fiber = image`, `image` written in `new_fiber`.
    pub fn substitute(&mut self, new_fiber: &str, image: RatFun) -> Result<()> {
        let map = RationalMap::new(&self.sources(new_fiber), [(self.fiber.clone(), image)])?;
        self.form = map.pullback(&self.form)?;
        self.steps.push(Step::pullback(map));
        self.fiber = new_fiber.to_string();
        Ok(())
    }

    /// Pulls back to the cover `fiber^2 = relation`, `relation` written in
    /// the new fiber `vertical`.
    pub fn cover(&mut self, relation: RatFun, vertical: &str) -> Result<()> {
        let ring = QuadCoverRing::new(&self.fiber, relation)?;
        self.form = cover_pullback(&self.form, &ring, vertical)?;
        self.steps.push(Step::cover(&ring, vertical));
        self.fiber = vertical.to_string();
        Ok(())
    }

    pub fn lead(&self) -> QuadElem {
        self.form.coefficient(&self.fiber)
    }

    /// Rescales so that the `d fiber` coefficient becomes `lead`.
    pub fn normalize(&mut self, lead: &RatFun) -> Result<()> {
        let c = self.lead();
        if c.is_zero() {
            return Err(Error::NotTransverse);
        }
        self.form = self.form.div_elem(&c)?.scale(lead);
        Ok(())
    }

    /// The forms `b_k` with `form = lead d fiber + sum_k fiber^k b_k`, when
    /// the coefficients are polynomial in the fiber. On a cover ring the
    /// odd parts must vanish.
    pub fn betas(&self) -> Option<Vec<DForm>> {
        let rest = to_base(&self.form.without(&self.fiber))?;
        rest.expand_in(&self.fiber)
    }
}

/// Drops the cover ring of a form whose odd parts all vanish.
pub(crate) fn to_base(a: &DForm) -> Option<DForm> {
    if a.ring().quad().is_none() {
        return Some(a.clone());
    }
    let mut terms = Vec::new();
    for (names, c) in a.components() {
        if !c.odd.is_zero() {
            return None;
        }
        terms.push((names.iter().map(|s| s.to_string()).collect::<Vec<_>>(), c.clone()));
    }
    DForm::from_components(CoeffRing::Base, a.vars(), a.arity(), terms).ok()
}

/// `b_k` padded with zero forms to `len` entries; `None` if longer.
pub(crate) fn padded(mut b: Vec<DForm>, like: &DForm, len: usize) -> Option<Vec<DForm>> {
    if b.len() > len {
        return None;
    }
    let zero = like.scale(&RatFun::zero());
    while b.len() < len {
        b.push(zero.clone());
    }
    Some(b)
}

/// `f(tau, 1)` for a function of the affine coordinates `a1..an`.
pub(crate) fn at_unit_x(f: &RatFun, a: &[String], tau: &[String]) -> Result<RatFun> {
    let mut b: BTreeMap<String, RatFun> = a
        .iter()
        .zip(tau)
        .map(|(ai, t)| (ai.clone(), RatFun::var(t)))
        .collect();
    if let Some(last) = a.last() {
        b.insert(last.clone(), RatFun::one());
    }
    f.substitute(&b)
}

//! Differential forms of arity 0..=3 with rational (or cover-ring)
//! coefficients.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{CoeffRing, QuadElem, RatFun};
use crate::error::{Error, Result};

pub const MAX_ARITY: usize = 3;

/// A differential k-form. Components are keyed by strictly increasing index
/// tuples into `vars`; zero components are never stored.
#[derive(Clone)]
pub struct DForm {
    ring: CoeffRing,
    vars: Vec<String>,
    arity: usize,
    comps: BTreeMap<Vec<usize>, QuadElem>,
}

/// Sorts `idx` in place and returns the permutation sign, or `None` on a
/// repeated index.
pub(crate) fn sort_with_sign(idx: &mut [usize]) -> Option<i32> {
    let mut sign = 1;
    for i in 0..idx.len() {
        for j in 0..idx.len() - 1 - i {
            match idx[j].cmp(&idx[j + 1]) {
                std::cmp::Ordering::Greater => {
                    idx.swap(j, j + 1);
                    sign = -sign;
                }
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(sign)
}

fn signed(c: QuadElem, sign: i32) -> QuadElem {
    if sign < 0 {
        c.neg()
    } else {
        c
    }
}

impl DForm {
    pub fn zero(vars: &[String], arity: usize) -> Result<DForm> {
        if arity > MAX_ARITY {
            return Err(Error::ArityTooHigh(arity));
        }
        Ok(DForm {
            ring: CoeffRing::Base,
            vars: vars.to_vec(),
            arity,
            comps: BTreeMap::new(),
        })
    }

    /// A 0-form.
    pub fn function(vars: &[String], f: RatFun) -> DForm {
        Self::function_in(CoeffRing::Base, vars, QuadElem::base(f))
    }

    pub fn function_in(ring: CoeffRing, vars: &[String], f: QuadElem) -> DForm {
        let mut comps = BTreeMap::new();
        if !f.is_zero() {
            comps.insert(Vec::new(), f);
        }
        DForm::assemble(ring, vars.to_vec(), 0, comps)
    }

    /// `dv` for a single variable.
    pub fn differential(vars: &[String], v: &str) -> DForm {
        Self::one_form(vars, [(v, RatFun::one())])
    }

    /// A 1-form `sum c_i dv_i` over base coefficients.
    pub fn one_form<'a, I>(vars: &[String], terms: I) -> DForm
    where
        I: IntoIterator<Item = (&'a str, RatFun)>,
    {
        let mut vars = vars.to_vec();
        let mut comps: BTreeMap<Vec<usize>, QuadElem> = BTreeMap::new();
        for (v, c) in terms {
            let i = index_or_push(&mut vars, v);
            let e = comps.entry(vec![i]).or_default();
            *e = e.add(&QuadElem::base(c));
        }
        comps.retain(|_, c| !c.is_zero());
        DForm::assemble(CoeffRing::Base, vars, 1, comps)
    }

    /// General constructor from named components; tuples need not be sorted.
    pub fn from_components<I>(ring: CoeffRing, vars: &[String], arity: usize, terms: I) -> Result<DForm>
    where
        I: IntoIterator<Item = (Vec<String>, QuadElem)>,
    {
        if arity > MAX_ARITY {
            return Err(Error::ArityTooHigh(arity));
        }
        let mut vars = vars.to_vec();
        let mut comps: BTreeMap<Vec<usize>, QuadElem> = BTreeMap::new();
        for (names, c) in terms {
            if names.len() != arity {
                return Err(Error::Internal(format!(
                    "component of arity {} in a {arity}-form",
                    names.len()
                )));
            }
            let mut idx: Vec<usize> = names.iter().map(|n| index_or_push(&mut vars, n)).collect();
            let Some(sign) = sort_with_sign(&mut idx) else {
                continue;
            };
            let e = comps.entry(idx).or_default();
            *e = e.add(&signed(c, sign));
        }
        comps.retain(|_, c| !c.is_zero());
        Ok(DForm::assemble(ring, vars, arity, comps))
    }

    /// Adds any coefficient variable missing from `vars`, at the end.
    fn assemble(
        ring: CoeffRing,
        mut vars: Vec<String>,
        arity: usize,
        comps: BTreeMap<Vec<usize>, QuadElem>,
    ) -> DForm {
        let mut extra: Vec<String> = Vec::new();
        for c in comps.values() {
            for part in [&c.even, &c.odd] {
                for v in part.vars() {
                    if !vars.contains(&v) && !extra.contains(&v) {
                        extra.push(v);
                    }
                }
            }
        }
        if let Some(q) = ring.quad() {
            for v in q.relation().vars() {
                if !vars.contains(&v) && !extra.contains(&v) {
                    extra.push(v);
                }
            }
        }
        extra.sort_by(|a, b| crate::algebra::poly::var_cmp(a, b));
        vars.extend(extra);
        DForm {
            ring,
            vars,
            arity,
            comps,
        }
    }

    pub fn ring(&self) -> &CoeffRing {
        &self.ring
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn num_components(&self) -> usize {
        self.comps.len()
    }

    /// Components with variable names.
    pub fn components(&self) -> impl Iterator<Item = (Vec<&str>, &QuadElem)> {
        self.comps
            .iter()
            .map(|(idx, c)| (idx.iter().map(|&i| self.vars[i].as_str()).collect(), c))
    }

    /// Coefficient of `dv` in a 1-form.
    pub fn coefficient(&self, v: &str) -> QuadElem {
        self.component(&[v])
    }

    /// Coefficient of `dv1 ^ ... ^ dvk` (sign-adjusted if the names are unsorted).
    pub fn component(&self, names: &[&str]) -> QuadElem {
        let Some(mut idx) = names
            .iter()
            .map(|n| self.vars.iter().position(|v| v == n))
            .collect::<Option<Vec<_>>>()
        else {
            return QuadElem::zero();
        };
        let Some(sign) = sort_with_sign(&mut idx) else {
            return QuadElem::zero();
        };
        self.comps
            .get(&idx)
            .map(|c| signed(c.clone(), sign))
            .unwrap_or_default()
    }

    /// Base-field coefficient of `dv`; panics on a genuine cover element.
    pub fn coeff(&self, v: &str) -> RatFun {
        let c = self.coefficient(v);
        assert!(c.odd.is_zero(), "coefficient has a nonzero cover part");
        c.even
    }

    /// Value of a 0-form.
    pub fn value(&self) -> QuadElem {
        self.comps.get(&Vec::new()).cloned().unwrap_or_default()
    }

    pub fn with_ring(mut self, ring: CoeffRing) -> Result<DForm> {
        self.ring = self.ring.join(&ring)?;
        Ok(self)
    }

    pub fn with_vars(&self, vars: &[String]) -> DForm {
        let mut out = self.clone();
        let mut all = vars.to_vec();
        for v in &self.vars {
            if !all.contains(v) {
                all.push(v.clone());
            }
        }
        if all == self.vars {
            return out;
        }
        out.vars = all.clone();
        out.comps = self.remapped(&all);
        out
    }

    fn remapped(&self, target: &[String]) -> BTreeMap<Vec<usize>, QuadElem> {
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| target.iter().position(|t| t == v).expect("target contains vars"))
            .collect();
        let mut out = BTreeMap::new();
        for (idx, c) in &self.comps {
            let mut ni: Vec<usize> = idx.iter().map(|&i| map[i]).collect();
            let sign = sort_with_sign(&mut ni).expect("distinct indices stay distinct");
            out.insert(ni, signed(c.clone(), sign));
        }
        out
    }

    /// Brings two forms to a common variable list and ring.
    fn align(&self, other: &DForm) -> Result<(CoeffRing, Vec<String>, BTreeMap<Vec<usize>, QuadElem>, BTreeMap<Vec<usize>, QuadElem>)> {
        let ring = self.ring.join(&other.ring)?;
        if self.vars == other.vars {
            return Ok((ring, self.vars.clone(), self.comps.clone(), other.comps.clone()));
        }
        let mut vars = self.vars.clone();
        for v in &other.vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        Ok((ring, vars.clone(), self.comps.clone(), other.remapped(&vars)))
    }

    pub fn add(&self, other: &DForm) -> Result<DForm> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &DForm) -> Result<DForm> {
        self.combine(other, true)
    }

    fn combine(&self, other: &DForm, negate: bool) -> Result<DForm> {
        if self.arity != other.arity && !self.is_zero() && !other.is_zero() {
            return Err(Error::Internal(format!(
                "adding a {}-form to a {}-form",
                self.arity, other.arity
            )));
        }
        let arity = if self.is_zero() { other.arity } else { self.arity };
        let (ring, vars, mut a, b) = self.align(other)?;
        for (idx, c) in b {
            let c = if negate { c.neg() } else { c };
            let e = a.entry(idx).or_default();
            *e = e.add(&c);
        }
        a.retain(|_, c| !c.is_zero());
        Ok(DForm::assemble(ring, vars, arity, a))
    }

    pub fn neg(&self) -> DForm {
        let mut out = self.clone();
        for c in out.comps.values_mut() {
            *c = c.neg();
        }
        out
    }

    /// Multiplies every component by a base-field function.
    pub fn scale(&self, f: &RatFun) -> DForm {
        if f.is_zero() {
            let mut z = self.clone();
            z.comps.clear();
            return z;
        }
        let comps = self
            .comps
            .iter()
            .map(|(i, c)| (i.clone(), c.scale(f)))
            .collect();
        DForm::assemble(self.ring.clone(), self.vars.clone(), self.arity, comps)
    }

    /// Multiplies by a ring element.
    pub fn scale_elem(&self, f: &QuadElem) -> DForm {
        let comps: BTreeMap<_, _> = self
            .comps
            .iter()
            .map(|(i, c)| (i.clone(), self.ring.mul(c, f)))
            .filter(|(_, c): &(Vec<usize>, QuadElem)| !c.is_zero())
            .collect();
        DForm::assemble(self.ring.clone(), self.vars.clone(), self.arity, comps)
    }

    /// Divides by a nonzero ring element.
    pub fn div_elem(&self, f: &QuadElem) -> Result<DForm> {
        let inv = self.ring.inv(f)?;
        Ok(self.scale_elem(&inv))
    }

    pub fn wedge(&self, other: &DForm) -> Result<DForm> {
        let arity = self.arity + other.arity;
        if arity > MAX_ARITY {
            return Err(Error::ArityTooHigh(arity));
        }
        let (ring, vars, a, b) = self.align(other)?;
        let mut out: BTreeMap<Vec<usize>, QuadElem> = BTreeMap::new();
        for (ia, ca) in &a {
            for (ib, cb) in &b {
                let mut idx: Vec<usize> = ia.iter().chain(ib.iter()).copied().collect();
                let Some(sign) = sort_with_sign(&mut idx) else {
                    continue;
                };
                let prod = signed(ring.mul(ca, cb), sign);
                let e = out.entry(idx).or_default();
                *e = e.add(&prod);
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(DForm::assemble(ring, vars, arity, out))
    }

    /// Exterior derivative; coordinate partials respect the cover relation.
    pub fn d(&self) -> Result<DForm> {
        let arity = self.arity + 1;
        if arity > MAX_ARITY {
            return Err(Error::ArityTooHigh(arity));
        }
        let mut out: BTreeMap<Vec<usize>, QuadElem> = BTreeMap::new();
        for (idx, c) in &self.comps {
            for (j, v) in self.vars.iter().enumerate() {
                if idx.contains(&j) {
                    continue;
                }
                let dc = self.ring.derivative(c, v);
                if dc.is_zero() {
                    continue;
                }
                let pos = idx.iter().filter(|&&i| i < j).count();
                let mut ni = idx.clone();
                ni.insert(pos, j);
                let term = signed(dc, if pos % 2 == 0 { 1 } else { -1 });
                let e = out.entry(ni).or_default();
                *e = e.add(&term);
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(DForm::assemble(self.ring.clone(), self.vars.clone(), arity, out))
    }

    /// Drops the components containing `dv` (1-forms: the part tangent to `v = const`).
    pub fn without(&self, v: &str) -> DForm {
        let mut out = self.clone();
        if let Some(j) = self.vars.iter().position(|x| x == v) {
            out.comps.retain(|idx, _| !idx.contains(&j));
        }
        out
    }

    pub fn has_var(&self, v: &str) -> bool {
        let Some(j) = self.vars.iter().position(|x| x == v) else {
            return false;
        };
        self.comps
            .iter()
            .any(|(idx, c)| idx.contains(&j) || c.has_var(v))
            || self.ring.quad().is_some_and(|q| q.relation().has_var(v))
    }

    /// Applies a map to every coefficient.
    pub fn map_coefficients<F>(&self, mut f: F) -> Result<DForm>
    where
        F: FnMut(&QuadElem) -> Result<QuadElem>,
    {
        let mut comps = BTreeMap::new();
        for (i, c) in &self.comps {
            let n = f(c)?;
            if !n.is_zero() {
                comps.insert(i.clone(), n);
            }
        }
        Ok(DForm::assemble(self.ring.clone(), self.vars.clone(), self.arity, comps))
    }

    /// Splits a base-ring form whose coefficients are polynomial in `v`
    /// (with `v`-free denominators) into `sum_k v^k * forms[k]`. The `dv`
    /// components stay in the returned pieces.
    pub fn expand_in(&self, v: &str) -> Option<Vec<DForm>> {
        if self.ring.quad().is_some_and(|q| q.relation().has_var(v)) {
            return None;
        }
        let mut pieces: Vec<BTreeMap<Vec<usize>, QuadElem>> = Vec::new();
        for (idx, c) in &self.comps {
            for (part, is_odd) in [(&c.even, false), (&c.odd, true)] {
                if part.is_zero() {
                    continue;
                }
                if part.den().has_var(v) {
                    return None;
                }
                let den = RatFun::from(part.den().clone());
                for (k, pc) in part.num().coefficients_in(v).into_iter().enumerate() {
                    if pc.is_zero() {
                        continue;
                    }
                    let val = RatFun::from(pc).div(&den).expect("nonzero denominator");
                    if pieces.len() <= k {
                        pieces.resize(k + 1, BTreeMap::new());
                    }
                    let e: &mut QuadElem = pieces[k].entry(idx.clone()).or_default();
                    if is_odd {
                        e.odd = e.odd.add(&val);
                    } else {
                        e.even = e.even.add(&val);
                    }
                }
            }
        }
        Some(
            pieces
                .into_iter()
                .map(|comps| DForm::assemble(self.ring.clone(), self.vars.clone(), self.arity, comps))
                .collect(),
        )
    }

    /// Semantic equality (variable lists may differ in order or unused entries).
    pub fn same_as(&self, other: &DForm) -> bool {
        if self.is_zero() && other.is_zero() {
            return true;
        }
        if self.arity != other.arity {
            return false;
        }
        match self.sub(other) {
            Ok(diff) => diff.is_zero(),
            Err(_) => false,
        }
    }

    /// Renames variables in coefficients and differentials.
    pub fn rename(&self, names: &BTreeMap<String, String>) -> DForm {
        let vars: Vec<String> = self
            .vars
            .iter()
            .map(|v| names.get(v).cloned().unwrap_or_else(|| v.clone()))
            .collect();
        let comps = self
            .comps
            .iter()
            .map(|(i, c)| {
                (
                    i.clone(),
                    QuadElem {
                        even: c.even.rename(names),
                        odd: c.odd.rename(names),
                    },
                )
            })
            .collect();
        DForm::assemble(self.ring.clone(), vars, self.arity, comps)
    }

    /// Canonical text: `<coeff> d<v>` terms joined by `+`/`-`, wedges as `^`.
    pub fn render(&self) -> String {
        if self.comps.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (n, (idx, c)) in self.comps.iter().enumerate() {
            let diff: Vec<String> = idx.iter().map(|&i| format!("d{}", self.vars[i])).collect();
            let diff = diff.join("^");
            let (neg, body) = render_coefficient(&self.ring, c);
            if n == 0 {
                if neg {
                    out.push('-');
                    if !body.is_empty() || !diff.is_empty() {
                        out.push(' ');
                    }
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (body.is_empty(), diff.is_empty()) {
                (true, true) => out.push('1'),
                (true, false) => out.push_str(&diff),
                (false, true) => out.push_str(&body),
                (false, false) => {
                    out.push_str(&body);
                    out.push(' ');
                    out.push_str(&diff);
                }
            }
        }
        out
    }
}

fn index_or_push(vars: &mut Vec<String>, v: &str) -> usize {
    match vars.iter().position(|x| x == v) {
        Some(i) => i,
        None => {
            vars.push(v.to_string());
            vars.len() - 1
        }
    }
}

/// Returns `(negative, body)`; `body` is empty for a unit coefficient and
/// parenthesized whenever it is not a single product.
fn render_coefficient(ring: &CoeffRing, c: &QuadElem) -> (bool, String) {
    if c.odd.is_zero() {
        let f = &c.even;
        if let Some(k) = f.constant_value() {
            use num_traits::{One, Signed};
            let neg = k.is_negative();
            let a = k.abs();
            return (neg, if a.is_one() { String::new() } else { a.to_string() });
        }
        if f.num().num_terms() == 1 {
            // single-term numerator: pull the sign out
            let neg = f.num().leading_coefficient() < num_traits::Zero::zero();
            let body = if neg { f.neg().render() } else { f.render() };
            return (neg, body);
        }
        return (false, format!("({})", f.render()));
    }
    (false, format!("({})", ring.render(c)))
}

impl PartialEq for DForm {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.same_as(other)
    }
}

impl fmt::Display for DForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for DForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DForm<{}>({})", self.arity, self.render())
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct DFormRepr {
    vars: Vec<String>,
    arity: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    cover: Option<CoeffRing>,
    form: String,
}

impl serde::Serialize for DForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DFormRepr {
            vars: self.vars.clone(),
            arity: self.arity,
            cover: self.ring.quad().map(|_| self.ring.clone()),
            form: self.render(),
        }
        .serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for DForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = DFormRepr::deserialize(d)?;
        DForm::from_text(&repr.vars, repr.arity, repr.cover.unwrap_or_default(), &repr.form)
            .map_err(serde::de::Error::custom)
    }
}

impl DForm {
    /// Parses a rendered form; over a cover ring the generator may appear in
    /// coefficients.
    pub fn from_text(vars: &[String], arity: usize, ring: CoeffRing, text: &str) -> Result<DForm> {
        let mut allowed = vars.to_vec();
        if let Some(q) = ring.quad() {
            allowed.push(q.generator().to_string());
        }
        let parsed = crate::io::parse::parse_form_expr(text, Some(&allowed))?;
        if parsed.is_zero() {
            return DForm::zero(vars, arity)?.with_ring(ring);
        }
        if parsed.arity() != arity {
            return Err(Error::Syntax {
                line: 1,
                column: 1,
                message: format!("expected a {arity}-form"),
            });
        }
        let mut terms = Vec::new();
        for (names, c) in parsed.components() {
            let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
            terms.push((names, ring.lift(&c.even)?));
        }
        DForm::from_components(ring, vars, arity, terms)
    }
}

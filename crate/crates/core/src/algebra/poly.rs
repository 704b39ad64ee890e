//! Sparse multivariate polynomials over the rationals.
//!
//! Variables are kept sorted by [`var_cmp`] and trimmed to the ones that
//! actually occur, so structural equality is mathematical equality. Terms
//! are stored in graded-lexicographic order; the leading term is the last
//! entry of the map.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar. Always stored reduced with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Orders variable names by alphabetic prefix, then by numeric suffix, so
/// `z2 < z10`.
pub fn var_cmp(a: &str, b: &str) -> Ordering {
    fn split(s: &str) -> (&str, Option<u64>) {
        let cut = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        let (head, digits) = s.split_at(cut);
        (head, digits.parse().ok())
    }
    let (ha, na) = split(a);
    let (hb, nb) = split(b);
    ha.cmp(hb).then(na.cmp(&nb)).then(a.cmp(b))
}

/// Exponent vector aligned with the owning polynomial's variable list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Rational>,
}

impl Default for MPoly {
    fn default() -> Self {
        Self::zero()
    }
}

fn merge_vars(a: &[String], b: &[String]) -> Vec<String> {
    let mut out: Vec<String> = a.to_vec();
    for v in b {
        if !out.contains(v) {
            out.push(v.clone());
        }
    }
    out.sort_by(|x, y| var_cmp(x, y));
    out
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly {
            vars: Vec::new(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial(Vec::new()), c);
        }
        MPoly {
            vars: Vec::new(),
            terms,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(int(n))
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(vec![1]), Rational::one());
        MPoly {
            vars: vec![name.to_string()],
            terms,
        }
    }

    /// Builds a polynomial from arbitrary `(exponents, coefficient)` pairs over
    /// `vars` (any order, duplicates summed).
    pub fn from_terms<I>(vars: &[String], terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut sorted: Vec<String> = vars.to_vec();
        sorted.sort_by(|x, y| var_cmp(x, y));
        sorted.dedup();
        let perm: Vec<usize> = vars
            .iter()
            .map(|v| sorted.iter().position(|s| s == v).unwrap())
            .collect();
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (exps, c) in terms {
            assert_eq!(exps.len(), vars.len(), "exponent vector length mismatch");
            let mut e = vec![0u32; sorted.len()];
            for (i, k) in exps.into_iter().enumerate() {
                e[perm[i]] += k;
            }
            add_term(&mut map, Monomial(e), c);
        }
        Self::build(sorted, map)
    }

    /// Canonicalizes: drops unused variables.
    fn build(vars: Vec<String>, terms: BTreeMap<Monomial, Rational>) -> Self {
        let used: Vec<bool> = (0..vars.len())
            .map(|i| terms.keys().any(|m| m.0[i] != 0))
            .collect();
        if used.iter().all(|&u| u) {
            return MPoly { vars, terms };
        }
        let keep: Vec<usize> = (0..vars.len()).filter(|&i| used[i]).collect();
        let new_vars = keep.iter().map(|&i| vars[i].clone()).collect();
        let new_terms = terms
            .into_iter()
            .map(|(m, c)| (Monomial(keep.iter().map(|&i| m.0[i]).collect()), c))
            .collect();
        MPoly {
            vars: new_vars,
            terms: new_terms,
        }
    }

    fn remap(&self, target: &[String]) -> BTreeMap<Monomial, Rational> {
        if self.vars.as_slice() == target {
            return self.terms.clone();
        }
        let idx: Vec<usize> = self
            .vars
            .iter()
            .map(|v| target.iter().position(|t| t == v).unwrap())
            .collect();
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0u32; target.len()];
                for (i, &k) in m.0.iter().enumerate() {
                    e[idx[i]] = k;
                }
                (Monomial(e), c.clone())
            })
            .collect()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn has_var(&self, v: &str) -> bool {
        self.vars.iter().any(|x| x == v)
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(m, c)| (m.0.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.vars.is_empty() && self.terms.values().next().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_else(Rational::zero))
    }

    pub fn leading(&self) -> Option<(&[u32], &Rational)> {
        self.terms.iter().next_back().map(|(m, c)| (m.0.as_slice(), c))
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    /// Lowest total degree of a term.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    pub fn degree_in(&self, v: &str) -> u32 {
        match self.vars.iter().position(|x| x == v) {
            Some(i) => self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.combine(other, true)
    }

    fn combine(&self, other: &MPoly, negate: bool) -> MPoly {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { other.neg() } else { other.clone() };
        }
        let vars = if self.vars == other.vars {
            self.vars.clone()
        } else {
            merge_vars(&self.vars, &other.vars)
        };
        let mut acc = self.remap(&vars);
        for (m, c) in other.remap(&vars) {
            add_term(&mut acc, m, if negate { -c } else { c });
        }
        Self::build(vars, acc)
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        if self.is_zero() || other.is_zero() {
            return MPoly::zero();
        }
        if other.is_constant() {
            return self.scale(&other.constant_value().unwrap());
        }
        if self.is_constant() {
            return other.scale(&self.constant_value().unwrap());
        }
        let vars = if self.vars == other.vars {
            self.vars.clone()
        } else {
            merge_vars(&self.vars, &other.vars)
        };
        let a = self.remap(&vars);
        let b = other.remap(&vars);
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &a {
            for (mb, cb) in &b {
                let e: Vec<u32> = ma.0.iter().zip(&mb.0).map(|(x, y)| x + y).collect();
                add_term(&mut acc, Monomial(e), ca * cb);
            }
        }
        Self::build(vars, acc)
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut result = MPoly::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn derivative(&self, v: &str) -> MPoly {
        let Some(i) = self.vars.iter().position(|x| x == v) else {
            return MPoly::zero();
        };
        let mut acc = BTreeMap::new();
        for (m, c) in &self.terms {
            let k = m.0[i];
            if k == 0 {
                continue;
            }
            let mut e = m.0.clone();
            e[i] -= 1;
            add_term(&mut acc, Monomial(e), c * Rational::from_integer(BigInt::from(k)));
        }
        Self::build(self.vars.clone(), acc)
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(MPoly::zero());
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        if d.vars.iter().any(|v| !self.has_var(v)) {
            return None;
        }
        let vars = self.vars.clone();
        let dm = d.remap(&vars);
        let (dlead_m, dlead_c) = dm.iter().next_back().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.terms.clone();
        let mut quot: BTreeMap<Monomial, Rational> = BTreeMap::new();
        while let Some((rm, rc)) = rem.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if rm.0.iter().zip(&dlead_m.0).any(|(a, b)| a < b) {
                return None;
            }
            let qm = Monomial(rm.0.iter().zip(&dlead_m.0).map(|(a, b)| a - b).collect());
            let qc = rc / &dlead_c;
            for (m, c) in &dm {
                let e: Vec<u32> = m.0.iter().zip(&qm.0).map(|(a, b)| a + b).collect();
                add_term(&mut rem, Monomial(e), -(c * &qc));
            }
            add_term(&mut quot, qm, qc);
        }
        Some(Self::build(vars, quot))
    }

    /// Coefficients with respect to `v`: entry `k` multiplies `v^k`.
    pub fn coefficients_in(&self, v: &str) -> Vec<MPoly> {
        let Some(i) = self.vars.iter().position(|x| x == v) else {
            return if self.is_zero() {
                Vec::new()
            } else {
                vec![self.clone()]
            };
        };
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<BTreeMap<Monomial, Rational>> = vec![BTreeMap::new(); deg + 1];
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = e[i] as usize;
            e[i] = 0;
            buckets[k].insert(Monomial(e), c.clone());
        }
        buckets
            .into_iter()
            .map(|b| Self::build(self.vars.clone(), b))
            .collect()
    }

    pub fn from_coefficients_in(v: &str, coeffs: &[MPoly]) -> MPoly {
        let x = MPoly::var(v);
        let mut acc = MPoly::zero();
        for c in coeffs.iter().rev() {
            acc = acc.mul(&x).add(c);
        }
        acc
    }

    /// Homogeneous pieces keyed by total degree. Empty iff the polynomial is zero.
    pub fn homogeneous_components(&self) -> BTreeMap<u32, MPoly> {
        let mut buckets: BTreeMap<u32, BTreeMap<Monomial, Rational>> = BTreeMap::new();
        for (m, c) in &self.terms {
            buckets.entry(m.degree()).or_default().insert(m.clone(), c.clone());
        }
        buckets
            .into_iter()
            .map(|(d, t)| (d, Self::build(self.vars.clone(), t)))
            .collect()
    }

    /// Common degree if homogeneous (zero counts as homogeneous of any degree, reported as `None`).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Splits `self = c * p` with `p` having coprime integer coefficients and a
    /// positive leading coefficient.
    pub fn primitive(&self) -> (Rational, MPoly) {
        if self.is_zero() {
            return (Rational::zero(), MPoly::zero());
        }
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            let scaled = c.numer() * (&den_lcm / c.denom());
            num_gcd = num_gcd.gcd(&scaled);
        }
        let mut content = Rational::new(num_gcd, den_lcm);
        if self.leading_coefficient().is_negative() {
            content = -content;
        }
        let inv = content.recip();
        (content, self.scale(&inv))
    }

    /// Primitive part with positive leading coefficient.
    pub fn normalized(&self) -> MPoly {
        self.primitive().1
    }

    /// Minimal exponent of each variable over all terms, as a monomial polynomial.
    pub fn monomial_content(&self) -> MPoly {
        if self.is_zero() {
            return MPoly::one();
        }
        let mut mins = vec![u32::MAX; self.vars.len()];
        for m in self.terms.keys() {
            for (i, &k) in m.0.iter().enumerate() {
                mins[i] = mins[i].min(k);
            }
        }
        MPoly::from_terms(&self.vars, [(mins, Rational::one())])
    }

    /// Evaluates at a point binding every variable; `None` if some variable is unbound.
    pub fn eval(&self, point: &BTreeMap<String, Rational>) -> Option<Rational> {
        let vals: Vec<&Rational> = self
            .vars
            .iter()
            .map(|v| point.get(v))
            .collect::<Option<Vec<_>>>()?;
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in m.0.iter().enumerate() {
                if k > 0 {
                    t *= num_traits::pow(vals[i].clone(), k as usize);
                }
            }
            acc += t;
        }
        Some(acc)
    }

    /// Substitutes polynomials for some variables (others pass through).
    pub fn compose(&self, bindings: &BTreeMap<String, MPoly>) -> MPoly {
        let mut acc = MPoly::zero();
        let mut cache: BTreeMap<(usize, u32), MPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(c.clone());
            for (i, &k) in m.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let p = cache.entry((i, k)).or_insert_with(|| {
                    match bindings.get(&self.vars[i]) {
                        Some(b) => b.pow(k),
                        None => MPoly::var(&self.vars[i]).pow(k),
                    }
                });
                t = t.mul(p);
            }
            acc = acc.add(&t);
        }
        acc
    }

    pub fn rename(&self, names: &BTreeMap<String, String>) -> MPoly {
        let vars: Vec<String> = self
            .vars
            .iter()
            .map(|v| names.get(v).cloned().unwrap_or_else(|| v.clone()))
            .collect();
        MPoly::from_terms(
            &vars,
            self.terms.iter().map(|(m, c)| (m.0.clone(), c.clone())),
        )
    }

    /// Renders with the leading term first, e.g. `-z0^2 + 2*z1*z2`.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !a.is_one() || m.degree() == 0 {
                factors.push(a.to_string());
            }
            for (j, &k) in m.0.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(self.vars[j].clone()),
                    _ => factors.push(format!("{}^{}", self.vars[j], k)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

fn add_term(map: &mut BTreeMap<Monomial, Rational>, m: Monomial, c: Rational) {
    if c.is_zero() {
        return;
    }
    match map.entry(m) {
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({})", self.render())
    }
}

macro_rules! poly_binop {
    ($tr:ident, $method:ident, $f:ident) => {
        impl std::ops::$tr<&MPoly> for &MPoly {
            type Output = MPoly;
            fn $method(self, rhs: &MPoly) -> MPoly {
                MPoly::$f(self, rhs)
            }
        }
        impl std::ops::$tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: MPoly) -> MPoly {
                MPoly::$f(&self, &rhs)
            }
        }
    };
}
poly_binop!(Add, add, add);
poly_binop!(Sub, sub, sub);
poly_binop!(Mul, mul, mul);

impl std::ops::Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly::neg(self)
    }
}

impl std::ops::Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly::neg(&self)
    }
}

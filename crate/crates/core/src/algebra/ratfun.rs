//! Elements of the rational function field Q(x_1, ..., x_k).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::gcd::gcd;
use super::poly::{MPoly, Rational};
use crate::error::{Error, Result};

/// A reduced fraction `num / den`.
///
/// `den` is a primitive integer polynomial with positive leading coefficient
/// and shares no factor with `num`, so structural equality is field equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: MPoly,
    den: MPoly,
}

impl Default for RatFun {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<MPoly> for RatFun {
    fn from(p: MPoly) -> Self {
        RatFun {
            num: p,
            den: MPoly::one(),
        }
    }
}

impl RatFun {
    pub fn zero() -> Self {
        MPoly::zero().into()
    }

    pub fn one() -> Self {
        MPoly::one().into()
    }

    pub fn constant(c: Rational) -> Self {
        MPoly::constant(c).into()
    }

    pub fn from_int(n: i64) -> Self {
        MPoly::from_int(n).into()
    }

    pub fn var(name: &str) -> Self {
        MPoly::var(name).into()
    }

    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: MPoly, den: MPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(c) = den.constant_value() {
            return RatFun {
                num: num.scale(&c.recip()),
                den: MPoly::one(),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        Self::finish(num, den)
    }

    /// Normalizes the scalar so the denominator is primitive with positive
    /// leading coefficient; assumes `num`, `den` coprime.
    fn finish(num: MPoly, den: MPoly) -> Self {
        let (c, den) = den.primitive();
        RatFun {
            num: num.scale(&c.recip()),
            den,
        }
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_polynomial(&self) -> Option<&MPoly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn has_var(&self, v: &str) -> bool {
        self.num.has_var(v) || self.den.has_var(v)
    }

    pub fn vars(&self) -> Vec<String> {
        let mut out: Vec<String> = self.num.vars().to_vec();
        for v in self.den.vars() {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
        out.sort_by(|a, b| super::poly::var_cmp(a, b));
        out
    }

    pub fn neg(&self) -> RatFun {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &Rational) -> RatFun {
        if c.is_zero() {
            return Self::zero();
        }
        RatFun {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &RatFun) -> RatFun {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            if self.den.is_one() {
                return self.num.add(&other.num).into();
            }
            return Self::reduce(self.num.add(&other.num), self.den.clone());
        }
        if other.den.is_one() {
            return Self::finish(self.num.add(&other.num.mul(&self.den)), self.den.clone());
        }
        if self.den.is_one() {
            return Self::finish(self.num.mul(&other.den).add(&other.num), other.den.clone());
        }
        let g = gcd(&self.den, &other.den);
        let da = self.den.div_exact(&g).unwrap();
        let db = other.den.div_exact(&g).unwrap();
        let num = self.num.mul(&db).add(&other.num.mul(&da));
        Self::reduce(num, da.mul(&other.den))
    }

    pub fn sub(&self, other: &RatFun) -> RatFun {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFun) -> RatFun {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return self.num.mul(&other.num).into();
        }
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = other.den.div_exact(&g1).unwrap();
        let n2 = other.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        Self::finish(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn mul_poly(&self, p: &MPoly) -> RatFun {
        self.mul(&RatFun::from(p.clone()))
    }

    pub fn recip(&self) -> Result<RatFun> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::finish(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RatFun) -> Result<RatFun> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn pow(&self, k: i32) -> Result<RatFun> {
        if k < 0 {
            return self.recip()?.pow(-k);
        }
        let k = k as u32;
        Ok(RatFun {
            num: self.num.pow(k),
            den: self.den.pow(k),
        })
    }

    /// Partial derivative by the quotient rule.
    pub fn derivative(&self, v: &str) -> RatFun {
        if !self.has_var(v) {
            return Self::zero();
        }
        if self.den.is_one() {
            return self.num.derivative(v).into();
        }
        // With g = gcd(D, D'), D/g is the radical of D and
        // (N' D/g - N D'/g) / (D D/g) is already in lowest terms.
        let dn = self.num.derivative(v);
        let dd = self.den.derivative(v);
        if dd.is_zero() {
            return Self::reduce(dn, self.den.clone());
        }
        let g = gcd(&self.den, &dd);
        let (rad, dd) = if g.is_one() {
            (self.den.clone(), dd)
        } else {
            (self.den.div_exact(&g).unwrap(), dd.div_exact(&g).unwrap())
        };
        let num = dn.mul(&rad).sub(&self.num.mul(&dd));
        if num.is_zero() {
            return Self::zero();
        }
        Self::finish(num, self.den.mul(&rad))
    }

    /// Simultaneous substitution `v -> bindings[v]`; unbound variables pass through.
    pub fn substitute(&self, bindings: &BTreeMap<String, RatFun>) -> Result<RatFun> {
        let n = substitute_poly(&self.num, bindings);
        let d = substitute_poly(&self.den, bindings);
        n.div(&d)
    }

    pub fn eval(&self, point: &BTreeMap<String, Rational>) -> Option<Rational> {
        let n = self.num.eval(point)?;
        let d = self.den.eval(point)?;
        if d.is_zero() {
            None
        } else {
            Some(n / d)
        }
    }

    pub fn rename(&self, names: &BTreeMap<String, String>) -> RatFun {
        Self::finish(self.num.rename(names), self.den.rename(names))
    }

    pub fn render(&self) -> String {
        if self.den.is_one() {
            return self.num.render();
        }
        let n = self.num.render();
        let n = if self.num.num_terms() > 1 {
            format!("({n})")
        } else {
            n
        };
        let d = self.den.render();
        let d = if self.den.num_terms() > 1 || !single_factor(&self.den) {
            format!("({d})")
        } else {
            d
        };
        format!("{n}/{d}")
    }
}

fn single_factor(p: &MPoly) -> bool {
    match p.terms().next() {
        Some((e, c)) => {
            let factors = e.iter().filter(|&&k| k > 0).count() + usize::from(!c.is_one());
            factors <= 1
        }
        None => true,
    }
}

/// Substitutes rational functions into a polynomial over a common
/// denominator: the only reduction happens once, at the end.
pub fn substitute_poly(p: &MPoly, bindings: &BTreeMap<String, RatFun>) -> RatFun {
    if p.is_zero() {
        return RatFun::zero();
    }
    let vars = p.vars().to_vec();
    let bound: Vec<Option<&RatFun>> = vars.iter().map(|v| bindings.get(v)).collect();
    let mut max_exp = vec![0u32; vars.len()];
    for (e, _) in p.terms() {
        for (i, &k) in e.iter().enumerate() {
            max_exp[i] = max_exp[i].max(k);
        }
    }
    let mut num_pows: Vec<Vec<MPoly>> = Vec::with_capacity(vars.len());
    let mut den_pows: Vec<Vec<MPoly>> = Vec::with_capacity(vars.len());
    let mut common_den = MPoly::one();
    for (i, v) in vars.iter().enumerate() {
        let (n, d) = match bound[i] {
            Some(r) => (r.num.clone(), r.den.clone()),
            None => (MPoly::var(v), MPoly::one()),
        };
        let mut np = vec![MPoly::one()];
        let mut dp = vec![MPoly::one()];
        for k in 1..=max_exp[i] as usize {
            np.push(np[k - 1].mul(&n));
            dp.push(dp[k - 1].mul(&d));
        }
        common_den = common_den.mul(&dp[max_exp[i] as usize]);
        num_pows.push(np);
        den_pows.push(dp);
    }
    let mut num = MPoly::zero();
    for (e, c) in p.terms() {
        let mut t = MPoly::constant(c.clone());
        for (i, &k) in e.iter().enumerate() {
            let k = k as usize;
            let m = max_exp[i] as usize;
            if k > 0 {
                t = t.mul(&num_pows[i][k]);
            }
            if m > k {
                t = t.mul(&den_pows[i][m - k]);
            }
        }
        num = num.add(&t);
    }
    if common_den.is_one() {
        return num.into();
    }
    RatFun::reduce(num, common_den)
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFun({})", self.render())
    }
}

macro_rules! ratfun_binop {
    ($tr:ident, $method:ident, $f:ident) => {
        impl std::ops::$tr<&RatFun> for &RatFun {
            type Output = RatFun;
            fn $method(self, rhs: &RatFun) -> RatFun {
                RatFun::$f(self, rhs)
            }
        }
        impl std::ops::$tr<RatFun> for RatFun {
            type Output = RatFun;
            fn $method(self, rhs: RatFun) -> RatFun {
                RatFun::$f(&self, &rhs)
            }
        }
    };
}
ratfun_binop!(Add, add, add);
ratfun_binop!(Sub, sub, sub);
ratfun_binop!(Mul, mul, mul);

impl std::ops::Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun::neg(self)
    }
}

impl std::ops::Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun::neg(&self)
    }
}

impl serde::Serialize for RatFun {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.render())
    }
}

impl<'de> serde::Deserialize<'de> for RatFun {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        crate::io::parse::parse_ratfun(&text, None).map_err(serde::de::Error::custom)
    }
}

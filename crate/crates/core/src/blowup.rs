//! Expansion of a degree-four foliation at a point of jet order at least two
//! and its strict transform in the blow-up chart `(tau, x) -> (x tau, x)`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{MPoly, RatFun, Rational};
use crate::error::{Error, Result};
use crate::foliation::{affine_restrict, affine_vars, jet_order, radial_contraction, translate, Foliation};
use crate::forms::{DForm, RationalMap};

/// Homogeneous pieces `alpha_2..alpha_5` of an affine form at a point
/// moved to the origin. Coordinates are `a1..an`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineExpansion {
    pub chart: usize,
    pub point: Vec<String>,
    pub n: usize,
    pub alpha: [DForm; 4],
}

impl AffineExpansion {
    /// Builds an expansion from an affine 1-form already centered at the
    /// origin; every coefficient must have order at least 2 and degree at
    /// most 5, and the degree-5 piece must be radial-free.
    pub fn from_form(w: &DForm, chart: usize, point: &[Rational]) -> Result<AffineExpansion> {
        let n = w.vars().len();
        let a = affine_vars(n);
        let mut pieces: Vec<Vec<(Vec<String>, crate::algebra::QuadElem)>> = vec![Vec::new(); 4];
        for (names, c) in w.components() {
            let p = c
                .even
                .as_polynomial()
                .ok_or_else(|| Error::Internal("expansion of a non-polynomial form".into()))?;
            for (deg, h) in p.homogeneous_components() {
                if deg < 2 {
                    return Err(Error::JetTooLow(deg as usize));
                }
                if deg > 5 {
                    return Err(Error::DegreeMismatch(deg as i64 - 1));
                }
                let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
                pieces[deg as usize - 2].push((names, crate::algebra::QuadElem::base(RatFun::from(h))));
            }
        }
        let mut alpha = Vec::new();
        for p in pieces {
            alpha.push(DForm::from_components(Default::default(), &a, 1, p)?);
        }
        let alpha: [DForm; 4] = alpha.try_into().expect("four pieces");
        let r5 = radial_contraction(&alpha[3]);
        if !r5.is_zero() {
            return Err(Error::NotRadial(r5.render()));
        }
        Ok(AffineExpansion {
            chart,
            point: point.iter().map(|c| c.to_string()).collect(),
            n,
            alpha,
        })
    }

    /// `alpha_j` for `j` in `2..=5`.
    pub fn piece(&self, j: usize) -> &DForm {
        &self.alpha[j - 2]
    }

    pub fn vars(&self) -> Vec<String> {
        affine_vars(self.n)
    }

    /// `alpha_2 + alpha_3 + alpha_4 + alpha_5`.
    pub fn total(&self) -> DForm {
        let mut acc = self.alpha[0].clone();
        for a in &self.alpha[1..] {
            acc = acc.add(a).expect("same arity");
        }
        acc
    }
}

/// Restricts `f` to `chart`, moves `point` to the origin and splits the
/// result into homogeneous pieces.
pub fn expand_at_point(f: &Foliation, chart: usize, point: &[Rational]) -> Result<AffineExpansion> {
    if f.degree() != 4 {
        return Err(Error::DegreeMismatch(f.degree()));
    }
    let w = affine_restrict(f, chart)?;
    let j = jet_order(&w, point)?;
    if j < 2 {
        return Err(Error::JetTooLow(j));
    }
    let t = translate(&w, point)?;
    AffineExpansion::from_form(&t, chart, point)
}

/// Names of the blow-up chart coordinates: `tau1..tau{n-1}` and `x`.
pub fn tau_vars(n: usize) -> Vec<String> {
    (1..n).map(|k| format!("tau{k}")).collect()
}

pub const X: &str = "x";

/// `sigma(tau, x) = (x tau, x)` as a map into `a1..an`.
pub fn sigma(n: usize) -> RationalMap {
    let tau = tau_vars(n);
    let mut src = tau.clone();
    src.push(X.to_string());
    let a = affine_vars(n);
    let mut images: Vec<(String, RatFun)> = tau
        .iter()
        .zip(&a)
        .map(|(t, ai)| (ai.clone(), RatFun::var(t).mul(&RatFun::var(X))))
        .collect();
    images.push((a[n - 1].clone(), RatFun::var(X)));
    RationalMap::new(&src, images).expect("valid map")
}

/// Strict transform data in the chart `(tau, x)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlowupChartData {
    pub n: usize,
    /// `theta_2..theta_5`, forms in `tau`.
    pub theta: [DForm; 4],
    /// `F_3, F_4, F_5` as rendered polynomials in `tau`.
    #[serde(with = "poly_triple")]
    pub f: [MPoly; 3],
    pub eta: DForm,
}

impl BlowupChartData {
    pub fn theta(&self, j: usize) -> &DForm {
        &self.theta[j - 2]
    }

    /// `F_j` for `j` in `3..=5`.
    pub fn f(&self, j: usize) -> &MPoly {
        &self.f[j - 3]
    }

    pub fn tau(&self) -> Vec<String> {
        tau_vars(self.n)
    }

    /// `tau` followed by `x`.
    pub fn chart_vars(&self) -> Vec<String> {
        let mut v = self.tau();
        v.push(X.to_string());
        v
    }

    pub fn case_tag(&self) -> CaseTag {
        case_tag(self)
    }
}

mod poly_triple {
    use super::MPoly;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(f: &[MPoly; 3], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = f.iter().map(|p| p.render()).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[MPoly; 3], D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        let polys: Vec<MPoly> = v
            .iter()
            .map(|t| crate::io::parse::parse_poly(t, None).map_err(serde::de::Error::custom))
            .collect::<Result<_, _>>()?;
        polys
            .try_into()
            .map_err(|_| serde::de::Error::custom("expected three polynomials"))
    }
}

/// Reads off `theta_j` and `F_{j+1}` from each piece: with `c_i` the
/// coefficients of `alpha_j`, `theta_j = sum_{i<n} c_i(tau, 1) dtau_i` and
/// `F_{j+1} = (i_R alpha_j)(tau, 1)`.
pub fn blowup_chart(e: &AffineExpansion) -> Result<BlowupChartData> {
    let n = e.n;
    if n < 2 {
        return Err(Error::DimensionTooLow(n));
    }
    let a = affine_vars(n);
    let tau = tau_vars(n);
    let mut at_one: BTreeMap<String, RatFun> = tau
        .iter()
        .zip(&a)
        .map(|(t, ai)| (ai.clone(), RatFun::var(t)))
        .collect();
    at_one.insert(a[n - 1].clone(), RatFun::one());
    let mut theta = Vec::new();
    let mut fs = Vec::new();
    for j in 2..=5 {
        let alpha = e.piece(j);
        let mut terms = Vec::new();
        for (t, ai) in tau.iter().zip(&a) {
            let c = alpha.coeff(ai).substitute(&at_one)?;
            terms.push((t.as_str(), c));
        }
        theta.push(DForm::one_form(&tau, terms).with_vars(&tau));
        let fj = radial_contraction(alpha).substitute(&at_one)?;
        let fj = fj
            .as_polynomial()
            .cloned()
            .ok_or_else(|| Error::Internal("non-polynomial F".into()))?;
        if j == 5 && !fj.is_zero() {
            return Err(Error::Internal("i_R(alpha_5) does not vanish".into()));
        }
        fs.push(fj);
    }
    fs.pop();
    let theta: [DForm; 4] = theta.try_into().expect("four thetas");
    let f: [MPoly; 3] = fs.try_into().expect("three F");
    let eta = assemble_eta(n, &theta, &f)?;
    Ok(BlowupChartData { n, theta, f, eta })
}

/// `x theta_2 + x^2 theta_3 + x^3 theta_4 + x^4 theta_5 + (F_3 + x F_4 + x^2 F_5) dx`.
pub fn assemble_eta(n: usize, theta: &[DForm; 4], f: &[MPoly; 3]) -> Result<DForm> {
    let mut vars = tau_vars(n);
    vars.push(X.to_string());
    let x = RatFun::var(X);
    let mut eta = DForm::zero(&vars, 1)?;
    let mut xp = RatFun::one();
    for t in theta {
        xp = xp.mul(&x);
        eta = eta.add(&t.scale(&xp))?;
    }
    let mut g = RatFun::zero();
    let mut xp = RatFun::one();
    for fj in f {
        g = g.add(&RatFun::from(fj.clone()).mul(&xp));
        xp = xp.mul(&x);
    }
    Ok(eta.add(&DForm::one_form(&vars, [(X, g)]))?.with_vars(&vars))
}

/// Vanishing pattern of `(F_3, F_4, F_5)` and the resulting case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CaseTag {
    pub case: u8,
    pub f3_zero: bool,
    pub f4_zero: bool,
    pub f5_zero: bool,
}

impl CaseTag {
    pub fn from_pattern(f3_zero: bool, f4_zero: bool, f5_zero: bool) -> CaseTag {
        let case = match (f3_zero, f4_zero, f5_zero) {
            (true, true, true) => 1,
            (false, true, true) => 2,
            (true, true, false) => 3,
            (true, false, _) => 4,
            (false, false, true) => 5,
            (false, true, false) => 6,
            (false, false, false) => 7,
        };
        CaseTag {
            case,
            f3_zero,
            f4_zero,
            f5_zero,
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = |b: bool| if b { "0" } else { "*" };
        write!(
            f,
            "case {} (F3 {}, F4 {}, F5 {})",
            self.case,
            z(self.f3_zero),
            z(self.f4_zero),
            z(self.f5_zero)
        )
    }
}

pub fn case_tag(b: &BlowupChartData) -> CaseTag {
    CaseTag::from_pattern(b.f[0].is_zero(), b.f[1].is_zero(), b.f[2].is_zero())
}

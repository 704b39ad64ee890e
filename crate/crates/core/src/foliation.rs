//! Codimension-one foliations on projective space, given by homogeneous
//! integrable 1-forms on the affine cone.
//!
//! The singular set is only controlled through saturation: a saturated form
//! has no codimension-one zeros, but no dimension computation is made.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::{gcd::gcd_all, rat, MPoly, RatFun, Rational};
use crate::error::{Error, Result};
use crate::forms::{interior_product, DForm, RationalMap, VField};

/// A foliation of P^n defined by `omega` in homogeneous coordinates
/// `z0..zn` (the form's variable list, in order).
#[derive(Clone, Debug, PartialEq)]
pub struct Foliation {
    n: usize,
    omega: DForm,
    degree: i64,
}

impl Foliation {
    /// Validates homogeneity, the radial condition, saturation and
    /// integrability.
    pub fn new(omega: DForm) -> Result<Foliation> {
        let degree = foliation_degree(&omega)?;
        if let Integrability::NotIntegrable(w) = check_integrable(&omega) {
            return Err(Error::NotIntegrable(w.render()));
        }
        let n = omega.vars().len() - 1;
        Ok(Foliation { n, omega, degree })
    }

    /// Saturates first, then validates.
    pub fn saturating(omega: DForm) -> Result<Foliation> {
        Foliation::new(saturate(&omega)?)
    }

    /// As `new`, additionally requiring the given degree.
    pub fn with_degree(omega: DForm, degree: i64) -> Result<Foliation> {
        let f = Foliation::new(omega)?;
        if f.degree != degree {
            return Err(Error::DegreeMismatch(f.degree));
        }
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn omega(&self) -> &DForm {
        &self.omega
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn vars(&self) -> &[String] {
        self.omega.vars()
    }
}

/// Names of the affine coordinates of an n-dimensional chart.
pub fn affine_vars(n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("a{k}")).collect()
}

/// Names `z0..zn`.
pub fn projective_vars(n: usize) -> Vec<String> {
    (0..=n).map(|k| format!("z{k}")).collect()
}

fn polynomial_coefficients(w: &DForm) -> Result<Vec<(String, MPoly)>> {
    let mut out = Vec::new();
    for v in w.vars() {
        let c = w.coefficient(v);
        if !c.odd.is_zero() {
            return Err(Error::IncompatibleRings);
        }
        if c.even.is_zero() {
            continue;
        }
        let p = c
            .even
            .as_polynomial()
            .cloned()
            .ok_or(Error::NotHomogeneous)?;
        out.push((v.clone(), p));
    }
    Ok(out)
}

/// Divides all coefficients by their polynomial gcd.
pub fn saturate(w: &DForm) -> Result<DForm> {
    if w.arity() != 1 {
        return Err(Error::Internal("saturate expects a 1-form".into()));
    }
    if w.is_zero() {
        return Err(Error::ZeroForm);
    }
    let coeffs = polynomial_coefficients(w).map_err(|_| {
        Error::Internal("saturate expects polynomial coefficients".into())
    })?;
    let g = gcd_all(coeffs.iter().map(|(_, p)| p));
    if g.is_constant() {
        return Ok(w.clone());
    }
    Ok(w.scale(&RatFun::new(MPoly::one(), g)?))
}

/// `(common coefficient degree) - 1`, after checking homogeneity, the
/// radial condition and saturation.
pub fn foliation_degree(w: &DForm) -> Result<i64> {
    if w.arity() != 1 {
        return Err(Error::Internal("expected a 1-form".into()));
    }
    if w.is_zero() {
        return Err(Error::ZeroForm);
    }
    let coeffs = polynomial_coefficients(w)?;
    let mut deg = None;
    for (_, p) in &coeffs {
        let d = p.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
        if deg.is_some_and(|e| e != d) {
            return Err(Error::NotHomogeneous);
        }
        deg = Some(d);
    }
    let r = radial_contraction(w);
    if !r.is_zero() {
        return Err(Error::NotRadial(r.render()));
    }
    let g = gcd_all(coeffs.iter().map(|(_, p)| p));
    if !g.is_constant() {
        return Err(Error::NotSaturated(g.render()));
    }
    Ok(deg.expect("nonzero form") as i64 - 1)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Integrability {
    Integrable,
    /// The nonzero 3-form `w ^ dw`.
    NotIntegrable(DForm),
}

impl Integrability {
    pub fn holds(&self) -> bool {
        matches!(self, Integrability::Integrable)
    }
}

pub fn check_integrable(w: &DForm) -> Integrability {
    if w.vars().len() < 3 {
        return Integrability::Integrable;
    }
    let dw = w.d().expect("1-form");
    let t = w.wedge(&dw).expect("3-form");
    if t.is_zero() {
        Integrability::Integrable
    } else {
        Integrability::NotIntegrable(t)
    }
}

/// `i_R w` for the Euler field on the form's variables.
pub fn radial_contraction(w: &DForm) -> RatFun {
    let r = VField::radial(w.vars());
    interior_product(&r, w).value().even
}

/// Pullback under the inclusion of the chart `z_i = 1`; the remaining
/// coordinates are renamed `a1..an` in order.
pub fn affine_restrict(f: &Foliation, chart: usize) -> Result<DForm> {
    restrict_form(f.omega(), chart)
}

pub fn restrict_form(w: &DForm, chart: usize) -> Result<DForm> {
    let z = w.vars();
    if chart >= z.len() {
        return Err(Error::BadChart(chart));
    }
    let a = affine_vars(z.len() - 1);
    let mut images = Vec::new();
    let mut k = 0;
    for (j, v) in z.iter().enumerate() {
        if j == chart {
            images.push((v.clone(), RatFun::one()));
        } else {
            images.push((v.clone(), RatFun::var(&a[k])));
            k += 1;
        }
    }
    let phi = RationalMap::new(&a, images)?;
    phi.pullback(w)
}

/// Inverse of `restrict_form`: pulls the affine form back along
/// `a_k = z_j / z_chart`, clears the power of `z_chart` and saturates.
pub fn homogenize(w: &DForm, chart: usize, z: &[String]) -> Result<DForm> {
    if chart >= z.len() {
        return Err(Error::BadChart(chart));
    }
    let a = affine_vars(z.len() - 1);
    let zc = RatFun::var(&z[chart]);
    let images: Vec<(String, RatFun)> = z
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != chart)
        .zip(a.iter())
        .map(|((_, v), ak)| (ak.clone(), RatFun::var(v).div(&zc).expect("nonzero")))
        .collect();
    let phi = RationalMap::new(z, images)?;
    let pulled = phi.pullback(w)?;
    let mut m = 0;
    for (_, c) in pulled.components() {
        m = m.max(c.even.den().degree_in(&z[chart]));
    }
    let cleared = pulled.scale(&RatFun::from(MPoly::var(&z[chart]).pow(m)));
    let cleared = cleared.with_vars(z);
    saturate(&cleared)
}

/// Translates coefficients by `v -> v + p_v`; the differentials are unchanged.
pub fn translate(w: &DForm, point: &[Rational]) -> Result<DForm> {
    let vars = w.vars().to_vec();
    if point.len() != vars.len() {
        return Err(Error::PointDimension {
            expected: vars.len(),
            got: point.len(),
        });
    }
    if point.iter().all(|c| c.is_zero()) {
        return Ok(w.clone());
    }
    let images = vars.iter().zip(point).map(|(v, c)| {
        (
            v.clone(),
            RatFun::var(v).add(&RatFun::constant(c.clone())),
        )
    });
    RationalMap::new(&vars, images)?.pullback(w)
}

/// Least k such that the k-jet of `w` at `point` is nonzero. `point` lists
/// coordinates in the order of `w.vars()`.
pub fn jet_order(w: &DForm, point: &[Rational]) -> Result<usize> {
    if w.is_zero() {
        return Err(Error::ZeroForm);
    }
    let t = translate(w, point)?;
    let mut best = u32::MAX;
    for (_, c) in t.components() {
        let p = c
            .even
            .as_polynomial()
            .ok_or_else(|| Error::Internal("jet order of a non-polynomial form".into()))?;
        best = best.min(p.order().expect("nonzero coefficient"));
    }
    Ok(best as usize)
}

/// A polynomial with integer coefficients for fast zero tests at rational points.
struct IntPoly {
    idx: Vec<usize>,
    terms: Vec<(Vec<u32>, BigInt)>,
    deg: u32,
}

impl IntPoly {
    fn new(p: &MPoly, vars: &[String]) -> IntPoly {
        let (_, pp) = p.primitive();
        let idx = pp
            .vars()
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("known variable"))
            .collect();
        let terms = pp
            .terms()
            .map(|(e, c)| (e.to_vec(), c.numer().clone()))
            .collect();
        IntPoly {
            idx,
            terms,
            deg: p.total_degree().unwrap_or(0),
        }
    }

    /// Zero test of `p(q / den)` via `den^deg * p(q / den)`.
    fn vanishes(&self, q: &[BigInt], den: &BigInt) -> bool {
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            let mut tot = 0;
            for (k, &ek) in e.iter().enumerate() {
                if ek > 0 {
                    t *= num_traits::pow(q[self.idx[k]].clone(), ek as usize);
                    tot += ek;
                }
            }
            if self.deg > tot {
                t *= num_traits::pow(den.clone(), (self.deg - tot) as usize);
            }
            acc += t;
        }
        acc.is_zero()
    }
}

/// Precomputed coefficients and first partials of an affine form.
struct JetTester {
    polys: Vec<IntPoly>,
}

impl JetTester {
    fn new(w: &DForm) -> Result<JetTester> {
        let vars = w.vars().to_vec();
        let mut polys = Vec::new();
        for (_, p) in polynomial_coefficients(w)? {
            for v in &vars {
                let dp = p.derivative(v);
                if !dp.is_zero() {
                    polys.push(IntPoly::new(&dp, &vars));
                }
            }
            polys.push(IntPoly::new(&p, &vars));
        }
        // cheap (low-degree) tests first
        polys.sort_by_key(|p| p.deg);
        Ok(JetTester { polys })
    }

    fn jet_at_least_two(&self, point: &[Rational]) -> bool {
        let mut den = BigInt::one();
        for c in point {
            den = den.lcm(c.denom());
        }
        let q: Vec<BigInt> = point
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        self.polys.iter().all(|p| p.vanishes(&q, &den))
    }
}

/// A chart index with a point in its affine coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartPoint {
    pub chart: usize,
    pub point: Vec<Rational>,
}

/// The values `k/2` with `|k/2| <= 2`.
pub fn grid_values() -> Vec<Rational> {
    let mut v: Vec<Rational> = (-4..=4).map(|k| rat(k, 2)).collect();
    v.sort_by_key(|x| (x.abs(), x.is_negative()));
    v
}

/// Scans the coordinate points, then `candidates`, then the grid of
/// `grid_values()` in chart 0, for a point with jet order at least 2.
/// `None` does not show that such points are absent.
pub fn find_jet2_witness(f: &Foliation, candidates: &[ChartPoint]) -> Result<Option<ChartPoint>> {
    let n = f.n();
    let mut testers: BTreeMap<usize, JetTester> = BTreeMap::new();
    let mut test = |cp: &ChartPoint| -> Result<bool> {
        if cp.chart > n {
            return Err(Error::BadChart(cp.chart));
        }
        if cp.point.len() != n {
            return Err(Error::PointDimension {
                expected: n,
                got: cp.point.len(),
            });
        }
        let tester = match testers.entry(cp.chart) {
            std::collections::btree_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::btree_map::Entry::Vacant(e) => e.insert(JetTester::new(&affine_restrict(f, cp.chart)?)?),
        };
        Ok(tester.jet_at_least_two(&cp.point))
    };
    for chart in 0..=n {
        let cp = ChartPoint {
            chart,
            point: vec![Rational::zero(); n],
        };
        if test(&cp)? {
            return Ok(Some(cp));
        }
    }
    for cp in candidates {
        if test(cp)? {
            return Ok(Some(cp.clone()));
        }
    }
    let values = grid_values();
    let mut digits = vec![0usize; n];
    loop {
        let cp = ChartPoint {
            chart: 0,
            point: digits.iter().map(|&d| values[d].clone()).collect(),
        };
        if test(&cp)? {
            return Ok(Some(cp));
        }
        let mut k = 0;
        loop {
            if k == n {
                return Ok(None);
            }
            digits[k] += 1;
            if digits[k] < values.len() {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

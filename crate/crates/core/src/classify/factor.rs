//! Bounded-degree ansatz solvers: polynomial integrating factors of 1-forms
//! and one-variable rational expressions of a function in another.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::linalg::{nullspace, Row};
use crate::algebra::{MPoly, RatFun, Rational};
use crate::forms::DForm;

/// Monomials of total degree at most `deg` in `vars`, as exponent vectors.
fn monomials(nvars: usize, deg: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..nvars {
        let mut next = Vec::new();
        for m in &out {
            let used: u32 = m.iter().sum();
            for e in 0..=(deg - used) {
                let mut m2 = m.clone();
                m2.push(e);
                next.push(m2);
            }
        }
        out = next;
    }
    out.sort_by_key(|m| m.iter().sum::<u32>());
    out
}

fn monomial(vars: &[String], e: &[u32]) -> MPoly {
    MPoly::from_terms(vars, [(e.to_vec(), crate::algebra::int(1))])
}

type Key = (Vec<String>, Vec<(String, u32)>);

/// Adds `coeff * column` for every term of the 2-form `a` to `rows`.
fn accumulate(rows: &mut BTreeMap<Key, Row>, a: &DForm, column: usize) {
    for (names, c) in a.components() {
        let p = c.even.as_polynomial().expect("polynomial coefficient");
        for (e, k) in p.terms() {
            let mono: Vec<(String, u32)> = p
                .vars()
                .iter()
                .zip(e)
                .filter(|(_, &x)| x > 0)
                .map(|(v, &x)| (v.clone(), x))
                .collect();
            let key = (names.iter().map(|s| s.to_string()).collect(), mono);
            let row = rows.entry(key).or_default();
            let entry = row.entry(column).or_insert_with(Rational::zero);
            *entry += k;
        }
    }
}

/// Clears denominators: returns `(L, L w)` with `L` a polynomial.
fn clear_denominators(w: &DForm) -> (MPoly, DForm) {
    let mut l = MPoly::one();
    for (_, c) in w.components() {
        let d = c.even.den();
        let g = crate::algebra::gcd(&l, d);
        l = l.mul(&d.div_exact(&g).expect("gcd divides"));
    }
    (l.clone(), w.scale(&RatFun::from(l)))
}

/// A rational function `f` with `d(w / f) = 0`, found as `P / L` where `L`
/// clears the denominators of `w` and `P` is a polynomial of degree at most
/// `max_deg`. The smallest degree that works is used.
pub fn integrating_factor(w: &DForm, max_deg: u32) -> Option<RatFun> {
    if w.is_zero() || w.arity() != 1 || w.ring().quad().is_some() {
        return None;
    }
    let dw = w.d().ok()?;
    if dw.is_zero() {
        return Some(RatFun::one());
    }
    let (l, wl) = clear_denominators(w);
    let dwl = wl.d().ok()?;
    let vars = wl.vars().to_vec();
    for deg in 1..=max_deg {
        let monos = monomials(vars.len(), deg);
        let mut rows: BTreeMap<Key, Row> = BTreeMap::new();
        for (col, e) in monos.iter().enumerate() {
            let m = monomial(&vars, e);
            let t = dwl.scale(&RatFun::from(m.clone()));
            let dm = DForm::function(&vars, RatFun::from(m)).d().ok()?;
            let t = t.sub(&dm.wedge(&wl).ok()?).ok()?;
            accumulate(&mut rows, &t, col);
        }
        let rows: Vec<Row> = rows.into_values().collect();
        let ns = nullspace(&rows, monos.len());
        // prefer the kernel vector with the fewest terms
        let Some(best) = ns.iter().min_by_key(|v| v.iter().filter(|c| !c.is_zero()).count()) else {
            continue;
        };
        let p = MPoly::from_terms(
            &vars,
            monos
                .iter()
                .zip(best)
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (e.clone(), c.clone())),
        );
        let (_, p) = p.primitive();
        let f = RatFun::new(p, l.clone()).ok()?;
        let closed = w.scale(&f.recip().ok()?).d().ok()?;
        if closed.is_zero() {
            return Some(f);
        }
    }
    None
}

/// Rational `psi` of one variable `x` with `lambda = psi(u)`, numerator
/// and denominator degree at most `max_deg`.
pub fn rational_in(lambda: &RatFun, u: &RatFun, x: &str, max_deg: u32) -> Option<RatFun> {
    if u.is_constant() {
        return None;
    }
    if lambda.is_constant() {
        return Some(lambda.clone());
    }
    let un = u.num();
    let ud = u.den();
    for k in 1..=max_deg {
        // unknowns: d_0..d_k then n_0..n_k
        let mut cols: Vec<MPoly> = Vec::new();
        for i in 0..=k {
            let t = un.pow(i).mul(&ud.pow(k - i));
            cols.push(lambda.num().mul(&t));
        }
        for i in 0..=k {
            let t = un.pow(i).mul(&ud.pow(k - i));
            cols.push(lambda.den().mul(&t).neg());
        }
        let mut rows: BTreeMap<Vec<(String, u32)>, Row> = BTreeMap::new();
        for (c, p) in cols.iter().enumerate() {
            for (e, coeff) in p.terms() {
                let mono: Vec<(String, u32)> = p
                    .vars()
                    .iter()
                    .zip(e)
                    .filter(|(_, &x)| x > 0)
                    .map(|(v, &x)| (v.clone(), x))
                    .collect();
                let entry = rows.entry(mono).or_default().entry(c).or_insert_with(Rational::zero);
                *entry += coeff;
            }
        }
        let rows: Vec<Row> = rows.into_values().collect();
        let n = (k + 1) as usize;
        for v in nullspace(&rows, 2 * n) {
            if v[..n].iter().all(|c| c.is_zero()) {
                continue;
            }
            let xv = [x.to_string()];
            let poly = |cs: &[Rational]| {
                MPoly::from_terms(
                    &xv,
                    cs.iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(i, c)| (vec![i as u32], c.clone())),
                )
            };
            let psi = RatFun::new(poly(&v[n..]), poly(&v[..n])).ok()?;
            let mut b = BTreeMap::new();
            b.insert(x.to_string(), u.clone());
            if psi.substitute(&b).ok()? == *lambda {
                return Some(psi);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse::{parse_form_expr, parse_ratfun};

    fn vars(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn monomial_count() {
        assert_eq!(monomials(3, 6).len(), 84);
        assert_eq!(monomials(2, 0).len(), 1);
    }

    #[test]
    fn finds_logarithmic_factor() {
        // x y z (dx/x + 2 dy/y - 3 dz/z)
        let v = vars(&["x", "y", "z"]);
        let w = parse_form_expr("y z dx + 2 x z dy - 3 x y dz", Some(&v)).unwrap();
        let f = integrating_factor(&w, 3).unwrap();
        assert!(w.scale(&f.recip().unwrap()).d().unwrap().is_zero());
    }

    #[test]
    fn closed_form_needs_no_factor() {
        let v = vars(&["x", "y"]);
        let w = parse_form_expr("y dx + x dy", Some(&v)).unwrap();
        assert_eq!(integrating_factor(&w, 2), Some(RatFun::one()));
    }

    #[test]
    fn rational_factor_with_denominators() {
        let v = vars(&["x", "y", "z"]);
        let w = parse_form_expr("1/x dy - y/x^2 dx + z dz", Some(&v)).unwrap();
        let f = integrating_factor(&w, 2).unwrap();
        assert!(w.scale(&f.recip().unwrap()).d().unwrap().is_zero());
    }

    #[test]
    fn recovers_rational_function_of_u() {
        let u = parse_ratfun("a^2 + b", None).unwrap();
        let lambda = parse_ratfun("1/(a^2 + b + 1)", None).unwrap();
        let psi = rational_in(&lambda, &u, "x", 4).unwrap();
        assert_eq!(psi, parse_ratfun("1/(x + 1)", None).unwrap());
        assert!(rational_in(&parse_ratfun("a", None).unwrap(), &u, "x", 3).is_none());
    }
}

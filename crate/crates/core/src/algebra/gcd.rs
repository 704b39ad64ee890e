//! Multivariate polynomial GCD over the rationals.
//!
//! Recursive primitive pseudo-remainder sequences: pick a main variable,
//! split off the content (a GCD in one fewer variable), and run the PRS on
//! the primitive parts. Monomial factors are stripped up front since they
//! are cheap to handle exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::poly::MPoly;
use super::Rational;

/// Greatest common divisor, normalized to a primitive integer polynomial with
/// positive leading coefficient. `gcd(a, 0) = normalize(a)`.
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mono = monomial_gcd(&ma, &mb);
    let a1 = a.div_exact(&ma).expect("monomial content divides");
    let b1 = b.div_exact(&mb).expect("monomial content divides");
    mono.mul(&gcd_core(&a1.normalized(), &b1.normalized())).normalized()
}

/// GCD of a whole list, short-circuiting on 1.
pub fn gcd_all<'a, I: IntoIterator<Item = &'a MPoly>>(items: I) -> MPoly {
    let mut acc = MPoly::zero();
    for p in items {
        acc = gcd(&acc, p);
        if acc.is_one() {
            break;
        }
    }
    acc
}

fn monomial_gcd(a: &MPoly, b: &MPoly) -> MPoly {
    let (ea, _) = a.terms().next().expect("monomial");
    let (eb, _) = b.terms().next().expect("monomial");
    let mut vars = Vec::new();
    let mut exps = Vec::new();
    for (i, v) in a.vars().iter().enumerate() {
        if let Some(j) = b.vars().iter().position(|w| w == v) {
            vars.push(v.clone());
            exps.push(ea[i].min(eb[j]));
        }
    }
    MPoly::from_terms(&vars, [(exps, super::poly::int(1))])
}

fn gcd_core(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_constant() || b.is_constant() {
        return MPoly::one();
    }
    if a == b {
        return a.normalized();
    }
    // main variable: shared, with the smallest combined degree
    let v = a
        .vars()
        .iter()
        .filter(|v| b.has_var(v))
        .min_by_key(|v| a.degree_in(v) + b.degree_in(v))
        .cloned();
    let Some(v) = v else {
        return MPoly::one();
    };
    // a variable that occurs in only one input must divide out through contents
    let ca = content_in(a, &v);
    let cb = content_in(b, &v);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let c = gcd(&ca, &cb);
    let g = match image_gcd_degree(&pa, &pb, &v) {
        Some(0) => MPoly::one(),
        Some(d) => {
            let (small, big) = if pa.degree_in(&v) <= pb.degree_in(&v) { (&pa, &pb) } else { (&pb, &pa) };
            if d == small.degree_in(&v) as usize && big.div_exact(small).is_some() {
                small.normalized()
            } else {
                heuristic(&pa.normalized(), &pb.normalized()).unwrap_or_else(|| primitive_prs(&pa, &pb, &v))
            }
        }
        None => primitive_prs(&pa, &pb, &v),
    };
    c.mul(&g).normalized()
}

/// Degree in `v` of the GCD of `a` and `b` after specializing every other
/// variable at integer points where both leading coefficients survive. This
/// bounds the true degree from above; the minimum over two points is taken.
fn image_gcd_degree(a: &MPoly, b: &MPoly, v: &str) -> Option<usize> {
    let mut others: Vec<String> = a.vars().iter().chain(b.vars()).filter(|w| *w != v).cloned().collect();
    others.sort();
    others.dedup();
    let mut best: Option<usize> = None;
    for trial in 0..6i64 {
        if best.is_some() && trial >= 4 {
            break;
        }
        let point: std::collections::BTreeMap<String, Rational> = others
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), Rational::from_integer(((i as i64 * 7 + trial * 13 + 3) % 29 - 14).into())))
            .collect();
        let image = |p: &MPoly| -> Option<Vec<Rational>> {
            p.coefficients_in(v).iter().map(|c| c.eval(&point)).collect()
        };
        let (Some(ia), Some(ib)) = (image(a), image(b)) else {
            return None;
        };
        if ia.last().is_none_or(|c| c.is_zero()) || ib.last().is_none_or(|c| c.is_zero()) {
            continue;
        }
        let d = univariate_gcd_degree(ia, ib);
        best = Some(best.map_or(d, |b| b.min(d)));
        if d == 0 {
            break;
        }
    }
    best
}

fn univariate_gcd_degree(mut a: Vec<Rational>, mut b: Vec<Rational>) -> usize {
    let trim = |p: &mut Vec<Rational>| {
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        while a.len() >= b.len() {
            let q = a[a.len() - 1].clone() / &b[b.len() - 1];
            let shift = a.len() - b.len();
            for (i, c) in b.iter().enumerate() {
                a[i + shift] -= &q * c;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// Largest bit length allowed for evaluation points in [`heuristic`].
const HEU_BITS: u64 = 400_000;

fn max_abs(p: &MPoly) -> BigInt {
    p.terms().map(|(_, c)| c.numer().abs()).max().unwrap_or_default()
}

fn integer_content(p: &MPoly) -> BigInt {
    p.terms().fold(BigInt::zero(), |g, (_, c)| g.gcd(c.numer()))
}

/// Symmetric residue of `c` modulo `m`.
fn symmetric_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if (&r << 1u32) > *m {
        r - m
    } else {
        r
    }
}

/// Reads `v` off the base-`xi` digits of the coefficients of `g`.
fn interpolate(g: &MPoly, v: &str, xi: &BigInt) -> MPoly {
    let mut vars = g.vars().to_vec();
    vars.push(v.to_string());
    let mut terms = Vec::new();
    for (e, c) in g.terms() {
        let mut c = c.numer().clone();
        let mut k = 0u32;
        while !c.is_zero() {
            let d = symmetric_mod(&c, xi);
            c = (&c - &d) / xi;
            if !d.is_zero() {
                let mut ex = e.to_vec();
                ex.push(k);
                terms.push((ex, Rational::from_integer(d)));
            }
            k += 1;
        }
    }
    MPoly::from_terms(&vars, terms)
}

/// Heuristic GCD of integer polynomials by evaluation at large integers
/// and interpolation of the integer GCD. `None` when the points get too
/// large; any returned value divides both inputs.
fn heuristic(a: &MPoly, b: &MPoly) -> Option<MPoly> {
    let ca = integer_content(a);
    let cb = integer_content(b);
    let cg = ca.gcd(&cb);
    if a.is_constant() || b.is_constant() {
        return Some(MPoly::constant(Rational::from_integer(cg)));
    }
    let a = a.scale(&Rational::from_integer(ca).recip());
    let b = b.scale(&Rational::from_integer(cb).recip());
    let v = a.vars().first().or(b.vars().first())?.clone();
    let deg = u64::from(a.degree_in(&v).max(b.degree_in(&v))) + 1;
    let mut xi = max_abs(&a).min(max_abs(&b)) * 2u32 + 29u32;
    for _ in 0..6 {
        if xi.bits() * deg > HEU_BITS {
            return None;
        }
        let at: std::collections::BTreeMap<String, MPoly> =
            [(v.clone(), MPoly::constant(Rational::from_integer(xi.clone())))].into();
        let ea = a.compose(&at);
        let eb = b.compose(&at);
        if !ea.is_zero() && !eb.is_zero() {
            let gamma = heuristic(&ea, &eb)?;
            let g = interpolate(&gamma, &v, &xi);
            if !g.is_zero() {
                let g = g.scale(&Rational::from_integer(integer_content(&g)).recip());
                if a.div_exact(&g).is_some() && b.div_exact(&g).is_some() {
                    return Some(g.scale(&Rational::from_integer(cg)));
                }
            }
        }
        xi = xi * 73794u32 / 27011u32;
    }
    None
}

/// GCD of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content_in(p: &MPoly, v: &str) -> MPoly {
    gcd_all(p.coefficients_in(v).iter().filter(|c| !c.is_zero()))
}

fn primitive_part_in(p: &MPoly, v: &str) -> MPoly {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides").normalized()
}

fn primitive_prs(a: &MPoly, b: &MPoly, v: &str) -> MPoly {
    let (mut r0, mut r1) = if a.degree_in(v) >= b.degree_in(v) {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    if r1.degree_in(v) == 0 {
        return MPoly::one();
    }
    loop {
        let r = pseudo_remainder(&r0, &r1, v);
        if r.is_zero() {
            return r1.normalized();
        }
        if r.degree_in(v) == 0 {
            return MPoly::one();
        }
        r0 = r1;
        r1 = primitive_part_in(&r, v);
    }
}

/// Pseudo-remainder of `a` by `b` with respect to `v`.
pub fn pseudo_remainder(a: &MPoly, b: &MPoly, v: &str) -> MPoly {
    let mut ac = a.coefficients_in(v);
    let bc = b.coefficients_in(v);
    let db = bc.len() - 1;
    let lcb = bc[db].clone();
    while ac.len() > db && !ac.is_empty() {
        let da = ac.len() - 1;
        let lca = ac[da].clone();
        let shift = da - db;
        let mut next = Vec::with_capacity(da + 1);
        for (i, ai) in ac.iter().enumerate() {
            let mut t = lcb.mul(ai);
            if i >= shift {
                t = t.sub(&lca.mul(&bc[i - shift]));
            }
            next.push(t);
        }
        while next.last().is_some_and(|c| c.is_zero()) {
            next.pop();
        }
        ac = next;
    }
    MPoly::from_coefficients_in(v, &ac)
}

//! Coordinate changes of the blow-up analysis recomputed with the generic
//! pull-back machinery, against closed-form coefficient lists on generic
//! symbolic data.

use folia_core::algebra::{rat, CoeffRing, QuadCoverRing, QuadElem, RatFun};
use folia_core::blowup::assemble_eta;
use folia_core::forms::{cover_pullback, lie_derivative, DForm, RationalMap, VField};
use folia_core::io::parse::{parse_form_expr, parse_poly, parse_ratfun};
use rand::{Rng, SeedableRng};

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn tau() -> Vec<String> {
    names(&["tau1", "tau2"])
}

fn with(extra: &str) -> Vec<String> {
    let mut v = tau();
    v.push(extra.to_string());
    v
}

fn r(text: &str) -> RatFun {
    parse_ratfun(text, None).unwrap()
}

/// Generic data: `theta_2..theta_5` and `F_3, F_4, F_5` in `tau`.
struct Data {
    theta: [DForm; 4],
    f: [RatFun; 3],
}

fn random_poly(rng: &mut rand::rngs::StdRng) -> String {
    let mut s = format!("{}", rng.gen_range(1..=5));
    for m in ["tau1", "tau2", "tau1^2", "tau1*tau2", "tau2^2", "tau1^2*tau2"] {
        let c: i64 = rng.gen_range(-3..=3);
        if c != 0 {
            s += &format!(" + {c}*{m}");
        }
    }
    s
}

fn data(seed: u64) -> Data {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let t = tau();
    let theta = std::array::from_fn(|_| {
        let a = random_poly(&mut rng);
        let b = random_poly(&mut rng);
        parse_form_expr(&format!("({a}) dtau1 + ({b}) dtau2"), Some(&t)).unwrap()
    });
    let f = std::array::from_fn(|_| RatFun::from(parse_poly(&random_poly(&mut rng), Some(&t)).unwrap()));
    Data { theta, f }
}

impl Data {
    fn th(&self, j: usize) -> &DForm {
        &self.theta[j - 2]
    }

    fn fj(&self, j: usize) -> &RatFun {
        &self.f[j - 3]
    }

    /// `eta` with the `F_j` listed in `zero` replaced by 0.
    fn eta(&self, zero: &[usize]) -> DForm {
        let f = std::array::from_fn(|k| {
            if zero.contains(&(k + 3)) {
                folia_core::algebra::MPoly::zero()
            } else {
                self.f[k].as_polynomial().unwrap().clone()
            }
        });
        assemble_eta(3, &self.theta, &f).unwrap()
    }
}

/// `sum_k c_k a_k` over a common variable list.
fn comb(vars: &[String], parts: &[(RatFun, &DForm)]) -> DForm {
    let mut acc = DForm::zero(vars, 1).unwrap();
    for (c, a) in parts {
        acc = acc.add(&a.scale(c)).unwrap();
    }
    acc.with_vars(vars)
}

fn dfun(vars: &[String], f: &RatFun) -> DForm {
    DForm::function(vars, f.clone()).d().unwrap()
}

fn pow(f: &RatFun, k: i32) -> RatFun {
    f.pow(k).unwrap()
}

fn c(n: i64) -> RatFun {
    RatFun::from_int(n)
}

fn map(sources: &[String], target: &str, image: RatFun) -> RationalMap {
    RationalMap::new(sources, [(target.to_string(), image)]).unwrap()
}

pub fn case2_normalization_and_inversion(seeds: &[u64]) {
    for &seed in seeds {
        let d = data(seed);
        let v = with("x");
        let f3 = d.fj(3);
        let beta = |j: usize| d.th(j + 1).scale(&f3.recip().unwrap());
        let x = RatFun::var("x");
        // eta / F3 = x b1 + x^2 b2 + x^3 b3 + x^4 b4 + dx
        let lhs = d.eta(&[4, 5]).scale(&f3.recip().unwrap());
        let (b1, b2, b3, b4) = (beta(1), beta(2), beta(3), beta(4));
        let dx = DForm::differential(&v, "x");
        let rhs = comb(&v, &[(x.clone(), &b1), (pow(&x, 2), &b2), (pow(&x, 3), &b3), (pow(&x, 4), &b4), (c(1), &dx)]);
        assert!(lhs.same_as(&rhs));

        // with b3 = b4 = 0, x = 1/w gives eta~ = -Omega / w^2, Omega = dw - b2 - w b1
        let short = comb(&v, &[(x.clone(), &b1), (pow(&x, 2), &b2), (c(1), &dx)]);
        let vw = with("w");
        let w = RatFun::var("w");
        let pulled = map(&vw, "x", w.recip().unwrap()).pullback(&short).unwrap();
        let dw = DForm::differential(&vw, "w");
        let omega = comb(&vw, &[(c(1), &dw), (c(-1), &b2), (w.neg(), &b1)]);
        assert!(pulled.same_as(&omega.scale(&pow(&w, -2).neg())));
    }
}

pub fn case3_inversion_and_projective_triple(seeds: &[u64]) {
    for &seed in seeds {
        let d = data(seed);
        let f5 = d.fj(5);
        let inv = f5.recip().unwrap();
        let x = RatFun::var("x");
        let vx = with("x");
        // eta~ = eta / (x F5), then x = 1/z and -z^3 psi^* eta~
        let eta_t = d.eta(&[3, 4]).scale(&x.mul(f5).recip().unwrap());
        let vz = with("z");
        let z = RatFun::var("z");
        let zeta = map(&vz, "x", z.recip().unwrap()).pullback(&eta_t).unwrap().scale(&pow(&z, 3).neg());
        let beta = |j: usize| d.th(5 - j).scale(&inv.neg());
        let dz = DForm::differential(&vz, "z");
        let (b0, b1, b2, b3) = (beta(0), beta(1), beta(2), beta(3));
        let expect = comb(&vz, &[(c(1), &b0), (z.clone(), &b1), (pow(&z, 2), &b2), (pow(&z, 3), &b3), (c(1), &dz)]);
        assert!(zeta.same_as(&expect));

        // theta2 = 0: eta / (x^2 F5) = b0 + x b1 + x^2 b2 + dx with b_j = theta_{j+3} / F5
        let mut zero2 = Data { theta: d.theta.clone(), f: d.f.clone() };
        zero2.theta[0] = DForm::zero(&tau(), 1).unwrap();
        let lhs = zero2.eta(&[3, 4]).scale(&pow(&x, 2).mul(f5).recip().unwrap());
        let b = |j: usize| d.th(j + 3).scale(&inv);
        let dx = DForm::differential(&vx, "x");
        let (p0, p1, p2) = (b(0), b(1), b(2));
        let expect = comb(&vx, &[(c(1), &p0), (x.clone(), &p1), (pow(&x, 2), &p2), (c(1), &dx)]);
        assert!(lhs.same_as(&expect));

        // Omega = -L_dx(eta~) = -b1 - 2 x b2 and xi = -L_dx^2(eta~) = -2 b2
        let dxf = VField::partial("x");
        let first = lie_derivative(&dxf, &lhs).unwrap();
        let second = lie_derivative(&dxf, &first).unwrap();
        assert!(first.neg().same_as(&comb(&vx, &[(c(-1), &p1), (x.scale(&rat(-2, 1)), &p2)])));
        assert!(second.neg().same_as(&p2.scale(&c(-2))));
    }
}

pub fn case5_inversion_fraction_and_cover(seeds: &[u64]) {
    for &seed in seeds {
        let d = data(seed);
        let (f3, f4) = (d.fj(3), d.fj(4));
        let vz = with("z");
        let z = RatFun::var("z");
        // x = 1/z: psi^* eta = eta_z / z^4
        let eta = d.eta(&[5]);
        let eta_z = map(&vz, "x", z.recip().unwrap()).pullback(&eta).unwrap().scale(&pow(&z, 4));
        let dz = DForm::differential(&vz, "z");
        let expect = comb(
            &vz,
            &[
                (c(1), d.th(5)),
                (z.clone(), d.th(4)),
                (pow(&z, 2), d.th(3)),
                (pow(&z, 3), d.th(2)),
                (z.mul(f4).add(&pow(&z, 2).mul(f3)).neg(), &dz),
            ],
        );
        assert!(eta_z.same_as(&expect));

        // z = (F4/F3) t / (1 - t)
        let vt = with("t");
        let t = RatFun::var("t");
        let one_t = c(1).sub(&t);
        let image = f4.div(f3).unwrap().mul(&t).div(&one_t).unwrap();
        let pulled = map(&vt, "z", image).pullback(&eta_z).unwrap();
        let a = pow(f3, 2).div(&pow(f4, 3)).unwrap();
        let b = f3.div(&pow(f4, 2)).unwrap();
        let lf4 = dfun(&vt, f4).scale(&f4.recip().unwrap());
        let lf3 = dfun(&vt, f3).scale(&f3.recip().unwrap());
        let th = |j: usize| d.th(j).with_vars(&vt);
        let (t2, t3, t4, t5) = (th(2), th(3), th(4), th(5));
        let i3 = f4.recip().unwrap();
        let i2 = f3.recip().unwrap();
        let beta0 = comb(&vt, &[(a.clone(), &t5)]);
        let beta1 = comb(&vt, &[(a.scale(&rat(-4, 1)), &t5), (b.clone(), &t4)]);
        let beta2 = comb(&vt, &[(a.scale(&rat(6, 1)), &t5), (b.scale(&rat(-3, 1)), &t4), (i3.clone(), &t3), (c(-1), &lf4), (c(1), &lf3)]);
        let beta3_with = |u: i64, v: i64| {
            comb(
                &vt,
                &[(a.scale(&rat(-4, 1)), &t5), (b.scale(&rat(3, 1)), &t4), (i3.scale(&rat(-2, 1)), &t3), (c(u), &lf4), (c(v), &lf3), (i2.clone(), &t2)],
            )
        };
        // the log-differential part of the t^3 coefficient is dF4/F4 - dF3/F3
        let beta3 = beta3_with(1, -1);
        let beta4 = comb(&vt, &[(a.clone(), &t5), (b.neg(), &t4), (i3.clone(), &t3), (i2.neg(), &t2)]);
        let dt = DForm::differential(&vt, "t");
        let eta_t = comb(
            &vt,
            &[(c(1), &beta0), (t.clone(), &beta1), (pow(&t, 2), &beta2), (pow(&t, 3), &beta3), (pow(&t, 4), &beta4), (t.neg(), &dt)],
        );
        let factor = pow(f4, 3).div(&pow(&one_t, 4).mul(&pow(f3, 2))).unwrap();
        assert!(pulled.same_as(&eta_t.scale(&factor)), "seed {seed}");
        let wrong = eta_t.add(&beta3_with(2, 1).sub(&beta3).unwrap().scale(&pow(&t, 3))).unwrap();
        assert!(!pulled.same_as(&wrong.scale(&factor)));

        // t^2 = -2 s: eta_t -> (b0 + t b1 + t^3 b3) + s (-2 b2) + s^2 (4 b4) + ds
        let ring = QuadCoverRing::new("t", r("-2*s")).unwrap();
        let lifted = cover_pullback(&eta_t, &ring, "s").unwrap();
        let vs = with("s");
        let s = RatFun::var("s");
        let ds = DForm::differential(&vs, "s");
        let even = comb(&vs, &[(c(1), &beta0), (s.scale(&rat(-2, 1)), &beta2), (pow(&s, 2).scale(&rat(4, 1)), &beta4), (c(1), &ds)]);
        // t^3 = -2 s t: the odd part is b1 - 2 s b3
        let odd = comb(&vs, &[(c(1), &beta1), (s.scale(&rat(-2, 1)), &beta3)]);
        let quad = CoeffRing::Quad(ring);
        let mut terms = Vec::new();
        for v in &vs {
            let q = QuadElem { even: even.coeff(v), odd: odd.coeff(v) };
            if !q.is_zero() {
                terms.push((vec![v.clone()], q));
            }
        }
        let expect = DForm::from_components(quad, &vs, 1, terms).unwrap();
        assert!(lifted.same_as(&expect), "seed {seed}");
    }
}

/// `G + z F5` with `z = (G / F5) t / (1 - t)` over fiber-free `b0, b1, b2`:
/// the pulled back form is `G^2 / ((1-t)^3 F5)` times
/// `b0' + t b1' + t^2 b2' + t^3 b3' + dt`.
fn check_fraction(vars: &[String], g: &RatFun, f5: &RatFun, b: [&DForm; 3]) {
    let z = RatFun::var("z");
    let mut vz = vars.to_vec();
    vz.push("z".into());
    let dz = DForm::differential(&vz, "z");
    let eta = comb(&vz, &[(c(1), b[0]), (z.clone(), b[1]), (pow(&z, 2), b[2]), (g.add(&z.mul(f5)), &dz)]);
    let mut vt = vars.to_vec();
    vt.push("t".into());
    let t = RatFun::var("t");
    let one_t = c(1).sub(&t);
    let image = g.div(f5).unwrap().mul(&t).div(&one_t).unwrap();
    let pulled = map(&vt, "z", image).pullback(&eta).unwrap();

    let k = f5.div(&pow(g, 2)).unwrap();
    let lg = dfun(&vt, g).scale(&g.recip().unwrap());
    let lf = dfun(&vt, f5).scale(&f5.recip().unwrap());
    let (b0, b1, b2) = (b[0].with_vars(&vt), b[1].with_vars(&vt), b[2].with_vars(&vt));
    let gi = g.recip().unwrap();
    let fi = f5.recip().unwrap();
    let p0 = comb(&vt, &[(k.clone(), &b0)]);
    let p1 = comb(&vt, &[(k.scale(&rat(-3, 1)), &b0), (gi.clone(), &b1), (c(1), &lg), (c(-1), &lf)]);
    let p2 = comb(&vt, &[(k.scale(&rat(3, 1)), &b0), (gi.scale(&rat(-2, 1)), &b1), (fi.clone(), &b2), (c(-1), &lg), (c(1), &lf)]);
    let dt = DForm::differential(&vt, "t");
    let factor = pow(g, 2).div(&pow(&one_t, 3).mul(f5)).unwrap();
    let listed = comb(&vt, &[(c(1), &p0), (t.clone(), &p1), (pow(&t, 2), &p2), (c(1), &dt)]);
    // the listed coefficients alone leave a t^3 remainder
    let rest = pulled.sub(&listed.scale(&factor)).unwrap();
    assert!(!rest.is_zero());
    let p3 = comb(&vt, &[(k.neg(), &b0), (gi.clone(), &b1), (fi.neg(), &b2)]);
    assert!(rest.same_as(&p3.scale(&pow(&t, 3).mul(&factor))));
}

pub fn case6_cover_and_fraction(seeds: &[u64]) {
    for &seed in seeds {
        let d = data(seed);
        let (f3, f5) = (d.fj(3), d.fj(5));
        // x^2 = z: 2x pi^* eta = B0 + z B1 + z^2 B2 + (F3 + z F5) dz with
        // B0 = 2x^2 th2 + 2x^4 th4, B1 = 2x th3, B2 = 2x th5
        let ring = QuadCoverRing::new("x", RatFun::var("z")).unwrap();
        let lifted = cover_pullback(&d.eta(&[4]), &ring, "z").unwrap();
        let two_x = QuadElem { even: RatFun::zero(), odd: c(2) };
        let lhs = lifted.scale_elem(&two_x);
        let vz = with("z");
        let z = RatFun::var("z");
        let quad = CoeffRing::Quad(ring);
        let lift = |a: &DForm, e: RatFun, o: RatFun| {
            let q = QuadElem { even: e, odd: o };
            a.with_vars(&vz).with_ring(quad.clone()).unwrap().scale_elem(&q)
        };
        // x^2 = z, x^4 = z^2; 2x z th3 and 2x z^2 th5 are odd
        let expect = lift(d.th(2), z.scale(&rat(2, 1)), RatFun::zero())
            .add(&lift(d.th(4), pow(&z, 2).scale(&rat(2, 1)), RatFun::zero()))
            .unwrap()
            .add(&lift(d.th(3), RatFun::zero(), z.scale(&rat(2, 1))))
            .unwrap()
            .add(&lift(d.th(5), RatFun::zero(), pow(&z, 2).scale(&rat(2, 1))))
            .unwrap()
            .add(&lift(&DForm::differential(&vz, "z"), f3.add(&z.mul(f5)), RatFun::zero()))
            .unwrap();
        assert!(lhs.same_as(&expect), "seed {seed}");

        // the fraction step on fiber-free data
        let t = tau();
        check_fraction(&t, f3, f5, [d.th(2), d.th(3), d.th(5)]);
    }
}

pub fn case7_fraction_with_x_dependent_g(seeds: &[u64]) {
    for &seed in seeds {
        let d = data(seed);
        let vx = with("x");
        let g = d.fj(3).add(&RatFun::var("x").mul(d.fj(4)));
        let b: Vec<DForm> = (2..=4)
            .map(|j| {
                // generic data depending on x as well
                comb(&vx, &[(RatFun::var("x"), d.th(j)), (c(1), d.th(j + 1))])
            })
            .collect();
        check_fraction(&vx, &g, d.fj(5), [&b[0], &b[1], &b[2]]);
    }
}

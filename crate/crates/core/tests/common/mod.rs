//! Foliations shared by the integration tests.
#![allow(dead_code)]

pub mod e2e;
pub mod lemmas;
pub mod structures;

use folia_core::algebra::RatFun;
use folia_core::foliation::{projective_vars, ChartPoint, Foliation};
use folia_core::forms::DForm;
use folia_core::io::parse::{parse_form_expr, parse_point, parse_ratfun};

pub fn pvars(n: usize) -> Vec<String> {
    projective_vars(n)
}

/// `sum_i l_i (prod_{j != i} f_j) df_i` on `P^n`, saturated.
pub fn log_foliation(n: usize, fs: &[&str], lambdas: &[i64]) -> Foliation {
    let z = pvars(n);
    let polys: Vec<RatFun> = fs.iter().map(|f| parse_ratfun(f, Some(&z)).unwrap()).collect();
    let mut w = DForm::zero(&z, 1).unwrap();
    for (i, fi) in polys.iter().enumerate() {
        let mut c = RatFun::from_int(lambdas[i]);
        for (j, fj) in polys.iter().enumerate() {
            if j != i {
                c = c.mul(fj);
            }
        }
        let dfi = DForm::function(&z, fi.clone()).d().unwrap();
        w = w.add(&dfi.scale(&c)).unwrap();
    }
    Foliation::saturating(w.with_vars(&z)).unwrap()
}

pub fn foliation(n: usize, text: &str) -> Foliation {
    let z = pvars(n);
    Foliation::saturating(parse_form_expr(text, Some(&z)).unwrap().with_vars(&z)).unwrap()
}

pub fn at(chart: usize, point: &str) -> ChartPoint {
    ChartPoint {
        chart,
        point: parse_point(point).unwrap(),
    }
}

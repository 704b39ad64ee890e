//! Structural-beta families and blow-up normal forms with known
//! Godbillon-Vey lengths.

use folia_core::algebra::{rat, MPoly, RatFun};
use folia_core::blowup::assemble_eta;
use folia_core::forms::{DForm, RationalMap, VField};
use folia_core::io::parse::{parse_form_expr, parse_poly};
use folia_core::transverse::{
    gvs_compute, gvs_verify, riccati_triple, structural_system_check, verify_projective, ProjectiveTriple,
    StructuralBetas, DEFAULT_CAP,
};

pub fn chart() -> Vec<String> {
    ["tau1", "tau2", "z"].iter().map(|s| s.to_string()).collect()
}

pub fn f(text: &str) -> DForm {
    parse_form_expr(text, Some(&chart())).unwrap().with_vars(&chart())
}

fn q(c: (i64, i64)) -> RatFun {
    RatFun::constant(rat(c.0, c.1))
}

/// `b0 = 0`, `b1 = dtau1/tau1`, `b2 = c tau1 dtau2`.
pub fn log_family(c: (i64, i64)) -> StructuralBetas {
    let b2 = f("tau1 dtau2").scale(&q(c));
    StructuralBetas::new([DForm::zero(&chart(), 1).unwrap(), f("1/tau1 dtau1"), b2], "z").unwrap()
}

/// `b0 = c tau2 dtau1`, `b1 = -dtau2/tau2`, `b2 = 0`.
pub fn affine_family(c: (i64, i64)) -> StructuralBetas {
    let b0 = f("tau2 dtau1").scale(&q(c));
    StructuralBetas::new([b0, f("-1/tau2 dtau2"), DForm::zero(&chart(), 1).unwrap()], "z").unwrap()
}

/// Replaces one form of the triple by itself plus `delta`.
pub fn mutated(t: &ProjectiveTriple, which: usize, delta: &DForm) -> ProjectiveTriple {
    let mut m = t.clone();
    let slot = match which {
        0 => &mut m.omega0,
        1 => &mut m.omega1,
        _ => &mut m.omega2,
    };
    *slot = slot.add(delta).unwrap();
    m
}

pub fn deltas() -> Vec<DForm> {
    vec![f("dtau1"), f("tau1 dtau1"), f("z dtau2"), f("tau1*z^2 dtau1 - dtau2")]
}

/// The triple verifies and every single-form mutation is rejected.
pub fn check_family(b: &StructuralBetas) -> Result<(), String> {
    structural_system_check(b).map_err(|e| e.to_string())?;
    let t = riccati_triple(b).map_err(|e| e.to_string())?;
    verify_projective(&t).map_err(|e| e.to_string())?;
    for which in 0..3 {
        for delta in deltas() {
            if verify_projective(&mutated(&t, which, &delta)).is_ok() {
                return Err(format!("omega{which} + {delta} accepted"));
            }
        }
    }
    Ok(())
}

fn thetas(coeffs: [&str; 4]) -> [DForm; 4] {
    let tau = vec!["tau1".to_string(), "tau2".to_string()];
    coeffs.map(|c| parse_form_expr(&format!("({c}) dtau1"), Some(&tau)).unwrap().with_vars(&tau))
}

/// Case-2 shape `eta / F3 = dx + sum_j x^j theta_{j+1} / F3` with
/// `theta_{j+1} = c_j(tau1) dtau1`.
pub fn case2_shape(coeffs: [&str; 4], f3: &str) -> DForm {
    let tau = vec!["tau1".to_string(), "tau2".to_string()];
    let f3p = parse_poly(f3, Some(&tau)).unwrap();
    let eta = assemble_eta(3, &thetas(coeffs), &[f3p.clone(), MPoly::zero(), MPoly::zero()]).unwrap();
    eta.scale(&RatFun::from(f3p).recip().unwrap())
}

/// Case-3 shape: `-z^3 psi^*(eta / (x F5))` with `x = 1/z`; the `z^k`
/// coefficient is `-theta_{5-k} / F5`.
pub fn case3_shape(coeffs: [&str; 4], f5: &str) -> DForm {
    let tau = vec!["tau1".to_string(), "tau2".to_string()];
    let f5p = parse_poly(f5, Some(&tau)).unwrap();
    let eta = assemble_eta(3, &thetas(coeffs), &[MPoly::zero(), MPoly::zero(), f5p.clone()]).unwrap();
    let x = RatFun::var("x");
    let scaled = eta.scale(&x.mul(&RatFun::from(f5p)).recip().unwrap());
    let z = RatFun::var("z");
    let psi = RationalMap::new(&chart(), [("x".to_string(), z.recip().unwrap())]).unwrap();
    psi.pullback(&scaled).unwrap().scale(&z.mul(&z).mul(&z).neg())
}

pub const CASE2_ROWS: [([&str; 4], usize); 5] = [
    (["0", "0", "0", "0"], 0),
    (["tau1", "0", "0", "0"], 1),
    (["1", "tau1^2", "0", "0"], 2),
    (["0", "3", "tau1", "0"], 3),
    (["tau1", "0", "2", "tau1 + 1"], 4),
];

pub const CASE3_ROWS: [([&str; 4], usize); 5] = [
    (["0", "0", "0", "tau1"], 0),
    (["0", "0", "1", "tau1"], 1),
    (["0", "tau1", "0", "1"], 2),
    (["5", "0", "0", "0"], 3),
    (["tau1", "1", "0", "tau1^2"], 3),
];

/// Length of the verified finite sequence along `d/dv`.
pub fn length_along(w: &DForm, v: &str) -> Result<usize, String> {
    let s = gvs_compute(w, &VField::partial(v), DEFAULT_CAP).map_err(|e| e.to_string())?;
    if s.capped {
        return Err(format!("{w}: sequence capped"));
    }
    gvs_verify(&s).map_err(|e| format!("{w}: {e}"))?;
    Ok(s.length())
}

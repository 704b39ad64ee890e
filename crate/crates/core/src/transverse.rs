//! Godbillon-Vey sequences and transversely affine / projective structures.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{QuadElem, RatFun};
use crate::error::{Error, Result};
use crate::forms::{interior_product, lie_derivative, DForm, VField};

pub const DEFAULT_CAP: usize = 8;

/// A failed identity: its name and, when available, the nonzero difference.
#[derive(Clone, Debug, PartialEq)]
pub struct Failure {
    pub identity: String,
    pub witness: Option<DForm>,
}

impl Failure {
    pub fn new(identity: impl Into<String>, witness: Option<DForm>) -> Failure {
        Failure {
            identity: identity.into(),
            witness,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            Some(w) => write!(f, "{} fails: {}", self.identity, w.render()),
            None => write!(f, "{} fails", self.identity),
        }
    }
}

pub type Check = std::result::Result<(), Failure>;

/// Checks `lhs = rhs`, naming the identity on failure.
pub fn check_equal(identity: &str, lhs: &DForm, rhs: &DForm) -> Check {
    match lhs.sub(rhs) {
        Ok(d) if d.is_zero() => Ok(()),
        Ok(d) => Err(Failure::new(identity, Some(d))),
        Err(_) => Err(Failure::new(identity, None)),
    }
}

fn check_zero(identity: &str, a: &DForm) -> Check {
    if a.is_zero() {
        Ok(())
    } else {
        Err(Failure::new(identity, Some(a.clone())))
    }
}

/// `omega_0..omega_N` with `omega_{k+1} = L_X omega_k` and `i_X omega_0 = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GVSeq {
    pub forms: Vec<DForm>,
    pub field: VField,
    /// True when the cap was reached with a nonzero last form.
    pub capped: bool,
}

impl GVSeq {
    /// Largest index of a nonzero form.
    pub fn length(&self) -> usize {
        self.forms.len() - 1
    }

    pub fn is_finite(&self) -> bool {
        !self.capped
    }
}

/// Iterates `L_X` on `omega / i_X(omega)` until a zero form or `cap` steps.
pub fn gvs_compute(omega: &DForm, x: &VField, cap: usize) -> Result<GVSeq> {
    let c = interior_product(x, omega).value();
    if c.is_zero() {
        return Err(Error::NotTransverse);
    }
    let mut cur = if c == QuadElem::one() {
        omega.clone()
    } else {
        omega.div_elem(&c)?
    };
    let mut forms = vec![cur.clone()];
    for _ in 0..cap {
        let next = lie_derivative(x, &cur)?;
        if next.is_zero() {
            return Ok(GVSeq {
                forms,
                field: x.clone(),
                capped: false,
            });
        }
        forms.push(next.clone());
        cur = next;
    }
    Ok(GVSeq {
        forms,
        field: x.clone(),
        capped: true,
    })
}

fn fresh_name(base: &str, taken: &[String]) -> String {
    let mut name = base.to_string();
    let mut k = 0;
    while taken.contains(&name) {
        k += 1;
        name = format!("{base}{k}");
    }
    name
}

/// `Omega = dz + sum_k z^k / k! omega_k` in a fresh variable `z`.
pub fn extended_form(s: &GVSeq) -> Result<DForm> {
    let mut taken: Vec<String> = Vec::new();
    for f in &s.forms {
        taken.extend(f.vars().iter().cloned());
    }
    let z = fresh_name("zeta", &taken);
    let mut omega = DForm::differential(s.forms[0].vars(), &z);
    let mut coeff = RatFun::one();
    for (k, f) in s.forms.iter().enumerate() {
        if k > 0 {
            coeff = coeff
                .mul(&RatFun::var(&z))
                .scale(&crate::algebra::rat(1, k as i64));
        }
        omega = omega.add(&f.scale(&coeff))?;
    }
    Ok(omega)
}

/// `Omega ^ dOmega = 0` for the extended form of a finite sequence.
pub fn gvs_verify(s: &GVSeq) -> Check {
    if s.capped {
        return Err(Failure::new("finite sequence", None));
    }
    let fail = |_| Failure::new("Omega ^ dOmega = 0", None);
    let omega = extended_form(s).map_err(fail)?;
    let dw = omega.d().map_err(fail)?;
    let t = omega.wedge(&dw).map_err(fail)?;
    check_zero("Omega ^ dOmega = 0", &t)
}

/// `d omega0 = omega0 ^ omega1`, `d omega1 = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineWitness {
    pub omega0: DForm,
    pub omega1: DForm,
}

pub fn verify_affine(w: &AffineWitness) -> Check {
    let e = |_| Failure::new("arity", None);
    check_equal(
        "d omega0 = omega0 ^ omega1",
        &w.omega0.d().map_err(e)?,
        &w.omega0.wedge(&w.omega1).map_err(e)?,
    )?;
    check_zero("d omega1 = 0", &w.omega1.d().map_err(e)?)
}

/// `d omega0 = omega0 ^ omega1`, `d omega1 = omega0 ^ omega2`,
/// `d omega2 = omega1 ^ omega2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectiveTriple {
    pub omega0: DForm,
    pub omega1: DForm,
    pub omega2: DForm,
}

impl ProjectiveTriple {
    pub fn is_pure(&self) -> bool {
        !self.omega2.is_zero()
    }
}

pub fn verify_projective(t: &ProjectiveTriple) -> Check {
    let e = |_| Failure::new("arity", None);
    check_equal(
        "d omega0 = omega0 ^ omega1",
        &t.omega0.d().map_err(e)?,
        &t.omega0.wedge(&t.omega1).map_err(e)?,
    )?;
    check_equal(
        "d omega1 = omega0 ^ omega2",
        &t.omega1.d().map_err(e)?,
        &t.omega0.wedge(&t.omega2).map_err(e)?,
    )?;
    check_equal(
        "d omega2 = omega1 ^ omega2",
        &t.omega2.d().map_err(e)?,
        &t.omega1.wedge(&t.omega2).map_err(e)?,
    )
}

/// Fiber-free forms `beta_0, beta_1, beta_2` of
/// `dz + beta_0 + z beta_1 + z^2 beta_2` for the fiber coordinate `z`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructuralBetas {
    pub beta: [DForm; 3],
    pub fiber: String,
}

impl StructuralBetas {
    pub fn new(beta: [DForm; 3], fiber: &str) -> Result<StructuralBetas> {
        for b in &beta {
            if b.has_var(fiber) {
                return Err(Error::StructuralSystemViolated(format!(
                    "beta depends on the fiber variable {fiber}"
                )));
            }
        }
        Ok(StructuralBetas {
            beta,
            fiber: fiber.to_string(),
        })
    }
}

/// `d b0 = b0 ^ b1`, `d b1 = 2 b0 ^ b2`, `d b2 = b1 ^ b2`.
pub fn structural_system_check(b: &StructuralBetas) -> Check {
    let e = |_| Failure::new("arity", None);
    let [b0, b1, b2] = &b.beta;
    check_equal("d beta0 = beta0 ^ beta1", &b0.d().map_err(e)?, &b0.wedge(b1).map_err(e)?)?;
    check_equal(
        "d beta1 = 2 beta0 ^ beta2",
        &b1.d().map_err(e)?,
        &b0.wedge(b2).map_err(e)?.scale(&RatFun::from_int(2)),
    )?;
    check_equal("d beta2 = beta1 ^ beta2", &b2.d().map_err(e)?, &b1.wedge(b2).map_err(e)?)
}

/// `(dz + b0 + z b1 + z^2 b2, b1 + 2 z b2, 2 b2)`.
pub fn riccati_triple(b: &StructuralBetas) -> Result<ProjectiveTriple> {
    structural_system_check(b).map_err(|f| Error::StructuralSystemViolated(f.to_string()))?;
    let [b0, b1, b2] = &b.beta;
    let z = RatFun::var(&b.fiber);
    let dz = DForm::differential(b0.vars(), &b.fiber);
    let omega0 = dz
        .add(b0)?
        .add(&b1.scale(&z))?
        .add(&b2.scale(&z.mul(&z)))?;
    let omega1 = b1.add(&b2.scale(&z.scale(&crate::algebra::int(2))))?;
    let omega2 = b2.scale(&RatFun::from_int(2));
    Ok(ProjectiveTriple {
        omega0,
        omega1,
        omega2,
    })
}

/// The function `g` with `nu = g mu`, if one exists.
pub fn form_divide(nu: &DForm, mu: &DForm) -> Result<Option<QuadElem>> {
    if mu.is_zero() {
        return Err(Error::ZeroForm);
    }
    if nu.is_zero() {
        return Ok(Some(QuadElem::zero()));
    }
    if nu.arity() != mu.arity() {
        return Ok(None);
    }
    let ring = nu.ring().join(mu.ring())?;
    let (names, c) = mu.components().next().expect("nonzero");
    let g = ring.div(&nu.component(&names), c)?;
    let diff = nu.sub(&mu.clone().with_ring(ring)?.scale_elem(&g))?;
    Ok(if diff.is_zero() { Some(g) } else { None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse::parse_form_expr;

    fn vars(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn f(text: &str) -> DForm {
        parse_form_expr(text, Some(&vars(&["tau1", "tau2", "x"]))).unwrap()
    }

    fn betas(b0: &str, b1: &str, b2: &str) -> StructuralBetas {
        StructuralBetas::new([f(b0), f(b1), f(b2)], "x").unwrap()
    }

    #[test]
    fn gvs_examples() {
        let s = gvs_compute(&f("dx"), &VField::partial("x"), DEFAULT_CAP).unwrap();
        assert_eq!(s.length(), 0);
        assert!(gvs_verify(&s).is_ok());
        let w = f("dx + x/tau1 dtau1 + x^2 tau1 dtau2");
        let s = gvs_compute(&w, &VField::partial("x"), DEFAULT_CAP).unwrap();
        assert_eq!(s.length(), 2);
        assert_eq!(s.forms[1], f("1/tau1 dtau1 + 2 x tau1 dtau2"));
        assert_eq!(s.forms[2], f("2 tau1 dtau2"));
        assert!(gvs_verify(&s).is_ok());
        let w = f("dx + x dtau1 + x^4 dtau2");
        let s = gvs_compute(&w, &VField::partial("x"), DEFAULT_CAP).unwrap();
        assert_eq!(s.length(), 4);
    }

    #[test]
    fn gvs_normalizes_and_caps() {
        let w = f("2 dx + 2 x dtau1");
        let s = gvs_compute(&w, &VField::partial("x"), DEFAULT_CAP).unwrap();
        assert_eq!(s.forms[0], f("dx + x dtau1"));
        assert_eq!(
            gvs_compute(&f("dtau1"), &VField::partial("x"), 3).unwrap_err(),
            Error::NotTransverse
        );
        let w = f("dx + 1/(1 - x) dtau1");
        let s = gvs_compute(&w, &VField::partial("x"), 5).unwrap();
        assert!(s.capped);
        assert_eq!(s.length(), 5);
    }

    #[test]
    fn gvs_mutation_rejected() {
        let w = f("dx + x/tau1 dtau1 + x^2 tau1 dtau2");
        let mut s = gvs_compute(&w, &VField::partial("x"), DEFAULT_CAP).unwrap();
        s.forms[2] = s.forms[2].add(&f("dtau1")).unwrap();
        let err = gvs_verify(&s).unwrap_err();
        assert!(err.witness.is_some_and(|w| !w.is_zero()));
    }

    #[test]
    fn affine_examples() {
        let xy = vars(&["x", "y"]);
        let g = |t: &str| parse_form_expr(t, Some(&xy)).unwrap();
        assert!(verify_affine(&AffineWitness { omega0: g("y dx"), omega1: g("-1/y dy") }).is_ok());
        assert!(verify_affine(&AffineWitness { omega0: g("dx + dy"), omega1: g("0 dx") }).is_ok());
        let e = verify_affine(&AffineWitness { omega0: g("y dx"), omega1: g("0 dx") }).unwrap_err();
        assert_eq!(e.witness.unwrap(), g("dy^dx"));
    }

    #[test]
    fn projective_examples() {
        let t = ProjectiveTriple {
            omega0: f("dx + x/tau1 dtau1 + x^2 tau1 dtau2"),
            omega1: f("1/tau1 dtau1 + 2 x tau1 dtau2"),
            omega2: f("2 tau1 dtau2"),
        };
        assert!(verify_projective(&t).is_ok());
        assert!(t.is_pure());
        let swapped = ProjectiveTriple {
            omega1: t.omega2.clone(),
            omega2: t.omega1.clone(),
            ..t.clone()
        };
        assert!(verify_projective(&swapped).is_err());
        let closed = ProjectiveTriple {
            omega0: f("dx + dtau1"),
            omega1: f("0 dx"),
            omega2: f("0 dx"),
        };
        assert!(verify_projective(&closed).is_ok());
        assert!(!closed.is_pure());
    }

    #[test]
    fn structural_examples() {
        assert!(structural_system_check(&betas("0 dx", "1/tau1 dtau1", "tau1 dtau2")).is_ok());
        assert!(structural_system_check(&betas("tau2 dtau1", "-1/tau2 dtau2", "0 dx")).is_ok());
        assert!(structural_system_check(&betas("tau2 dtau1", "0 dx", "0 dx")).is_err());
        assert!(StructuralBetas::new([f("x dtau1"), f("0 dx"), f("0 dx")], "x").is_err());
    }

    #[test]
    fn riccati_examples() {
        let t = riccati_triple(&betas("0 dx", "1/tau1 dtau1", "tau1 dtau2")).unwrap();
        assert_eq!(t.omega0, f("dx + x/tau1 dtau1 + x^2 tau1 dtau2"));
        assert_eq!(t.omega1, f("1/tau1 dtau1 + 2 x tau1 dtau2"));
        assert_eq!(t.omega2, f("2 tau1 dtau2"));
        let a = riccati_triple(&betas("tau2 dtau1 + tau1 dtau2", "0 dx", "0 dx")).unwrap();
        assert!(!a.is_pure());
        assert!(matches!(
            riccati_triple(&betas("0 dx", "dtau1", "tau2 dtau2")),
            Err(Error::StructuralSystemViolated(_))
        ));
    }

    #[test]
    fn division_examples() {
        let g = form_divide(&f("2 tau1 dtau1"), &f("dtau1")).unwrap().unwrap();
        assert_eq!(g.even, RatFun::var("tau1").scale(&crate::algebra::int(2)));
        assert_eq!(form_divide(&f("tau2 dtau1 + tau1 dtau2"), &f("dtau1")).unwrap(), None);
        let mu = f("tau1 dtau2 + tau2 dtau1");
        let nu = mu.scale(&RatFun::var("tau2"));
        assert_eq!(form_divide(&nu, &mu).unwrap().unwrap().even, RatFun::var("tau2"));
        assert_eq!(form_divide(&nu, &f("0 dx")).unwrap_err(), Error::ZeroForm);
    }
}

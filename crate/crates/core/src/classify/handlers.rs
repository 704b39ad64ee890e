//! One handler per vanishing pattern of `(F3, F4, F5)`. Each works on the
//! strict transform `eta` in the chart `(tau, x)` and records the coordinate
//! changes it applies relative to `eta`.

use serde::{Deserialize, Serialize};

use super::chain::{at_unit_x, padded, Chain};
use super::factor::{integrating_factor, rational_in};
use super::{Outcome, RiccatiData, Step};
use crate::algebra::{QuadElem, RatFun};
use crate::blowup::{case_tag, AffineExpansion, BlowupChartData, X};
use crate::error::{Error, Result};
use crate::foliation::saturate;
use crate::forms::{DForm, RationalMap, VField};
use crate::transverse::{
    form_divide, gvs_compute, riccati_triple, structural_system_check, AffineWitness,
    ProjectiveTriple, StructuralBetas, DEFAULT_CAP,
};

/// Largest total degree tried for a polynomial integrating factor.
pub const FACTOR_DEGREE: u32 = 6;
/// Largest degree of numerator and denominator of `psi1`.
pub const PSI_DEGREE: u32 = 6;

/// Optional inputs for case 4.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Hints {
    /// Integrating factor `f` of `alpha_2`, in `a1..an` or in `tau`.
    pub factor: Option<RatFun>,
}

/// Case 4 data: `d(theta_2 / factor) = 0`, `beta1 = g beta0`,
/// `beta2 = h beta0 - dg/2`, `u = h - g^2/4` with `du ^ beta0 = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Case4Data {
    pub factor: RatFun,
    pub beta0: DForm,
    pub g: RatFun,
    pub h: RatFun,
    pub u: RatFun,
    pub psi1: Option<RatFun>,
    pub psi2: Option<RatFun>,
}

fn expect_case(b: &BlowupChartData, cases: &[u8]) -> Result<()> {
    let tag = case_tag(b);
    if cases.contains(&tag.case) {
        Ok(())
    } else {
        let expected: Vec<String> = cases.iter().map(|c| format!("case {c}")).collect();
        Err(Error::CaseMismatch {
            expected: expected.join(" or "),
            got: tag.to_string(),
        })
    }
}

fn derived(what: &str) -> Error {
    Error::DerivedRelationFailed(what.to_string())
}

fn poly(p: &crate::algebra::MPoly) -> RatFun {
    RatFun::from(p.clone())
}

/// Checks the case-1 pattern and returns the saturated `alpha_5`.
pub fn handle_case1(b: &BlowupChartData, e: &AffineExpansion) -> Result<DForm> {
    expect_case(b, &[1])?;
    for j in 2..=4 {
        if !e.piece(j).is_zero() {
            return Err(Error::InconsistentCase1(format!(
                "alpha_{j} = {} survives while i_R(alpha_j) = 0",
                e.piece(j)
            )));
        }
    }
    let a5 = e.piece(5);
    if a5.is_zero() {
        return Err(Error::InconsistentCase1("alpha_5 vanishes".into()));
    }
    saturate(a5)
}

fn finite_gvs(form: &DForm, fiber: &str, steps: Vec<Step>) -> Result<Outcome> {
    let gvs = gvs_compute(form, &VField::partial(fiber), DEFAULT_CAP)?;
    Ok(Outcome::FiniteGvs {
        at: None,
        case: None,
        gvs,
        provenance: steps,
    })
}

fn affine(omega0: DForm, omega1: DForm, steps: Vec<Step>) -> Outcome {
    Outcome::Affine {
        at: None,
        case: None,
        witness: AffineWitness { omega0, omega1 },
        provenance: steps,
    }
}

/// `dw - b2 - w b1` after `fiber = 1/w`, witnessed by `(Omega, -b1)`;
/// requires `d b1 = 0` and `d b2 = b1 ^ b2`.
fn flip_affine(mut chain: Chain, b1: &DForm, b2: &DForm) -> Result<Outcome> {
    if !b1.d()?.is_zero() {
        return Err(derived("d beta1 = 0"));
    }
    if !b2.d()?.same_as(&b1.wedge(b2)?) {
        return Err(derived("d beta2 = beta1 ^ beta2"));
    }
    chain.substitute("w", RatFun::var("w").recip()?)?;
    chain.normalize(&RatFun::one())?;
    Ok(affine(chain.form, b1.neg(), chain.steps))
}

/// Triple from fiber-free `b0, b1, b2`; affine when `b2 = 0`.
fn structural_outcome(
    betas: [DForm; 3],
    fiber: &str,
    steps: Vec<Step>,
    cover: Option<String>,
) -> Result<Outcome> {
    let sb = StructuralBetas::new(betas, fiber).map_err(|e| derived(&e.to_string()))?;
    structural_system_check(&sb).map_err(|f| derived(&f.to_string()))?;
    let t = riccati_triple(&sb)?;
    if !t.is_pure() {
        return Ok(affine(t.omega0, t.omega1, steps));
    }
    let lemma_signs = ProjectiveTriple {
        omega0: t.omega0.clone(),
        omega1: t.omega1.neg(),
        omega2: t.omega2.neg(),
    };
    Ok(Outcome::PureProjective {
        at: None,
        case: None,
        triple: t,
        lemma_signs,
        cover,
        provenance: steps,
    })
}

fn base_vars(b: &BlowupChartData) -> Vec<String> {
    b.tau()
}

/// `F3 != 0 = F4 = F5`: `beta_j = theta_{j+1} / F3`.
pub fn handle_case2(b: &BlowupChartData) -> Result<Outcome> {
    expect_case(b, &[2])?;
    let f3 = poly(b.f(3));
    let beta: Vec<DForm> = (1..=4).map(|j| b.theta(j + 1).div_elem(&QuadElem::base(f3.clone()))).collect::<Result<_>>()?;
    let mut chain = Chain::new(&b.eta, &base_vars(b), X);
    chain.normalize(&RatFun::one())?;
    if !beta[2].is_zero() || !beta[3].is_zero() {
        return finite_gvs(&chain.form, X, Vec::new());
    }
    flip_affine(chain, &beta[0], &beta[1])
}

/// `F5 != 0 = F3 = F4`.
pub fn handle_case3(b: &BlowupChartData) -> Result<Outcome> {
    expect_case(b, &[3])?;
    let f5 = QuadElem::base(poly(b.f(5)));
    let mut chain = Chain::new(&b.eta, &base_vars(b), X);
    if !b.theta(2).is_zero() {
        chain.substitute("z", RatFun::var("z").recip()?)?;
        chain.normalize(&RatFun::one())?;
        return finite_gvs(&chain.form, "z", chain.steps);
    }
    let beta: Vec<DForm> = (3..=5).map(|j| b.theta(j).div_elem(&f5)).collect::<Result<_>>()?;
    let beta: [DForm; 3] = beta.try_into().expect("three betas");
    structural_outcome(beta, X, Vec::new(), None)
}

/// `F3 = 0 != F4`.
pub fn handle_case4(b: &BlowupChartData, e: &AffineExpansion, hints: &Hints) -> Result<Outcome> {
    expect_case(b, &[4])?;
    let tau = base_vars(b);
    let f4 = poly(b.f(4));
    let f5 = poly(b.f(5));
    let sub1 = f5.is_zero();
    let mut chain = Chain::new(&b.eta, &tau, X);
    if !sub1 {
        let z = RatFun::var("z");
        let image = f4.div(&f5)?.mul(&z).div(&RatFun::one().sub(&z))?;
        chain.substitute("z", image)?;
    }
    chain.normalize(&RatFun::one())?;
    let like = b.theta(2).with_vars(chain.form.vars());
    let betas = chain
        .betas()
        .and_then(|bs| padded(bs, &like, 4))
        .ok_or_else(|| derived("normal form dz + b0 + z b1 + z^2 b2 + z^3 b3"))?;
    if !betas[3].is_zero() {
        let fiber = chain.fiber.clone();
        return finite_gvs(&chain.form, &fiber, chain.steps);
    }
    if b.theta(2).is_zero() {
        return flip_affine(chain, &betas[1], &betas[2]);
    }
    let theta2 = b.theta(2);
    let mut factor = None;
    if theta2.d()?.is_zero() {
        factor = Some(RatFun::one());
    }
    if factor.is_none() {
        if let Some(h) = &hints.factor {
            let fh = at_unit_x(h, &e.vars(), &tau)?;
            if !fh.is_zero() && theta2.scale(&fh.recip()?).d()?.is_zero() {
                factor = Some(fh);
            }
        }
    }
    if factor.is_none() {
        factor = integrating_factor(theta2, FACTOR_DEGREE);
    }
    let Some(fhat) = factor else {
        return Ok(needs_data(chain, &betas[0], "integrating factor f with d(theta2 / f) = 0"));
    };
    // fiber = F v makes beta0 / F closed
    let scale = if sub1 {
        fhat.div(&f4)?
    } else {
        f5.mul(&fhat).div(&f4.mul(&f4))?
    };
    let next = if sub1 { "z" } else { "v" };
    chain.substitute(next, scale.mul(&RatFun::var(next)))?;
    chain.substitute("w", RatFun::var("w").recip()?)?;
    chain.normalize(&RatFun::one())?;
    let like = theta2.with_vars(chain.form.vars());
    let pieces = chain
        .betas()
        .and_then(|bs| padded(bs, &like, 3))
        .ok_or_else(|| derived("normal form dw - b2 - w b1 - w^2 b0"))?;
    let [tb2, tb1, tb0] = [pieces[0].neg(), pieces[1].neg(), pieces[2].neg()];
    if !tb0.d()?.is_zero() {
        return Err(derived("d beta0~ = 0"));
    }
    let quot = |nu: &DForm, mu: &DForm, what: &str| -> Result<RatFun> {
        let q = form_divide(nu, mu)?.ok_or_else(|| derived(what))?;
        if !q.odd.is_zero() {
            return Err(derived(what));
        }
        Ok(q.even)
    };
    let g = quot(&tb1, &tb0, "beta1~ = g beta0~")?;
    let dg = DForm::function(tb0.vars(), g.clone()).d()?;
    let h = quot(&tb2.add(&dg.scale(&RatFun::constant(crate::algebra::rat(1, 2))))?, &tb0, "beta2~ = h beta0~ - dg/2")?;
    let u = h.sub(&g.mul(&g).scale(&crate::algebra::rat(1, 4)));
    let mut data = Case4Data {
        factor: fhat,
        beta0: tb0.clone(),
        g: g.clone(),
        h,
        u: u.clone(),
        psi1: None,
        psi2: None,
    };
    let y = RatFun::var("w").add(&g.scale(&crate::algebra::rat(1, 2)));
    if u.is_constant() {
        let p = y.mul(&y).add(&u);
        let dp = DForm::function(chain.form.vars(), p.clone()).d()?;
        let omega1 = dp.scale(&p.recip()?).neg();
        return Ok(affine(chain.form, omega1, chain.steps));
    }
    let du = DForm::function(tb0.vars(), u.clone()).d()?;
    let Some(lambda) = form_divide(&tb0, &du)?.filter(|q| q.odd.is_zero()).map(|q| q.even) else {
        return Err(derived("du ^ beta0~ = 0"));
    };
    let Some(psi1) = rational_in(&lambda, &u, "x", PSI_DEGREE) else {
        return Ok(needs_data(
            chain,
            &tb0,
            "psi1 with beta0~ = psi1(u) du as a rational function of u",
        ));
    };
    let mut sources = tau.clone();
    sources.push("w".into());
    let phi = RationalMap::new(&sources, [("x".to_string(), u), ("y".to_string(), y)])?;
    let theta = riccati_form(&psi1, &RatFun::var("x"))?;
    data.psi1 = Some(psi1.clone());
    data.psi2 = Some(RatFun::var("x"));
    Ok(Outcome::RiccatiPullback {
        at: None,
        case: None,
        data: Box::new(RiccatiData {
            base: chain.form,
            phi,
            psi1,
            psi2: RatFun::var("x"),
            theta,
            case4: data,
        }),
        provenance: chain.steps,
    })
}

/// `dy - (y^2 + psi2(x)) psi1(x) dx` on `(x, y)`.
pub fn riccati_form(psi1: &RatFun, psi2: &RatFun) -> Result<DForm> {
    let vars = vec!["x".to_string(), "y".to_string()];
    let y = RatFun::var("y");
    let c = y.mul(&y).add(psi2).mul(psi1).neg();
    Ok(DForm::one_form(&vars, [("y", RatFun::one()), ("x", c)]).with_vars(&vars))
}

fn needs_data(chain: Chain, beta0: &DForm, missing: &str) -> Outcome {
    Outcome::Case4NeedsData {
        at: None,
        case: None,
        form: chain.form,
        beta0: beta0.clone(),
        missing: missing.to_string(),
        provenance: chain.steps,
    }
}

/// Cases 5, 6, 7 through the cover chains. Fails with
/// `DerivedRelationFailed` when the lifted coefficients still involve the
/// cover generator or the fiber.
pub fn handle_case567(b: &BlowupChartData) -> Result<Outcome> {
    expect_case(b, &[5, 6, 7])?;
    let tag = case_tag(b);
    let tau = base_vars(b);
    let [f3, f4, f5] = [poly(b.f(3)), poly(b.f(4)), poly(b.f(5))];
    let mut chain = Chain::new(&b.eta, &tau, X);
    let t = RatFun::var("t");
    let frac = |c: RatFun| -> Result<RatFun> { c.mul(&t).div(&RatFun::one().sub(&t)) };
    let fiber = match tag.case {
        5 => {
            chain.substitute("z", RatFun::var("z").recip()?)?;
            chain.substitute("t", frac(f4.div(&f3)?)?)?;
            chain.normalize(&t.neg())?;
            chain.cover(RatFun::var("s").scale(&crate::algebra::int(-2)), "s")?;
            "s"
        }
        6 => {
            chain.cover(RatFun::var("z"), "z")?;
            chain.substitute("t", frac(f3.div(&f5)?)?)?;
            "t"
        }
        _ => {
            chain.cover(RatFun::var("z"), "z")?;
            if !chain.lead().odd.is_zero() {
                return Err(derived("dz coefficient F3 + x F4 + z F5 involves the cover generator x"));
            }
            "t"
        }
    };
    chain.normalize(&RatFun::one())?;
    let like = b.theta(2).with_vars(&tau);
    let betas = chain
        .betas()
        .and_then(|bs| padded(bs, &like, 3))
        .ok_or_else(|| derived("lifted coefficients free of the cover generator"))?;
    let cover = chain.steps.iter().find_map(|s| match s {
        Step::Cover { .. } => Some(s.describe()),
        _ => None,
    });
    let betas: [DForm; 3] = betas.try_into().expect("three betas");
    structural_outcome(betas, fiber, chain.steps, cover)
}

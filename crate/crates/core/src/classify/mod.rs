//! Case dispatch after one blow-up at a singular point of jet order at
//! least two, and the certificates it produces.

mod chain;
pub mod factor;
mod handlers;
mod verify;

use serde::{Deserialize, Serialize};

use crate::algebra::{QuadCoverRing, RatFun, Rational};
use crate::blowup::CaseTag;
use crate::error::{Error, Result};
use crate::foliation::{affine_vars, ChartPoint, Foliation};
use crate::forms::{cover_pullback, DForm, RationalMap};
use crate::transverse::{AffineWitness, GVSeq, ProjectiveTriple};

pub use handlers::{
    handle_case1, handle_case2, handle_case3, handle_case4, handle_case567, Case4Data, Hints,
};
pub use verify::{verify_body, verify_certificate, Report};

/// One coordinate change applied to the defining form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Step {
    Pullback { map: RationalMap },
    /// Double cover `generator^2 = relation`, the relation written in the
    /// new coordinate `vertical`.
    Cover {
        generator: String,
        relation: RatFun,
        vertical: String,
    },
}

impl Step {
    pub fn pullback(map: RationalMap) -> Step {
        Step::Pullback { map }
    }

    pub fn cover(ring: &QuadCoverRing, vertical: &str) -> Step {
        Step::Cover {
            generator: ring.generator().to_string(),
            relation: ring.relation().clone(),
            vertical: vertical.to_string(),
        }
    }

    pub fn apply(&self, a: &DForm) -> Result<DForm> {
        match self {
            Step::Pullback { map } => map.pullback(a),
            Step::Cover {
                generator,
                relation,
                vertical,
            } => cover_pullback(a, &QuadCoverRing::new(generator, relation.clone())?, vertical),
        }
    }

    /// `t^2 = -2*s` style rendering of a cover.
    pub fn describe(&self) -> String {
        match self {
            Step::Pullback { map } => format!("{map:?}"),
            Step::Cover {
                generator,
                relation,
                ..
            } => format!("{generator}^2 = {}", relation.render()),
        }
    }
}

/// Applies `steps` in order.
pub fn replay(steps: &[Step], a: &DForm) -> Result<DForm> {
    let mut cur = a.clone();
    for s in steps {
        cur = s.apply(&cur)?;
    }
    Ok(cur)
}

/// Inclusion of the chart `z_chart = 1` with coordinates `a1..an`.
pub fn restriction_map(n: usize, chart: usize) -> Result<RationalMap> {
    if chart > n {
        return Err(Error::BadChart(chart));
    }
    let a = affine_vars(n);
    let mut k = 0;
    let mut images = Vec::new();
    for j in 0..=n {
        let z = format!("z{j}");
        if j == chart {
            images.push((z, RatFun::one()));
        } else {
            images.push((z, RatFun::var(&a[k])));
            k += 1;
        }
    }
    RationalMap::new(&a, images)
}

/// `a_k -> a_k + p_k`.
pub fn translation_map(point: &[Rational]) -> Result<RationalMap> {
    let a = affine_vars(point.len());
    let images = a
        .iter()
        .zip(point)
        .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
        .map(|(v, c)| (v.clone(), RatFun::var(v).add(&RatFun::constant(c.clone()))));
    RationalMap::new(&a, images)
}

mod rat_list {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::algebra::Rational;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|c| c.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let texts: Vec<String> = Vec::deserialize(d)?;
        texts
            .iter()
            .map(|t| t.parse::<Rational>().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// The foliation a certificate speaks about, in canonical text.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SourceRecord {
    pub vars: Vec<String>,
    pub degree: i64,
    pub form: String,
}

impl SourceRecord {
    pub fn of(f: &Foliation) -> SourceRecord {
        SourceRecord {
            vars: f.vars().to_vec(),
            degree: f.degree(),
            form: f.omega().render(),
        }
    }
}

/// Singular point used for the blow-up and the resulting case.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub chart: usize,
    #[serde(with = "rat_list")]
    pub point: Vec<Rational>,
}

impl From<&ChartPoint> for PointRecord {
    fn from(c: &ChartPoint) -> Self {
        PointRecord {
            chart: c.chart,
            point: c.point.clone(),
        }
    }
}

/// What the bounded search for a jet-order-two point covered.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub coordinate_points: bool,
    pub candidates: Vec<PointRecord>,
    #[serde(with = "rat_list")]
    pub chart0_grid: Vec<Rational>,
}

/// Riccati pull-back data: `phi^* theta` defines the same foliation as
/// `base`, with `theta = dy - (y^2 + psi2(x)) psi1(x) dx`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RiccatiData {
    pub base: DForm,
    pub phi: RationalMap,
    pub psi1: RatFun,
    pub psi2: RatFun,
    pub theta: DForm,
    pub case4: Case4Data,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum Outcome {
    FirstIntegralConditional {
        scanned: ScanRecord,
    },
    LinearPullback {
        at: PointRecord,
        case: CaseTag,
        alpha5: DForm,
        target_n: usize,
        nested: Option<Box<Certificate>>,
    },
    Affine {
        at: Option<PointRecord>,
        case: Option<CaseTag>,
        witness: AffineWitness,
        provenance: Vec<Step>,
    },
    PureProjective {
        at: Option<PointRecord>,
        case: Option<CaseTag>,
        triple: ProjectiveTriple,
        /// The same structure as `(omega0, -omega1, -omega2)`.
        lemma_signs: ProjectiveTriple,
        cover: Option<String>,
        provenance: Vec<Step>,
    },
    FiniteGvs {
        at: Option<PointRecord>,
        case: Option<CaseTag>,
        gvs: GVSeq,
        provenance: Vec<Step>,
    },
    RiccatiPullback {
        at: Option<PointRecord>,
        case: Option<CaseTag>,
        data: Box<RiccatiData>,
        provenance: Vec<Step>,
    },
    Case4NeedsData {
        at: Option<PointRecord>,
        case: Option<CaseTag>,
        form: DForm,
        beta0: DForm,
        missing: String,
        provenance: Vec<Step>,
    },
}

impl Outcome {
    pub fn tag(&self) -> &'static str {
        match self {
            Outcome::FirstIntegralConditional { .. } => "first_integral_conditional",
            Outcome::LinearPullback { .. } => "linear_pullback",
            Outcome::Affine { .. } => "affine",
            Outcome::PureProjective { .. } => "pure_projective",
            Outcome::FiniteGvs { .. } => "finite_gvs",
            Outcome::RiccatiPullback { .. } => "riccati_pullback",
            Outcome::Case4NeedsData { .. } => "case4_needs_data",
        }
    }

    pub fn provenance(&self) -> &[Step] {
        match self {
            Outcome::Affine { provenance, .. }
            | Outcome::PureProjective { provenance, .. }
            | Outcome::FiniteGvs { provenance, .. }
            | Outcome::RiccatiPullback { provenance, .. }
            | Outcome::Case4NeedsData { provenance, .. } => provenance,
            _ => &[],
        }
    }

    fn located(mut self, at: PointRecord, tag: CaseTag, prefix: Vec<Step>) -> Outcome {
        match &mut self {
            Outcome::Affine {
                at: a,
                case,
                provenance,
                ..
            }
            | Outcome::PureProjective {
                at: a,
                case,
                provenance,
                ..
            }
            | Outcome::FiniteGvs {
                at: a,
                case,
                provenance,
                ..
            }
            | Outcome::RiccatiPullback {
                at: a,
                case,
                provenance,
                ..
            }
            | Outcome::Case4NeedsData {
                at: a,
                case,
                provenance,
                ..
            } => {
                *a = Some(at);
                *case = Some(tag);
                let mut steps = prefix;
                steps.append(provenance);
                *provenance = steps;
            }
            _ => {}
        }
        self
    }
}

/// A classification result together with the foliation it describes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub source: SourceRecord,
    pub outcome: Outcome,
}

impl Certificate {
    pub fn tag(&self) -> &'static str {
        self.outcome.tag()
    }
}

pub use run::classify;

mod run;

#[cfg(test)]
mod tests;

//! Predicates on geometries, mostly subgeometries of a coordinatized `PG(n, q)`.
//!
//! Intrinsic predicates (enough points, locally projective, LP axioms, bundle
//! theorem) report witnesses in the point indices of `X`. Predicates on the
//! embedding `X ⊆ P` report witnesses in the point indices of `P`.

mod embedded;
mod intrinsic;

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::geometry::{FiniteGeometry, GeometryError, PointSet};
use crate::projective::{ProjectiveCheckOptions, ProjectiveError};

pub use embedded::{
    check_line_condition, check_minimal_embedding, covering_hyperplanes, is_affino_projective,
    is_locally_affino_projective, is_mobius, is_ovoid, AffinoReport, Applicable, HyperplaneCert,
    LocallyAffinoReport, PointCert,
};
pub use intrinsic::{
    check_bundle_theorem, check_lp_axioms, has_enough_points, is_locally_projective, BundleOptions,
    BundleReport, EnoughPointsReport, LocallyProjectiveReport, LpReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("dimension {dim} is below the required {required}")]
    DimensionTooLow { dim: isize, required: isize },
    #[error("geometry is not a subgeometry of a coordinatized projective space")]
    NoAmbient,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Projective(#[from] ProjectiveError),
}

/// `X` inside its root projective space `P`.
#[derive(Clone, Debug)]
pub struct Embedded {
    pub ambient: FiniteGeometry,
    /// Point of `X` to point of `P`.
    pub inj: Vec<usize>,
    /// `X` as a subset of `P`.
    pub members: PointSet,
}

impl Embedded {
    pub fn of(x: &FiniteGeometry) -> Result<Embedded, ClassifyError> {
        let (p, inj) = x.root_embedding();
        let rep = p.linear_rep().ok_or(ClassifyError::NoAmbient)?;
        let q = rep.field().order() as u64;
        let full = (q.pow(rep.ambient_dim() as u32 + 1) - 1) / (q - 1);
        if p.len() as u64 != full {
            return Err(ClassifyError::NoAmbient);
        }
        let members = PointSet::from_iter(p.len(), inj.iter().copied());
        Ok(Embedded {
            ambient: p,
            inj,
            members,
        })
    }

    /// Ambient lines through `x` (a point of `P`) meeting `X` only in `x`.
    pub fn tangent_lines(&self, x: usize) -> Vec<usize> {
        let lat = self.ambient.lattice();
        lat.lines_through(x)
            .iter()
            .copied()
            .filter(|&l| lat.get(l).members().intersection_len(&self.members) == 1)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Predicate {
    EnoughPoints,
    LocallyProjective,
    LineCondition,
    LpAxioms,
    BundleTheorem,
    AffinoProjective,
    LocallyAffinoProjective,
    Mobius,
    Ovoid,
    MinimalEmbedding,
}

impl Predicate {
    pub const ALL: [Predicate; 10] = [
        Predicate::EnoughPoints,
        Predicate::LocallyProjective,
        Predicate::LineCondition,
        Predicate::LpAxioms,
        Predicate::BundleTheorem,
        Predicate::AffinoProjective,
        Predicate::LocallyAffinoProjective,
        Predicate::Mobius,
        Predicate::Ovoid,
        Predicate::MinimalEmbedding,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Predicate::EnoughPoints => "enough_points",
            Predicate::LocallyProjective => "locally_projective",
            Predicate::LineCondition => "line_condition",
            Predicate::LpAxioms => "lp_axioms",
            Predicate::BundleTheorem => "bundle_theorem",
            Predicate::AffinoProjective => "affino_projective",
            Predicate::LocallyAffinoProjective => "locally_affino_projective",
            Predicate::Mobius => "mobius",
            Predicate::Ovoid => "ovoid",
            Predicate::MinimalEmbedding => "minimal_embedding",
        }
    }
}

impl FromStr for Predicate {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.replace('-', "_");
        Predicate::ALL
            .into_iter()
            .find(|p| p.name() == norm)
            .ok_or_else(|| format!("unknown predicate {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ClassifyOptions {
    pub projective: ProjectiveCheckOptions,
    pub bundle: BundleOptions,
}

/// Every requested predicate, as JSON. `verdicts` summarizes each one as a
/// boolean, `"not-applicable"`, or `null` when the predicate raised an error
/// (the message is then in `errors`).
#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub geometry: String,
    pub points: usize,
    pub dim: isize,
    pub verdicts: BTreeMap<String, Value>,
    pub details: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub errors: BTreeMap<String, String>,
}

impl ClassificationReport {
    pub fn verdict(&self, p: Predicate) -> Option<bool> {
        self.verdicts.get(p.name()).and_then(Value::as_bool)
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

pub fn classify(
    x: &FiniteGeometry,
    predicates: &[Predicate],
    opts: &ClassifyOptions,
) -> ClassificationReport {
    let mut report = ClassificationReport {
        geometry: x.label().to_string(),
        points: x.len(),
        dim: x.dim(),
        verdicts: BTreeMap::new(),
        details: BTreeMap::new(),
        errors: BTreeMap::new(),
    };
    for &p in predicates {
        let out: Result<(Value, Value), ClassifyError> = match p {
            Predicate::EnoughPoints => has_enough_points(x).map(|r| (json!(r.holds), to_value(&r))),
            Predicate::LocallyProjective => {
                let r = is_locally_projective(x, opts.projective);
                Ok((json!(r.holds), to_value(&r)))
            }
            Predicate::LineCondition => {
                check_line_condition(x).map(|v| (json!(v.holds), to_value(&v)))
            }
            Predicate::LpAxioms => {
                let r = check_lp_axioms(x);
                Ok((json!(r.all_hold), to_value(&r)))
            }
            Predicate::BundleTheorem => {
                check_bundle_theorem(x, opts.bundle).map(|r| (json!(r.verdict.holds), to_value(&r)))
            }
            Predicate::AffinoProjective => {
                is_affino_projective(x).map(|r| (json!(r.hyperplane.is_some()), to_value(&r)))
            }
            Predicate::LocallyAffinoProjective => {
                is_locally_affino_projective(x).map(|r| (json!(r.holds), to_value(&r)))
            }
            Predicate::Mobius => is_mobius(x).map(|a| (a.summary(), to_value(&a))),
            Predicate::Ovoid => is_ovoid(x).map(|a| (a.summary(), to_value(&a))),
            Predicate::MinimalEmbedding => {
                check_minimal_embedding(x).map(|v| (json!(v.holds), to_value(&v)))
            }
        };
        match out {
            Ok((v, d)) => {
                report.verdicts.insert(p.name().to_string(), v);
                report.details.insert(p.name().to_string(), d);
            }
            Err(e) => {
                report.verdicts.insert(p.name().to_string(), Value::Null);
                report.errors.insert(p.name().to_string(), e.to_string());
            }
        }
    }
    report
}

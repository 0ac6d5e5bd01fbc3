//! Reconstruction of the semilinear map behind a morphism `φ: X → P'`.
//!
//! `X` is a subgeometry of a coordinatized `P = PG(n, K)` and `P' = PG(m, K')`.
//! The local drivers pick two base points, reconstruct the map induced on
//! each point quotient, glue the two along `V/⟨v1, v2⟩` and verify the result
//! on every point of `X`.

mod affino;
mod certify;
mod ftpg;
mod glue;
mod local;
mod oracle;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{has_enough_points, ClassifyError, Embedded};
use crate::geometry::{FiniteGeometry, GeometryError, GeometryMorphism, PartialMorphism};
use crate::projective::{point_map, LinearSubspace, ProjectiveError, SemilinearMap};

pub use affino::{extend_affino, field_clause};
pub use certify::{certify_side_conditions, Certification, SideConditionReport};
pub use ftpg::{reconstruct_ftpg, reconstruct_ftpg_with_frame, FtpgResult};
pub use glue::{
    fibred_product_bijection, glue_fibred_product, normalize_pair, FibredReport, QuotientFrame,
};
pub use local::{induced_quotient_map, LocalMap};
pub use oracle::{brute_force_oracle, DEFAULT_ORACLE_CAP};

use affino::image_rank;
use ftpg::require_full_pg;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReconstructError {
    #[error("image is contained in a line")]
    ImageInLine,
    #[error("image is contained in a plane")]
    ImageInPlane,
    #[error("undefined set {0:?} is not a flat")]
    ExceptionalNotFlat(Vec<usize>),
    #[error("extracted field map is not a homomorphism")]
    SigmaNotHomomorphism,
    #[error("verification failed at point {point} ({stage})")]
    VerificationFailed { point: usize, stage: String },
    #[error("internal contradiction: {0}")]
    InternalContradiction(String),
    #[error("geometry is not a full coordinatized projective space")]
    NotFullProjective,
    #[error("reductions modulo both base points disagree")]
    ReductionsDisagree,
    #[error("lift to V is inconsistent")]
    LiftInconsistent,
    #[error("quotient maps are not proportional")]
    NotProportional,
    #[error("no admissible pair of base points")]
    NoBasePair,
    #[error("geometry does not have enough points")]
    NotEnoughPoints,
    #[error("field clause fails: |K| = {q}, char K' = {target_characteristic}")]
    FieldClauseViolated { q: u32, target_characteristic: u32 },
    #[error("extension is inconsistent: {0}")]
    InconsistentExtension(String),
    #[error("geometry is not affino-projective")]
    NotAffinoProjective,
    #[error("search space {space} exceeds cap {cap}")]
    CapExceeded { space: u64, cap: u64 },
    #[error("quotient at {base} is not well defined at point {point}")]
    QuotientInconsistent { base: usize, point: usize },
    #[error("bad instance: {0}")]
    BadInstance(String),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Projective(#[from] ProjectiveError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DeclaredKind {
    #[serde(rename = "pg")]
    FullProjective,
    #[serde(rename = "lp")]
    LocallyProjective,
    #[serde(rename = "ap")]
    AffinoProjective,
    #[serde(rename = "lap")]
    LocallyAffinoProjective,
}

impl DeclaredKind {
    pub fn code(self) -> &'static str {
        match self {
            DeclaredKind::FullProjective => "pg",
            DeclaredKind::LocallyProjective => "lp",
            DeclaredKind::AffinoProjective => "ap",
            DeclaredKind::LocallyAffinoProjective => "lap",
        }
    }
}

impl fmt::Display for DeclaredKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for DeclaredKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pg" | "full-projective" => Ok(DeclaredKind::FullProjective),
            "lp" | "locally-projective" => Ok(DeclaredKind::LocallyProjective),
            "ap" | "affino-projective" => Ok(DeclaredKind::AffinoProjective),
            "lap" | "locally-affino-projective" => Ok(DeclaredKind::LocallyAffinoProjective),
            _ => Err(format!("unknown kind {s:?}")),
        }
    }
}

/// `φ: X → P'` with `X` inside a coordinatized projective space.
#[derive(Clone, Debug)]
pub struct MorphismInstance {
    pub x: FiniteGeometry,
    pub target: FiniteGeometry,
    pub map: Vec<usize>,
    pub kind: DeclaredKind,
}

impl MorphismInstance {
    /// Validates that `map` is a morphism `X → target`.
    pub fn new(
        x: FiniteGeometry,
        target: FiniteGeometry,
        map: Vec<usize>,
        kind: DeclaredKind,
    ) -> Result<Self, ReconstructError> {
        let m = GeometryMorphism::new(x, target, map)?;
        Ok(MorphismInstance {
            x: m.source().clone(),
            target: m.target().clone(),
            map: m.map().to_vec(),
            kind,
        })
    }

    /// The restriction to `X` of the map induced by `phi`.
    pub fn from_semilinear(
        x: &FiniteGeometry,
        target: &FiniteGeometry,
        phi: &SemilinearMap,
        kind: DeclaredKind,
    ) -> Result<Self, ReconstructError> {
        let (p, inj) = x.root_embedding();
        let full = point_map(phi, &p, target)?;
        let map = inj
            .iter()
            .enumerate()
            .map(|(i, &pt)| {
                full[pt].ok_or_else(|| {
                    ReconstructError::BadInstance(format!("point {i} of X lies in the kernel"))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MorphismInstance {
            x: x.clone(),
            target: target.clone(),
            map,
            kind,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub base_points: Vec<usize>,
    pub verified_points: usize,
    pub sigma_power: u32,
    /// `λ` applied to the first local map before gluing.
    pub scalar_normalization: u8,
    /// Factor applied to reach the canonical form.
    pub canonical_factor: u8,
    pub transcript: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct ReconstructionResult {
    pub phi: SemilinearMap,
    pub exceptional: LinearSubspace,
    pub base_points: Vec<usize>,
    pub certificate: Certificate,
}

pub fn reconstruct(inst: &MorphismInstance) -> Result<ReconstructionResult, ReconstructError> {
    match inst.kind {
        DeclaredKind::FullProjective => reconstruct_full(inst),
        DeclaredKind::AffinoProjective => reconstruct_affino(inst),
        DeclaredKind::LocallyProjective => reconstruct_locally_projective(inst),
        DeclaredKind::LocallyAffinoProjective => reconstruct_locally_affino(inst),
    }
}

/// Canonical scaling and the final pass over every point of `X`.
fn finish(
    inst: &MorphismInstance,
    phi: SemilinearMap,
    base_points: Vec<usize>,
    scalar_normalization: u8,
    mut transcript: Vec<String>,
    stage: &str,
) -> Result<ReconstructionResult, ReconstructError> {
    let (p, inj) = inst.x.root_embedding();
    let rep = require_full_pg(&p)?;
    let trep = require_full_pg(&inst.target)?;
    let canonical_factor = phi.canonical_factor();
    let phi = phi.canonical();
    for (x, &pt) in inj.iter().enumerate() {
        let got = phi
            .apply_point(rep.coords(pt))
            .and_then(|v| trep.index_of_normalized(&v));
        if got != Some(inst.map[x]) {
            transcript.push(format!("verification failed at point {x}"));
            return Err(ReconstructError::VerificationFailed {
                point: x,
                stage: stage.into(),
            });
        }
    }
    transcript.push(format!("verified on all {} points of X", inj.len()));
    Ok(ReconstructionResult {
        exceptional: phi.kernel(),
        certificate: Certificate {
            base_points: base_points.clone(),
            verified_points: inj.len(),
            sigma_power: phi.sigma().frobenius_power(),
            scalar_normalization,
            canonical_factor,
            transcript,
        },
        base_points,
        phi,
    })
}

/// `X = P`: a single base reconstruction.
pub fn reconstruct_full(inst: &MorphismInstance) -> Result<ReconstructionResult, ReconstructError> {
    let (p, inj) = inst.x.root_embedding();
    require_full_pg(&p)?;
    if inj.len() != p.len() {
        return Err(ReconstructError::NotFullProjective);
    }
    let mut map = vec![None; p.len()];
    for (x, &pt) in inj.iter().enumerate() {
        map[pt] = Some(inst.map[x]);
    }
    let psi = PartialMorphism::new(p, inst.target.clone(), map)?;
    let r = reconstruct_ftpg(&psi)?;
    let t = vec![format!("frame {:?}", r.frame)];
    finish(inst, r.phi, vec![], 1, t, "ftpg")
}

/// `X` affino-projective: extend to `P`, then a single base reconstruction.
pub fn reconstruct_affino(
    inst: &MorphismInstance,
) -> Result<ReconstructionResult, ReconstructError> {
    let map = inst.map.iter().map(|&y| Some(y)).collect();
    let phi = PartialMorphism::new(inst.x.clone(), inst.target.clone(), map)?;
    let ext = extend_affino(&phi)?;
    let undefined = ext.exceptional().len();
    let r = reconstruct_ftpg(&ext)?;
    let t = vec![
        format!("extended to P, {undefined} points undefined"),
        format!("frame {:?}", r.frame),
    ];
    finish(inst, r.phi, vec![], 1, t, "affino")
}

pub fn reconstruct_locally_projective(
    inst: &MorphismInstance,
) -> Result<ReconstructionResult, ReconstructError> {
    reconstruct_local(inst, false, 0)
}

/// As [`reconstruct_locally_projective`] with the admissible base pair of
/// index `skip` in canonical order.
pub fn reconstruct_locally_projective_at(
    inst: &MorphismInstance,
    skip: usize,
) -> Result<ReconstructionResult, ReconstructError> {
    reconstruct_local(inst, false, skip)
}

pub fn reconstruct_locally_affino(
    inst: &MorphismInstance,
) -> Result<ReconstructionResult, ReconstructError> {
    reconstruct_local(inst, true, 0)
}

pub fn reconstruct_locally_affino_at(
    inst: &MorphismInstance,
    skip: usize,
) -> Result<ReconstructionResult, ReconstructError> {
    reconstruct_local(inst, true, skip)
}

/// Points `x` of `X` usable as base points: `X/x = P/x`, or for the affino
/// drivers `X/x` affino-projective in `P/x`, which holds iff the tangent
/// lines at `x` span less than `P`.
fn admissible_points(inst: &MorphismInstance, affino: bool) -> Result<Vec<bool>, ReconstructError> {
    let e = Embedded::of(&inst.x)?;
    let full = e.ambient.len();
    Ok(e.inj
        .iter()
        .map(|&pt| {
            let tangents = e.tangent_lines(pt);
            if !affino {
                return tangents.is_empty();
            }
            let lat = e.ambient.lattice();
            let mut pts = vec![pt];
            for l in tangents {
                pts.extend(lat.get(l).members().iter());
            }
            e.ambient.closure_of(&pts).len() < full
        })
        .collect())
}

/// The base pair of index `skip` among pairs `x1 < x2` of admissible points
/// with `φ(x1) ≠ φ(x2)`, in lexicographic order.
fn base_pair(inst: &MorphismInstance, ok: &[bool], skip: usize) -> Option<(usize, usize)> {
    let n = inst.x.len();
    (0..n)
        .filter(|&a| ok[a])
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| ok[b] && inst.map[a] != inst.map[b])
        .nth(skip)
}

fn reconstruct_local(
    inst: &MorphismInstance,
    affino: bool,
    skip: usize,
) -> Result<ReconstructionResult, ReconstructError> {
    let (p, inj) = inst.x.root_embedding();
    let rep = require_full_pg(&p)?;
    let trep = require_full_pg(&inst.target)?;
    let (k, kp) = (rep.field(), trep.field());
    let mut t = Vec::new();
    if affino {
        field_clause(k, kp)?;
    }
    if !has_enough_points(&inst.x)?.holds {
        return Err(ReconstructError::NotEnoughPoints);
    }
    if image_rank(&inst.target, inst.map.iter().copied()) < 4 {
        return Err(ReconstructError::ImageInPlane);
    }
    let ok = admissible_points(inst, affino)?;
    let (x1, x2) = base_pair(inst, &ok, skip).ok_or(ReconstructError::NoBasePair)?;
    t.push(format!("base points {x1}, {x2}"));

    let mut local_maps = Vec::with_capacity(2);
    for x0 in [x1, x2] {
        let lm = LocalMap::new(inst, x0)?;
        let mut psi = lm.partial()?;
        if !lm.is_full() {
            if !affino {
                return Err(ReconstructError::InternalContradiction(format!(
                    "X/{x0} is not all of P/{x0}"
                )));
            }
            psi = extend_affino(&psi)?;
            t.push(format!("extended X/{x0} to P/{x0}"));
        }
        let r = reconstruct_ftpg(&psi)?;
        t.push(format!(
            "local map at {x0}: frame {:?}, sigma power {}",
            r.frame, r.sigma_power
        ));
        local_maps.push(r.phi);
    }

    let frame = QuotientFrame::new(
        k,
        kp,
        [rep.coords(inj[x1]).to_vec(), rep.coords(inj[x2]).to_vec()],
        [
            trep.coords(inst.map[x1]).to_vec(),
            trep.coords(inst.map[x2]).to_vec(),
        ],
    )?;
    let (scaled, lambda) = normalize_pair(&local_maps[0], &local_maps[1], &frame)?;
    t.push(format!("normalized first local map by {lambda}"));
    let phi = glue_fibred_product(&scaled, &local_maps[1], &frame)?;
    t.push("glued along the fibred product".into());
    finish(inst, phi, vec![x1, x2], lambda, t, "glue")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{affine, make_quadric, QuadricForm};
    use crate::gf::{FieldHom, GaloisField, Matrix};
    use crate::projective::build_pg;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(q: u32) -> &'static GaloisField {
        GaloisField::get(q).unwrap()
    }

    #[test]
    fn identity_on_pg32() {
        let pg = build_pg(3, gf(2)).unwrap();
        let id = SemilinearMap::linear(Matrix::identity(gf(2), 4));
        for kind in [
            DeclaredKind::FullProjective,
            DeclaredKind::LocallyProjective,
        ] {
            let inst = MorphismInstance::from_semilinear(&pg, &pg, &id, kind).unwrap();
            let r = reconstruct(&inst).unwrap();
            assert_eq!(r.phi, id);
            assert_eq!(r.exceptional.dim(), 0);
        }
    }

    #[test]
    fn ag33_round_trip_and_uniqueness() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pg = build_pg(3, gf(3)).unwrap();
        let ag = affine(3, gf(3)).unwrap();
        for _ in 0..3 {
            let phi = SemilinearMap::random_invertible(&mut rng, FieldHom::identity(gf(3)), 4);
            let inst =
                MorphismInstance::from_semilinear(&ag, &pg, &phi, DeclaredKind::LocallyProjective)
                    .unwrap();
            let a = reconstruct(&inst).unwrap();
            let b = reconstruct_locally_projective_at(&inst, 1).unwrap();
            assert_eq!(a.phi, phi.canonical());
            assert_eq!(b.phi, a.phi);
            assert_ne!(a.base_points, b.base_points);
        }
    }

    #[test]
    fn elliptic_quadric_pg34() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let pg = build_pg(3, gf(4)).unwrap();
        let e = make_quadric(&pg, QuadricForm::Elliptic).unwrap();
        let phi = SemilinearMap::random_invertible(&mut rng, FieldHom::frobenius(gf(4), 1), 4);
        let inst =
            MorphismInstance::from_semilinear(&e, &pg, &phi, DeclaredKind::LocallyAffinoProjective)
                .unwrap();
        let r = reconstruct(&inst).unwrap();
        assert_eq!(r.phi, phi.canonical());
        assert_eq!(r.certificate.sigma_power, 1);
    }

    #[test]
    fn gf2_quadric_violates_field_clause() {
        let pg = build_pg(3, gf(2)).unwrap();
        let e = make_quadric(&pg, QuadricForm::Hyperbolic).unwrap();
        let id = SemilinearMap::linear(Matrix::identity(gf(2), 4));
        let inst =
            MorphismInstance::from_semilinear(&e, &pg, &id, DeclaredKind::LocallyAffinoProjective)
                .unwrap();
        assert!(matches!(
            reconstruct(&inst),
            Err(ReconstructError::FieldClauseViolated { q: 2, .. })
        ));
    }

    #[test]
    fn oracle_agrees_on_pg32() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pg = build_pg(3, gf(2)).unwrap();
        let phi = SemilinearMap::random_invertible(&mut rng, FieldHom::identity(gf(2)), 4);
        let inst = MorphismInstance::from_semilinear(&pg, &pg, &phi, DeclaredKind::FullProjective)
            .unwrap();
        let found = brute_force_oracle(&inst, DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(found, vec![reconstruct(&inst).unwrap().phi]);
    }
}

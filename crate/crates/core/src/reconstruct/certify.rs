use serde::Serialize;

use super::{DeclaredKind, MorphismInstance, ReconstructError, ReconstructionResult};
use crate::classify::Embedded;
use crate::geometry::{is_embedding, GeometryMorphism};
use crate::projective::point_map;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Certification {
    Confirmed,
    Violated { detail: String },
    Inapplicable { reason: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct SideConditionReport {
    pub injective: bool,
    pub embedding: bool,
    pub kernel_dim: usize,
    /// Injective `φ` extends to a globally defined map.
    pub globally_defined: Certification,
    /// Embedding `φ` extends to an embedding.
    pub extension_embedding: Certification,
    /// For the affino kinds: a point `p ∉ X` with `(p ∨ x) ∩ X = {x}` for
    /// every `x`, which voids both statements.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tangent_point: Option<usize>,
}

/// A point of `P − X` joined to every point of `X` by a tangent line.
fn tangent_point(inst: &MorphismInstance) -> Result<Option<usize>, ReconstructError> {
    let e = Embedded::of(&inst.x)?;
    let p = &e.ambient;
    Ok(p.points()
        .filter(|&pt| !e.members.contains(pt))
        .find(|&pt| {
            e.members.iter().all(|x| {
                let l = p.closure_of(&[pt, x]);
                l.intersection_len(&e.members) == 1
            })
        }))
}

pub fn certify_side_conditions(
    result: &ReconstructionResult,
    inst: &MorphismInstance,
) -> Result<SideConditionReport, ReconstructError> {
    let phi_x =
        GeometryMorphism::new_unchecked(inst.x.clone(), inst.target.clone(), inst.map.clone());
    let injective = phi_x.is_injective();
    let embedding = injective && is_embedding(&phi_x).holds;
    let kernel_dim = result.exceptional.dim();
    let tangent = match inst.kind {
        DeclaredKind::AffinoProjective | DeclaredKind::LocallyAffinoProjective => {
            tangent_point(inst)?
        }
        _ => None,
    };
    let blocked = tangent.map(|p| Certification::Inapplicable {
        reason: format!("point {p} outside X sees X only along tangent lines"),
    });

    let globally_defined = if !injective {
        Certification::Inapplicable {
            reason: "morphism is not injective".into(),
        }
    } else if let Some(b) = blocked.clone() {
        b
    } else if kernel_dim == 0 {
        Certification::Confirmed
    } else {
        Certification::Violated {
            detail: format!("kernel of dimension {kernel_dim}"),
        }
    };

    let extension_embedding = if !embedding {
        Certification::Inapplicable {
            reason: "morphism is not an embedding".into(),
        }
    } else if let Some(b) = blocked {
        b
    } else {
        let (p, _) = inst.x.root_embedding();
        let full = point_map(&result.phi, &p, &inst.target)?;
        match full.iter().position(Option::is_none) {
            Some(pt) => Certification::Violated {
                detail: format!("extension undefined at {pt}"),
            },
            None => {
                let ext = GeometryMorphism::new_unchecked(
                    p,
                    inst.target.clone(),
                    full.into_iter().flatten().collect(),
                );
                let v = is_embedding(&ext);
                if v.holds {
                    Certification::Confirmed
                } else {
                    Certification::Violated {
                        detail: format!("{:?}", v.witness),
                    }
                }
            }
        }
    };
    Ok(SideConditionReport {
        injective,
        embedding,
        kernel_dim,
        globally_defined,
        extension_embedding,
        tangent_point: tangent,
    })
}

//! JSON file formats for geometries, point maps and semilinear maps.
//!
//! Coordinates are integer element codes. A linear geometry file is loaded as
//! a subgeometry of `PG(n, q)`, so its points come back in canonical order.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::geometry::{FiniteGeometry, GeometryError};
use crate::gf::{FieldHom, GaloisField, GfError, Matrix};
use crate::projective::{build_pg, ProjectiveError, SemilinearMap};
use crate::reconstruct::{DeclaredKind, MorphismInstance, ReconstructError, ReconstructionResult};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON at line {line}, column {column}: {msg}")]
    Json {
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Gf(#[from] GfError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Projective(#[from] ProjectiveError),
    #[error(transparent)]
    Reconstruct(#[from] ReconstructError),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Json {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        }
    }
}

fn format_err(msg: impl Into<String>) -> IoError {
    IoError::Format(msg.into())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearGeometryFile {
    pub field: String,
    pub ambient_dim: usize,
    pub points: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbstractGeometryFile {
    pub points: usize,
    pub flats: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum GeometryFile {
    Linear(LinearGeometryFile),
    Abstract(AbstractGeometryFile),
}

impl GeometryFile {
    pub fn parse(text: &str) -> Result<GeometryFile, IoError> {
        let v: Value = serde_json::from_str(text)?;
        let obj = v
            .as_object()
            .ok_or_else(|| format_err("geometry file must be a JSON object"))?;
        if obj.contains_key("field") {
            let f = serde_json::from_value(v)
                .map_err(|e| format_err(format!("linear geometry: {e}")))?;
            Ok(GeometryFile::Linear(f))
        } else if obj.contains_key("flats") {
            let f = serde_json::from_value(v)
                .map_err(|e| format_err(format!("abstract geometry: {e}")))?;
            Ok(GeometryFile::Abstract(f))
        } else {
            Err(format_err("geometry file needs \"field\" or \"flats\""))
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("geometry files serialize")
    }

    /// Linear geometries are written with the coordinates of their points in
    /// the root projective space; other geometries as their full flat table.
    pub fn from_geometry(g: &FiniteGeometry) -> GeometryFile {
        let (p, inj) = g.root_embedding();
        let label = Some(g.label().to_string());
        match p.linear_rep() {
            Some(rep) => GeometryFile::Linear(LinearGeometryFile {
                field: rep.field().to_string(),
                ambient_dim: rep.ambient_dim(),
                points: inj
                    .iter()
                    .map(|&i| rep.coords(i).iter().map(|&c| c as u32).collect())
                    .collect(),
                label,
            }),
            None => GeometryFile::Abstract(AbstractGeometryFile {
                points: g.len(),
                flats: g
                    .lattice()
                    .flats()
                    .iter()
                    .map(|f| f.members().to_vec())
                    .collect(),
                label,
            }),
        }
    }

    pub fn build(&self) -> Result<FiniteGeometry, IoError> {
        match self {
            GeometryFile::Linear(f) => {
                let field = GaloisField::parse(&f.field)?;
                let pg = build_pg(f.ambient_dim, field)?;
                let rep = pg.linear_rep().expect("pg has coordinates");
                let mut set = pg.empty_set();
                for (i, c) in f.points.iter().enumerate() {
                    let v = codes(field, c, f.ambient_dim + 1)
                        .map_err(|m| format_err(format!("point {i}: {m}")))?;
                    let idx = rep
                        .index_of(&v)
                        .ok_or_else(|| format_err(format!("point {i} is the zero vector")))?;
                    if !set.insert(idx) {
                        return Err(format_err(format!("point {i} repeats an earlier point")));
                    }
                }
                if set.len() == pg.len() && f.label.is_none() {
                    return Ok(pg);
                }
                let label = f
                    .label
                    .clone()
                    .unwrap_or_else(|| format!("subgeometry of {}", pg.label()));
                Ok(pg.subgeometry(&set, label))
            }
            GeometryFile::Abstract(f) => {
                let label = f.label.clone().unwrap_or_else(|| "table".into());
                Ok(FiniteGeometry::from_table(
                    f.points,
                    f.flats.clone(),
                    label,
                )?)
            }
        }
    }
}

pub fn load_geometry(text: &str) -> Result<FiniteGeometry, IoError> {
    GeometryFile::parse(text)?.build()
}

/// Element codes of a coordinate vector of length `len`.
fn codes(field: &GaloisField, c: &[u32], len: usize) -> Result<Vec<u8>, String> {
    if c.len() != len {
        return Err(format!("expected {len} coordinates, found {}", c.len()));
    }
    c.iter()
        .map(|&x| {
            if x < field.order() {
                Ok(x as u8)
            } else {
                Err(format!("element code {x} out of range for {field}"))
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaSpec {
    pub power: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemilinearFile {
    pub sigma: SigmaSpec,
    pub matrix: Vec<Vec<u32>>,
    pub source: String,
    pub target: String,
}

impl SemilinearFile {
    pub fn from_map(phi: &SemilinearMap) -> SemilinearFile {
        SemilinearFile {
            sigma: SigmaSpec {
                power: phi.sigma().frobenius_power(),
            },
            matrix: phi
                .matrix()
                .to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(u32::from).collect())
                .collect(),
            source: phi.source_field().to_string(),
            target: phi.target_field().to_string(),
        }
    }

    pub fn build(&self) -> Result<SemilinearMap, IoError> {
        let k = GaloisField::parse(&self.source)?;
        let kp = GaloisField::parse(&self.target)?;
        let sigma = FieldHom::from_power(k, kp, self.sigma.power).ok_or_else(|| {
            format_err(format!(
                "no embedding {k} -> {kp} with frobenius power {}",
                self.sigma.power
            ))
        })?;
        let cols = self.matrix.first().map_or(0, Vec::len);
        if self.matrix.is_empty() || cols == 0 {
            return Err(format_err("matrix must be nonempty"));
        }
        let rows = self
            .matrix
            .iter()
            .enumerate()
            .map(|(i, r)| {
                codes(kp, r, cols).map_err(|m| format_err(format!("matrix row {i}: {m}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SemilinearMap::new(sigma, Matrix::from_rows(kp, &rows))?)
    }
}

pub fn load_semilinear(text: &str) -> Result<SemilinearMap, IoError> {
    let f: SemilinearFile = serde_json::from_str(text)?;
    f.build()
}

/// `{"pairs": [[src, dst], ...]}`; the target is `PG(m, q')` with `m + 1`
/// the length of the destination vectors and `q'` from `target_field`,
/// defaulting to the field of `X`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub pairs: Vec<(Vec<u32>, Vec<u32>)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_field: Option<String>,
}

impl MapFile {
    pub fn from_instance(inst: &MorphismInstance) -> MapFile {
        let (p, inj) = inst.x.root_embedding();
        let rep = p.linear_rep().expect("coordinatized source");
        let trep = inst.target.linear_rep().expect("coordinatized target");
        let to_u32 = |v: &[u8]| v.iter().map(|&c| c as u32).collect::<Vec<_>>();
        MapFile {
            pairs: inj
                .iter()
                .zip(&inst.map)
                .map(|(&pt, &y)| (to_u32(rep.coords(pt)), to_u32(trep.coords(y))))
                .collect(),
            target_field: (rep.field() != trep.field()).then(|| trep.field().to_string()),
        }
    }

    pub fn instance(
        &self,
        x: &FiniteGeometry,
        kind: DeclaredKind,
    ) -> Result<MorphismInstance, IoError> {
        let (target, map) = self.point_map(x)?;
        Ok(MorphismInstance::new(x.clone(), target, map, kind)?)
    }

    /// The target `PG(m, q')` and the point map on `X`, not yet checked to be
    /// a morphism.
    pub fn point_map(&self, x: &FiniteGeometry) -> Result<(FiniteGeometry, Vec<usize>), IoError> {
        let (p, inj) = x.root_embedding();
        let rep = p
            .linear_rep()
            .ok_or_else(|| format_err("map files need a coordinatized geometry"))?;
        let kp = match &self.target_field {
            Some(s) => GaloisField::parse(s)?,
            None => rep.field(),
        };
        let m1 = self
            .pairs
            .first()
            .map(|(_, d)| d.len())
            .ok_or_else(|| format_err("map has no pairs"))?;
        if m1 < 2 {
            return Err(format_err("target vectors need at least two coordinates"));
        }
        let target = build_pg(m1 - 1, kp)?;
        let trep = target.linear_rep().expect("pg has coordinates");
        let mut back = vec![None; p.len()];
        for (i, &pt) in inj.iter().enumerate() {
            back[pt] = Some(i);
        }
        let mut map: Vec<Option<usize>> = vec![None; x.len()];
        for (i, (s, d)) in self.pairs.iter().enumerate() {
            let sv = codes(rep.field(), s, rep.ambient_dim() + 1)
                .map_err(|m| format_err(format!("pair {i} source: {m}")))?;
            let dv = codes(kp, d, m1).map_err(|m| format_err(format!("pair {i} target: {m}")))?;
            let xi = rep
                .index_of(&sv)
                .and_then(|pt| back[pt])
                .ok_or_else(|| format_err(format!("pair {i}: source is not a point of X")))?;
            let y = trep
                .index_of(&dv)
                .ok_or_else(|| format_err(format!("pair {i}: target is the zero vector")))?;
            match map[xi] {
                Some(prev) if prev != y => {
                    return Err(format_err(format!("pair {i}: conflicting image")))
                }
                _ => map[xi] = Some(y),
            }
        }
        let map = map
            .iter()
            .enumerate()
            .map(|(i, y)| y.ok_or_else(|| format_err(format!("point {i} of X has no image"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((target, map))
    }
}

pub fn load_map(
    text: &str,
    x: &FiniteGeometry,
    kind: DeclaredKind,
) -> Result<MorphismInstance, IoError> {
    let f: MapFile = serde_json::from_str(text)?;
    f.instance(x, kind)
}

/// A reconstruction in the semilinear map format plus its certificate.
#[derive(Debug, Clone, Serialize)]
pub struct ResultFile {
    #[serde(flatten)]
    pub map: SemilinearFile,
    pub base_points: Vec<usize>,
    pub verified_points: usize,
    pub sigma_power: u32,
    pub scalar_normalization: u32,
    pub kernel: Vec<Vec<u32>>,
    pub transcript: Vec<String>,
}

impl ResultFile {
    pub fn new(r: &ReconstructionResult) -> ResultFile {
        ResultFile {
            map: SemilinearFile::from_map(&r.phi),
            base_points: r.base_points.clone(),
            verified_points: r.certificate.verified_points,
            sigma_power: r.certificate.sigma_power,
            scalar_normalization: r.certificate.scalar_normalization.into(),
            kernel: r
                .exceptional
                .basis()
                .iter()
                .map(|v| v.iter().map(|&c| c as u32).collect())
                .collect(),
            transcript: r.certificate.transcript.clone(),
        }
    }
}

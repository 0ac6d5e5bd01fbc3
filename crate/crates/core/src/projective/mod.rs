//! Coordinatized projective spaces `PG(n, q)`, semilinear maps and the partial
//! maps they induce.

mod axioms;
mod quotient_iso;
mod semilinear;
mod subspace;

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use thiserror::Error;

use crate::geometry::{FiniteGeometry, GeometryError, PointSet};
use crate::gf::{vecops, GaloisField, GfError};

pub use axioms::{
    check_projective_axioms, decompose_irreducible, ProjectiveAxiomReport, ProjectiveCheckOptions,
};
pub use quotient_iso::{quotient_iso, QuotientIso};
pub use semilinear::{induced_partial, point_map, ProjPartialMap, SemilinearMap};
pub use subspace::{LinearSubspace, QuotientCoords};

/// Largest coordinate space `q^(n+1)` accepted by [`build_pg`].
pub const MAX_VECTORS: u64 = 1 << 22;
pub const MAX_DIM: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjectiveError {
    #[error("PG({n},{q}) exceeds the size limit")]
    SizeLimit { n: usize, q: u32 },
    #[error("the zero map induces no partial map")]
    ZeroMap,
    #[error("fields do not match")]
    FieldMismatch,
    #[error("shapes do not match")]
    ShapeMismatch,
    #[error("geometry has no coordinates")]
    NotLinear,
    #[error("image of point {0} lies outside the target geometry")]
    ImageOutsideTarget(usize),
    #[error("geometry is not a projective space")]
    NotProjective,
    #[error("subspace must be proper")]
    ImproperSubspace,
    #[error(transparent)]
    Gf(#[from] GfError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// A normalized representative of `⟨v⟩`: the leftmost nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Vec<u8>,
}

impl ProjPoint {
    pub fn new(field: &GaloisField, v: &[u8]) -> Option<ProjPoint> {
        vecops::normalize(field, v).map(|coords| ProjPoint { coords })
    }

    pub fn coords(&self) -> &[u8] {
        &self.coords
    }

    pub fn index_in(&self, g: &FiniteGeometry) -> Option<usize> {
        g.linear_rep()?.index_of_normalized(&self.coords)
    }
}

/// All normalized vectors of length `len`, in lexicographic order.
pub fn normalized_vectors(field: &GaloisField, len: usize) -> Vec<Vec<u8>> {
    let q = field.order();
    let mut out = Vec::new();
    for code in 0..(q as usize).pow(len as u32) {
        let v = vecops::decode(q, len, code);
        if v.iter().find(|&&x| x != 0) == Some(&1) {
            out.push(v);
        }
    }
    out.sort();
    out
}

fn pg_cache() -> &'static Mutex<HashMap<(usize, u32), FiniteGeometry>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u32), FiniteGeometry>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `PG(n, K)` with points in lexicographic order of their normalized
/// coordinates. Shared per `(n, q)`.
pub fn build_pg(n: usize, field: &'static GaloisField) -> Result<FiniteGeometry, ProjectiveError> {
    let q = field.order();
    if n > MAX_DIM || (q as u64).pow(n as u32 + 1) > MAX_VECTORS {
        return Err(ProjectiveError::SizeLimit { n, q });
    }
    let mut cache = pg_cache().lock().expect("pg cache");
    if let Some(g) = cache.get(&(n, q)) {
        return Ok(g.clone());
    }
    let coords = normalized_vectors(field, n + 1);
    let g = FiniteGeometry::linear(field, n, coords, format!("PG({n},{q})"));
    cache.insert((n, q), g.clone());
    Ok(g)
}

/// Hyperplanes `{x : a·x = 0}` of a coordinate geometry, ordered by the
/// normalized dual vector `a`.
pub fn hyperplanes(g: &FiniteGeometry) -> Vec<(Vec<u8>, PointSet)> {
    let rep = g.linear_rep().expect("geometry with coordinates");
    let f = rep.field();
    normalized_vectors(f, rep.ambient_dim() + 1)
        .into_iter()
        .map(|a| {
            let members = (0..g.len()).filter(|&i| {
                let c = rep.coords(i);
                a.iter()
                    .zip(c)
                    .fold(0u8, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
                    == 0
            });
            let set = PointSet::from_iter(g.len(), members);
            (a, set)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_counts() {
        for &(n, q) in &[
            (1usize, 2u32),
            (2, 2),
            (2, 3),
            (3, 2),
            (3, 3),
            (3, 4),
            (2, 16),
            (4, 3),
        ] {
            let f = GaloisField::get(q).unwrap();
            let g = build_pg(n, f).unwrap();
            assert_eq!(g.len() as u32, (q.pow(n as u32 + 1) - 1) / (q - 1));
        }
    }

    #[test]
    fn canonical_point_order() {
        let g = build_pg(3, GaloisField::get(2).unwrap()).unwrap();
        assert_eq!(g.coords(0).unwrap(), &[0, 0, 0, 1]);
        assert_eq!(g.coords(14).unwrap(), &[1, 1, 1, 1]);
        let pg23 = build_pg(2, GaloisField::get(3).unwrap()).unwrap();
        assert!(pg23
            .lattice()
            .lines()
            .iter()
            .all(|&l| pg23.lattice().get(l).len() == 4));
    }

    #[test]
    fn size_limit() {
        let f = GaloisField::get(16).unwrap();
        assert!(build_pg(6, f).is_err());
        assert!(build_pg(5, f).is_err());
    }

    #[test]
    fn hyperplane_scan() {
        let g = build_pg(3, GaloisField::get(3).unwrap()).unwrap();
        let hs = hyperplanes(&g);
        assert_eq!(hs.len(), 40);
        assert!(hs.iter().all(|(_, h)| h.len() == 13 && g.is_flat(h)));
    }
}

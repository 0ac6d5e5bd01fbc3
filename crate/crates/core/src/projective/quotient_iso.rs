use super::{build_pg, LinearSubspace, ProjectiveError, QuotientCoords};
use crate::geometry::{is_embedding, quotient, FiniteGeometry, GeometryMorphism, PartialMorphism};

/// `PG(V)/P(W) ≅ PG(V/W)`, `[⟨v⟩] ↦ ⟨[v]⟩`, with `V/W` coordinatized by the
/// canonical complement of `W`.
#[derive(Clone, Debug)]
pub struct QuotientIso {
    pub quotient: FiniteGeometry,
    pub projection: PartialMorphism,
    pub pg: FiniteGeometry,
    pub coords: QuotientCoords,
    /// Class index to point of `pg`.
    pub forward: Vec<usize>,
    /// Point of `pg` to class index.
    pub backward: Vec<usize>,
}

impl QuotientIso {
    /// Point of `PG(V/W)` of a point of `PG(V)` off `P(W)`.
    pub fn image_of_point(&self, x: usize) -> Option<usize> {
        self.projection.apply(x).map(|c| self.forward[c])
    }
}

pub fn quotient_iso(
    pg: &FiniteGeometry,
    w: &LinearSubspace,
) -> Result<QuotientIso, ProjectiveError> {
    let rep = pg.linear_rep().ok_or(ProjectiveError::NotLinear)?;
    let len = rep.ambient_dim() + 1;
    if w.ambient_len() != len || w.field() != rep.field() {
        return Err(ProjectiveError::ShapeMismatch);
    }
    if w.dim() >= len {
        return Err(ProjectiveError::ImproperSubspace);
    }
    let e = w.points_in(pg);
    let (q, projection) = quotient(pg, &e)?;
    let coords = w.quotient_coords();
    let target = build_pg(len - w.dim() - 1, rep.field())?;
    let trep = target.linear_rep().expect("pg has coordinates");
    let data = q.quotient_data().expect("quotient geometry");
    let forward: Vec<usize> = (0..q.len())
        .map(|c| {
            let v = rep.coords(data.representative(c));
            trep.index_of(&coords.project(v)).expect("nonzero class")
        })
        .collect();
    let mut backward = vec![usize::MAX; target.len()];
    for (c, &y) in forward.iter().enumerate() {
        backward[y] = c;
    }
    if backward.contains(&usize::MAX) {
        return Err(ProjectiveError::NotProjective);
    }
    let iso = GeometryMorphism::new(q.clone(), target.clone(), forward.clone())?;
    if !is_embedding(&iso).holds {
        return Err(ProjectiveError::NotProjective);
    }
    Ok(QuotientIso {
        quotient: q,
        projection,
        pg: target,
        coords,
        forward,
        backward,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::GaloisField;
    use crate::projective::{induced_partial, SemilinearMap};

    #[test]
    fn trivial_and_point_quotients() {
        let f = GaloisField::get(2).unwrap();
        let pg = build_pg(3, f).unwrap();
        let iso = quotient_iso(&pg, &LinearSubspace::zero(f, 4)).unwrap();
        assert_eq!(iso.forward, (0..15).collect::<Vec<_>>());
        let w = LinearSubspace::span(f, 4, &[vec![0, 1, 1, 0]]);
        let iso = quotient_iso(&pg, &w).unwrap();
        assert_eq!(iso.quotient.len(), 7);
        assert_eq!(iso.pg.len(), 7);
    }

    #[test]
    fn line_quotient_of_pg33() {
        let f = GaloisField::get(3).unwrap();
        let pg = build_pg(3, f).unwrap();
        let w = LinearSubspace::span(f, 4, &[vec![1, 0, 2, 0], vec![0, 1, 1, 1]]);
        let iso = quotient_iso(&pg, &w).unwrap();
        assert_eq!(iso.pg.len(), 4);
        assert_eq!(iso.pg.dim(), 1);
    }

    #[test]
    fn quotient_linear_map_matches_geometry_quotient() {
        let f = GaloisField::get(3).unwrap();
        let pg = build_pg(3, f).unwrap();
        let w = LinearSubspace::span(f, 4, &[vec![1, 1, 0, 2]]);
        let iso = quotient_iso(&pg, &w).unwrap();
        let phi = SemilinearMap::linear(iso.coords.projection_matrix());
        let (_, pm) = induced_partial(&phi, &pg, &iso.pg).unwrap();
        for x in pg.points() {
            assert_eq!(pm.apply(x), iso.image_of_point(x));
        }
    }
}

use super::ftpg::require_full_pg;
use super::ReconstructError;
use crate::classify::{covering_hyperplanes, Embedded};
use crate::geometry::{PartialMorphism, PointSet};
use crate::gf::{GaloisField, Matrix};

/// `|K| ≥ 4`, or `|K| = 3` and `K'` of characteristic 3.
pub fn field_clause(k: &GaloisField, kp: &GaloisField) -> Result<(), ReconstructError> {
    let q = k.order();
    if q >= 4 || (q == 3 && kp.characteristic() == 3) {
        Ok(())
    } else {
        Err(ReconstructError::FieldClauseViolated {
            q,
            target_characteristic: kp.characteristic(),
        })
    }
}

/// Rank of the span of the image points.
pub(super) fn image_rank(
    target: &crate::geometry::FiniteGeometry,
    image: impl Iterator<Item = usize>,
) -> usize {
    let rep = target.linear_rep().expect("coordinates");
    let rows: Vec<Vec<u8>> = image.map(|y| rep.coords(y).to_vec()).collect();
    if rows.is_empty() {
        return 0;
    }
    Matrix::from_rows(rep.field(), &rows).rank()
}

/// Extends a partial morphism on an affino-projective `X ⊆ P` to `P`: a point
/// `p ∉ X` goes to the common point of the closures of `φ(L ∩ X)` over the
/// lines `L ∋ p` outside `H` meeting `X` twice. Points without a single
/// common point are left undefined; their closure must be a flat.
pub fn extend_affino(phi: &PartialMorphism) -> Result<PartialMorphism, ReconstructError> {
    let e = Embedded::of(phi.source())?;
    let p = &e.ambient;
    let target = phi.target();
    require_full_pg(target)?;
    let (k, kp) = (
        p.linear_rep().unwrap().field(),
        target.linear_rep().unwrap().field(),
    );
    field_clause(k, kp)?;
    let (h, _) = covering_hyperplanes(p, &e.members);
    let h = p.set_of(&h.ok_or(ReconstructError::NotAffinoProjective)?.points);
    if image_rank(target, phi.map().iter().flatten().copied()) < 3 {
        return Err(ReconstructError::ImageInLine);
    }

    let mut back = vec![None; p.len()];
    for (i, &pt) in e.inj.iter().enumerate() {
        back[pt] = Some(i);
    }
    let lat = p.lattice();
    let mut map: Vec<Option<usize>> = vec![None; p.len()];
    for pt in p.points() {
        if let Some(i) = back[pt] {
            map[pt] = phi.apply(i);
            continue;
        }
        let mut common: Option<PointSet> = None;
        for &l in lat.lines_through(pt) {
            let line = lat.get(l).members();
            if line.is_subset(&h) {
                continue;
            }
            let on = line.intersection(&e.members);
            if on.len() < 2 {
                continue;
            }
            let images: Vec<usize> = on
                .iter()
                .filter_map(|y| phi.apply(back[y].unwrap()))
                .collect();
            let cl = target.closure_of(&images);
            match &mut common {
                None => common = Some(cl),
                Some(c) => c.intersect_with(&cl),
            }
            if common.as_ref().is_some_and(|c| c.is_empty()) {
                break;
            }
        }
        map[pt] = common.filter(|c| c.len() == 1).and_then(|c| c.first());
    }
    let undefined = PointSet::from_iter(p.len(), (0..p.len()).filter(|&i| map[i].is_none()));
    if !p.is_flat(&undefined) {
        return Err(ReconstructError::ExceptionalNotFlat(undefined.to_vec()));
    }
    PartialMorphism::new(p.clone(), target.clone(), map)
        .map_err(|e| ReconstructError::InconsistentExtension(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::affine;
    use crate::gf::FieldHom;
    use crate::projective::{build_pg, induced_partial, point_map, SemilinearMap};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(q: u32) -> &'static GaloisField {
        GaloisField::get(q).unwrap()
    }

    fn restricted(
        x: &crate::geometry::FiniteGeometry,
        phi: &SemilinearMap,
        target: &crate::geometry::FiniteGeometry,
    ) -> PartialMorphism {
        let (p, inj) = x.root_embedding();
        let full = point_map(phi, &p, target).unwrap();
        let map = inj.iter().map(|&i| full[i]).collect();
        PartialMorphism::new(x.clone(), target.clone(), map).unwrap()
    }

    #[test]
    fn extends_projectivity_of_ag34() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pg = build_pg(3, gf(4)).unwrap();
        let ag = affine(3, gf(4)).unwrap();
        for _ in 0..3 {
            let phi = SemilinearMap::random_invertible(&mut rng, FieldHom::identity(gf(4)), 4);
            let ext = extend_affino(&restricted(&ag, &phi, &pg)).unwrap();
            let (_, full) = induced_partial(&phi, &pg, &pg).unwrap();
            assert_eq!(ext.map(), full.map());
        }
    }

    #[test]
    fn gf2_violates_field_clause() {
        let pg = build_pg(3, gf(2)).unwrap();
        let ag = affine(3, gf(2)).unwrap();
        let phi = SemilinearMap::linear(Matrix::identity(gf(2), 4));
        assert!(matches!(
            extend_affino(&restricted(&ag, &phi, &pg)),
            Err(ReconstructError::FieldClauseViolated { q: 2, .. })
        ));
        assert!(field_clause(gf(3), gf(9)).is_ok());
        assert!(field_clause(gf(3), gf(3)).is_ok());
    }
}

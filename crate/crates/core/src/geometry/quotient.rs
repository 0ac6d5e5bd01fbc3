use std::collections::HashMap;

use super::morphism::class_violation;
use super::{FiniteGeometry, GeometryError, GeometryMorphism, PartialMorphism, PointSet, NONE};

/// Points of `X/E`: the classes `x ∨ E` for `x ∉ E`, ordered by least member.
pub struct QuotientData {
    parent: FiniteGeometry,
    exceptional: PointSet,
    e_basis: Vec<usize>,
    classes: Vec<PointSet>,
    joins: Vec<PointSet>,
    class_of: Vec<u32>,
}

impl QuotientData {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn parent(&self) -> &FiniteGeometry {
        &self.parent
    }

    pub fn exceptional(&self) -> &PointSet {
        &self.exceptional
    }

    /// Members (in the parent) of class `c`.
    pub fn class(&self, c: usize) -> &PointSet {
        &self.classes[c]
    }

    /// The flat `x ∨ E` for any `x` in class `c`.
    pub fn join_of(&self, c: usize) -> &PointSet {
        &self.joins[c]
    }

    pub fn class_of(&self, x: usize) -> Option<usize> {
        let c = self.class_of[x];
        (c != NONE).then_some(c as usize)
    }

    pub fn representative(&self, c: usize) -> usize {
        self.classes[c].first().expect("classes are nonempty")
    }

    fn gens(&self, pts: &[usize]) -> Vec<usize> {
        let mut g = self.e_basis.clone();
        g.extend(pts.iter().map(|&c| self.representative(c)));
        g
    }

    pub(super) fn closure_of(&self, pts: &[usize]) -> PointSet {
        let j = self.parent.closure_of(&self.gens(pts));
        let mut out = PointSet::empty(self.len());
        for y in j.iter() {
            if let Some(c) = self.class_of(y) {
                out.insert(c);
            }
        }
        out
    }

    pub(super) fn rank_of(&self, pts: &[usize]) -> usize {
        self.parent.rank_of(&self.gens(pts)) - self.e_basis.len()
    }

    /// Parent flat `S ⊇ E` corresponding to a set of classes.
    pub fn lift(&self, s: &PointSet) -> PointSet {
        let mut out = self.exceptional.clone();
        for c in s.iter() {
            out.union_with(&self.classes[c]);
        }
        out
    }
}

/// `X/E` with the projection `π`, whose exceptional flat is `E`.
pub fn quotient(
    g: &FiniteGeometry,
    e: &PointSet,
) -> Result<(FiniteGeometry, PartialMorphism), GeometryError> {
    if !g.is_flat(e) {
        return Err(GeometryError::NotAFlat(e.to_vec()));
    }
    let e_basis = g.greedy(&e.to_vec());
    let mut index: HashMap<PointSet, usize> = HashMap::new();
    let mut classes: Vec<PointSet> = Vec::new();
    let mut joins: Vec<PointSet> = Vec::new();
    let mut class_of = vec![NONE; g.len()];
    for x in g.points().filter(|&x| !e.contains(x)) {
        let mut gens = e_basis.clone();
        gens.push(x);
        let j = g.closure_of(&gens);
        let c = *index.entry(j.clone()).or_insert_with(|| {
            classes.push(PointSet::empty(g.len()));
            joins.push(j);
            classes.len() - 1
        });
        classes[c].insert(x);
        class_of[x] = c as u32;
    }
    let data = QuotientData {
        parent: g.clone(),
        exceptional: e.clone(),
        e_basis,
        classes,
        joins,
        class_of,
    };
    let map: Vec<Option<usize>> = g.points().map(|x| data.class_of(x)).collect();
    let label = format!("{}/{:?}", g.label(), e.to_vec());
    let q = FiniteGeometry::from_quotient(data, label);
    let pi = PartialMorphism::new_unchecked(g.clone(), q.clone(), map);
    Ok((q, pi))
}

/// The unique `φ̃` on `X/E` with `φ = φ̃ ∘ π`.
pub fn factor_through_quotient(
    phi: &PartialMorphism,
) -> Result<(FiniteGeometry, GeometryMorphism), GeometryError> {
    let g = phi.source();
    let lat = g.lattice();
    if let Some(&l) = lat.lines().iter().find(|&&l| lat.get(l).len() < 3) {
        return Err(GeometryError::PreconditionLinesTooShort(
            lat.get(l).members().to_vec(),
        ));
    }
    if let Some((a, b)) = class_violation(g, phi.exceptional(), phi.map()) {
        return Err(GeometryError::NotConstantOnClasses(a, b));
    }
    let (q, _) = quotient(g, phi.exceptional())?;
    let data = q.quotient_data().expect("quotient geometry");
    let map = (0..q.len())
        .map(|c| phi.apply(data.representative(c)).expect("defined off E"))
        .collect();
    Ok((
        q.clone(),
        GeometryMorphism::new_unchecked(q, phi.target().clone(), map),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{check_geometry_axioms, is_embedding};
    use crate::gf::GaloisField;
    use crate::projective::build_pg;

    fn pg32() -> FiniteGeometry {
        build_pg(3, GaloisField::get(2).unwrap()).unwrap()
    }

    #[test]
    fn quotient_sizes() {
        let g = pg32();
        let (q0, _) = quotient(&g, &g.empty_set()).unwrap();
        assert_eq!(q0.len(), 15);
        assert_eq!(q0.lattice().len(), g.lattice().len());
        let (qp, pi) = quotient(&g, &g.set_of(&[0])).unwrap();
        assert_eq!(qp.len(), 7);
        assert_eq!(qp.dim(), 2);
        assert_eq!(qp.lattice().lines().len(), 7);
        assert!(check_geometry_axioms(&qp).all_hold());
        assert_eq!(pi.exceptional().to_vec(), vec![0]);
        let line = g.closure_of(&[0, 1]);
        let (ql, _) = quotient(&g, &line).unwrap();
        assert_eq!(ql.len(), 3);
        assert_eq!(ql.dim(), 1);
        assert!(quotient(&g, &g.set_of(&[0, 1])).is_err());
    }

    #[test]
    fn quotient_flats_match_flats_above_e() {
        let g = pg32();
        let e = g.closure_of(&[0]);
        let (q, _) = quotient(&g, &e).unwrap();
        let data = q.quotient_data().unwrap();
        let above = g
            .lattice()
            .flats()
            .iter()
            .filter(|f| e.is_subset(f.members()))
            .count();
        assert_eq!(q.lattice().len(), above);
        for f in q.lattice().flats() {
            let lifted = data.lift(f.members());
            assert!(g.is_flat(&lifted));
            assert_eq!(g.dim_of(&lifted), f.dim() + 1);
        }
    }

    #[test]
    fn factor_pi_is_identity() {
        let g = pg32();
        let (q, pi) = quotient(&g, &g.set_of(&[2])).unwrap();
        let (q2, phi) = factor_through_quotient(&pi).unwrap();
        assert_eq!(q2.len(), q.len());
        assert_eq!(phi.map(), (0..q.len()).collect::<Vec<_>>());
        let _ = is_embedding(&phi);
    }

    #[test]
    fn short_lines_rejected() {
        let g = pg32();
        let plane = g.lattice().get(g.lattice().planes()[0]).members().clone();
        let ag = g.subgeometry(&plane.complement(), "ag");
        let id = GeometryMorphism::new(ag.clone(), ag.clone(), ag.points().collect()).unwrap();
        assert!(matches!(
            factor_through_quotient(&id.as_partial()),
            Err(GeometryError::PreconditionLinesTooShort(_))
        ));
    }
}

//! Finite closure geometries: flats, bases, dimension, subgeometries, quotients
//! and (partial) morphisms.

mod axioms;
mod lattice;
mod linear;
mod morphism;
mod pointset;
mod quotient;
mod rules;

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;
use thiserror::Error;

use crate::gf::GaloisField;

pub use axioms::{
    check_closure_laws, check_geometry_axioms, AxiomVerdict, ClosureLawReport, GeometryAxiomReport,
};
pub use lattice::FlatLattice;
pub use linear::{Echelon, LinearRep};
pub use morphism::{
    check_dim_bounds, check_morphism, is_embedding, DimBoundsReport, GeometryMorphism,
    MorphismCheckOptions, MorphismReport, MorphismWitness, PartialMorphism,
};
pub use pointset::PointSet;
pub use quotient::{factor_through_quotient, quotient, QuotientData};
pub use rules::{is_generated_by_lines, is_generated_by_lines_planes, RuleReport};

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("generators do not span the requested flat")]
    NotGenerating,
    #[error("point set {0:?} is not a flat")]
    NotAFlat(Vec<usize>),
    #[error("point {point} is outside a geometry of {n} points")]
    PointOutOfRange { point: usize, n: usize },
    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("line {0:?} has fewer than three points")]
    PreconditionLinesTooShort(Vec<usize>),
    #[error("map differs on points {0} and {1} of the same class")]
    NotConstantOnClasses(usize, usize),
    #[error("map is not a morphism: {0}")]
    NotAMorphism(String),
    #[error("map is not surjective")]
    NotSurjective,
    #[error("closure table is malformed: {0}")]
    BadTable(String),
}

/// A flat (closed subset) together with its dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Flat {
    members: PointSet,
    dim: isize,
}

impl Flat {
    pub fn members(&self) -> &PointSet {
        &self.members
    }

    pub fn into_members(self) -> PointSet {
        self.members
    }

    pub fn dim(&self) -> isize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }
}

impl PartialOrd for Flat {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Flat {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.dim, &self.members).cmp(&(other.dim, &other.members))
    }
}

/// The enclosing geometry of a subgeometry, with the point injection.
#[derive(Clone)]
pub struct Ambient {
    pub geometry: FiniteGeometry,
    pub injection: Vec<usize>,
}

enum Kind {
    Linear(LinearRep),
    Table(Vec<PointSet>),
    Subset {
        parent: FiniteGeometry,
        members: Vec<usize>,
        local: Vec<u32>,
    },
    Quotient(QuotientData),
    Truncation {
        base: FiniteGeometry,
        dim: usize,
    },
}

struct Inner {
    label: String,
    n: usize,
    kind: Kind,
    ambient: Option<Ambient>,
    exchange_assumed: bool,
    lattice: OnceLock<FlatLattice>,
}

/// A finite point universe `0..n` with a closure operator.
///
/// Cheap to clone; the flat lattice is computed on first use and shared.
#[derive(Clone)]
pub struct FiniteGeometry(Arc<Inner>);

impl fmt::Debug for FiniteGeometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGeometry({}, {} points)", self.0.label, self.0.n)
    }
}

impl PartialEq for FiniteGeometry {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl FiniteGeometry {
    fn from_kind(
        label: String,
        n: usize,
        kind: Kind,
        ambient: Option<Ambient>,
        exchange_assumed: bool,
    ) -> Self {
        FiniteGeometry(Arc::new(Inner {
            label,
            n,
            kind,
            ambient,
            exchange_assumed,
            lattice: OnceLock::new(),
        }))
    }

    /// Points given by normalized, distinct coordinate vectors of length `ambient_dim + 1`.
    pub fn linear(
        field: &'static GaloisField,
        ambient_dim: usize,
        coords: Vec<Vec<u8>>,
        label: impl Into<String>,
    ) -> Self {
        let n = coords.len();
        let rep = LinearRep::new(field, ambient_dim, coords);
        Self::from_kind(label.into(), n, Kind::Linear(rep), None, true)
    }

    /// Abstract geometry whose closed sets are the given table; closure is the
    /// intersection of all table sets containing the argument.
    pub fn from_table(
        n: usize,
        flats: Vec<Vec<usize>>,
        label: impl Into<String>,
    ) -> Result<Self, GeometryError> {
        let mut table = Vec::with_capacity(flats.len() + 1);
        for f in flats {
            if let Some(&bad) = f.iter().find(|&&x| x >= n) {
                return Err(GeometryError::PointOutOfRange { point: bad, n });
            }
            table.push(PointSet::from_iter(n, f));
        }
        let full = PointSet::full(n);
        if !table.contains(&full) {
            table.push(full);
        }
        table.sort();
        table.dedup();
        Ok(Self::from_kind(
            label.into(),
            n,
            Kind::Table(table),
            None,
            false,
        ))
    }

    /// Disjoint union; flats are unions of one flat from each part.
    pub fn coproduct(parts: &[FiniteGeometry], label: impl Into<String>) -> Self {
        let n: usize = parts.iter().map(|g| g.len()).sum();
        let mut table = vec![PointSet::empty(n)];
        let mut offset = 0;
        for g in parts {
            let mut next = Vec::new();
            for base in &table {
                for f in g.lattice().flats() {
                    let mut s = base.clone();
                    for x in f.members().iter() {
                        s.insert(offset + x);
                    }
                    next.push(s);
                }
            }
            table = next;
            offset += g.len();
        }
        table.sort();
        table.dedup();
        let exchange = parts.iter().all(|g| g.0.exchange_assumed);
        Self::from_kind(label.into(), n, Kind::Table(table), None, exchange)
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    pub fn len(&self) -> usize {
        self.0.n
    }

    pub fn is_empty(&self) -> bool {
        self.0.n == 0
    }

    pub fn points(&self) -> std::ops::Range<usize> {
        0..self.0.n
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet::empty(self.0.n)
    }

    pub fn full_set(&self) -> PointSet {
        PointSet::full(self.0.n)
    }

    pub fn set_of(&self, pts: &[usize]) -> PointSet {
        PointSet::from_iter(self.0.n, pts.iter().copied())
    }

    pub fn ambient(&self) -> Option<&Ambient> {
        self.0.ambient.as_ref()
    }

    /// Coordinates when the geometry is given by vectors.
    pub fn linear_rep(&self) -> Option<&LinearRep> {
        match &self.0.kind {
            Kind::Linear(r) => Some(r),
            _ => None,
        }
    }

    pub fn quotient_data(&self) -> Option<&QuotientData> {
        match &self.0.kind {
            Kind::Quotient(d) => Some(d),
            _ => None,
        }
    }

    /// Coordinates of point `i`, when linear.
    pub fn coords(&self, i: usize) -> Option<&[u8]> {
        self.linear_rep().map(|r| r.coords(i))
    }

    /// Whether the closure is known to satisfy exchange by construction.
    pub fn exchange_assumed(&self) -> bool {
        self.0.exchange_assumed
    }

    /// The outermost enclosing geometry and the composed injection into it.
    pub fn root_embedding(&self) -> (FiniteGeometry, Vec<usize>) {
        let mut g = self.clone();
        let mut inj: Vec<usize> = self.points().collect();
        while let Some(a) = g.ambient().cloned() {
            inj = inj.iter().map(|&i| a.injection[i]).collect();
            g = a.geometry;
        }
        (g, inj)
    }

    fn check_points(&self, pts: &[usize]) {
        for &p in pts {
            assert!(
                p < self.0.n,
                "point {p} outside geometry of {} points",
                self.0.n
            );
        }
    }

    /// Closure of a list of points.
    pub fn closure_of(&self, pts: &[usize]) -> PointSet {
        self.check_points(pts);
        let n = self.0.n;
        match &self.0.kind {
            Kind::Linear(rep) => rep.closure(pts.iter().copied()),
            Kind::Table(table) => {
                let a = PointSet::from_iter(n, pts.iter().copied());
                let mut out = PointSet::full(n);
                for s in table {
                    if a.is_subset(s) {
                        out.intersect_with(s);
                    }
                }
                out
            }
            Kind::Subset {
                parent,
                members,
                local,
            } => {
                let mapped: Vec<usize> = pts.iter().map(|&p| members[p]).collect();
                let j = parent.closure_of(&mapped);
                let mut out = PointSet::empty(n);
                for y in j.iter() {
                    if local[y] != NONE {
                        out.insert(local[y] as usize);
                    }
                }
                out
            }
            Kind::Quotient(d) => d.closure_of(pts),
            Kind::Truncation { base, dim } => {
                if base.rank_of(pts) <= *dim {
                    base.closure_of(pts)
                } else {
                    PointSet::full(n)
                }
            }
        }
    }

    pub fn closure(&self, a: &PointSet) -> PointSet {
        self.closure_of(&a.to_vec())
    }

    /// Closure as a [`Flat`] with its dimension.
    pub fn flat(&self, a: &PointSet) -> Flat {
        let members = self.closure(a);
        let dim = self.rank(&members) as isize - 1;
        Flat { members, dim }
    }

    pub fn flat_of(&self, pts: &[usize]) -> Flat {
        self.flat(&self.set_of(pts))
    }

    pub fn is_flat(&self, a: &PointSet) -> bool {
        &self.closure(a) == a
    }

    /// Size of a basis of the closure of `pts`.
    pub fn rank_of(&self, pts: &[usize]) -> usize {
        self.check_points(pts);
        match &self.0.kind {
            Kind::Linear(rep) => rep.rank(pts.iter().copied()),
            Kind::Subset {
                parent, members, ..
            } => {
                let mapped: Vec<usize> = pts.iter().map(|&p| members[p]).collect();
                parent.rank_of(&mapped)
            }
            Kind::Quotient(d) => d.rank_of(pts),
            Kind::Truncation { base, dim } => base.rank_of(pts).min(dim + 1),
            Kind::Table(_) => {
                let cl = self.closure_of(pts);
                self.greedy(&cl.to_vec()).len()
            }
        }
    }

    pub fn rank(&self, a: &PointSet) -> usize {
        self.rank_of(&a.to_vec())
    }

    /// Dimension of the closure of `a` (`-1` for the empty flat).
    pub fn dim_of(&self, a: &PointSet) -> isize {
        self.rank(a) as isize - 1
    }

    /// Dimension of the whole geometry.
    pub fn dim(&self) -> isize {
        let all: Vec<usize> = self.points().collect();
        self.rank_of(&all) as isize - 1
    }

    /// Greedy left-to-right independent subsequence.
    fn greedy(&self, generators: &[usize]) -> Vec<usize> {
        if let Kind::Linear(rep) = &self.0.kind {
            let mut e = Echelon::new(rep.field());
            return generators
                .iter()
                .copied()
                .filter(|&g| e.insert(rep.coords(g)))
                .collect();
        }
        let mut basis: Vec<usize> = Vec::new();
        for &g in generators {
            if !self.closure_of(&basis).contains(g) {
                basis.push(g);
            }
        }
        basis
    }

    /// Greedy basis of `s` drawn from `generators`, scanned in the given order.
    pub fn basis_of(
        &self,
        s: &PointSet,
        generators: &[usize],
    ) -> Result<Vec<usize>, GeometryError> {
        self.check_points(generators);
        if &self.closure_of(generators) != s {
            return Err(GeometryError::NotGenerating);
        }
        Ok(self.greedy(generators))
    }

    pub fn join(&self, a: &PointSet, b: &PointSet) -> PointSet {
        self.closure(&a.union(b))
    }

    pub fn meet(&self, a: &PointSet, b: &PointSet) -> PointSet {
        a.intersection(b)
    }

    /// Flats, cached after the first sweep.
    pub fn lattice(&self) -> &FlatLattice {
        self.0.lattice.get_or_init(|| FlatLattice::build(self))
    }

    /// Subgeometry on `a`: closure is the ambient closure intersected with `a`.
    pub fn subgeometry(&self, a: &PointSet, label: impl Into<String>) -> FiniteGeometry {
        let members = a.to_vec();
        let ambient = Some(Ambient {
            geometry: self.clone(),
            injection: members.clone(),
        });
        if let Kind::Linear(rep) = &self.0.kind {
            let coords = members.iter().map(|&i| rep.coords(i).to_vec()).collect();
            let sub = LinearRep::new(rep.field(), rep.ambient_dim(), coords);
            return Self::from_kind(
                label.into(),
                members.len(),
                Kind::Linear(sub),
                ambient,
                true,
            );
        }
        let mut local = vec![NONE; self.0.n];
        for (i, &m) in members.iter().enumerate() {
            local[m] = i as u32;
        }
        let n = members.len();
        Self::from_kind(
            label.into(),
            n,
            Kind::Subset {
                parent: self.clone(),
                members,
                local,
            },
            ambient,
            self.0.exchange_assumed,
        )
    }

    /// Same points; every set of dimension `>= dim` closes to the whole space.
    pub fn truncation(&self, dim: usize, label: impl Into<String>) -> FiniteGeometry {
        Self::from_kind(
            label.into(),
            self.0.n,
            Kind::Truncation {
                base: self.clone(),
                dim,
            },
            None,
            self.0.exchange_assumed,
        )
    }

    fn from_quotient(data: QuotientData, label: String) -> FiniteGeometry {
        let n = data.len();
        let exchange = data.parent().0.exchange_assumed;
        Self::from_kind(label, n, Kind::Quotient(data), None, exchange)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pg32() -> FiniteGeometry {
        crate::projective::build_pg(3, GaloisField::get(2).unwrap()).unwrap()
    }

    #[test]
    fn closure_examples() {
        let g = pg32();
        assert!(g.closure_of(&[]).is_empty());
        assert_eq!(g.closure_of(&[0, 1]).len(), 3);
        let line = g.closure_of(&[0, 1]);
        let third = (0..15).find(|&x| !line.contains(x)).unwrap();
        assert_eq!(g.closure_of(&[0, 1, third]).len(), 7);
    }

    #[test]
    fn basis_and_dim() {
        let g = pg32();
        let line = g.closure_of(&[0, 1]);
        let members = line.to_vec();
        assert_eq!(g.basis_of(&line, &members).unwrap(), members[..2].to_vec());
        assert_eq!(g.basis_of(&g.set_of(&[4]), &[4]).unwrap(), vec![4]);
        let all: Vec<usize> = g.points().collect();
        assert_eq!(g.basis_of(&g.full_set(), &all).unwrap().len(), 4);
        assert_eq!(g.dim(), 3);
        assert_eq!(g.dim_of(&g.empty_set()), -1);
        assert_eq!(g.flat(&line).dim(), 1);
        assert_eq!(
            g.basis_of(&g.full_set(), &[0, 1]),
            Err(GeometryError::NotGenerating)
        );
    }

    #[test]
    fn join_and_meet() {
        let g = pg32();
        let s = g.closure_of(&[0, 1]);
        assert_eq!(g.join(&s, &g.empty_set()), s);
        let planes = g.lattice().of_dim(2);
        let (a, b) = (g.lattice().get(planes[0]), g.lattice().get(planes[1]));
        assert_eq!(g.flat(&g.meet(a.members(), b.members())).dim(), 1);
    }

    #[test]
    fn subgeometry_of_plane_complement() {
        let g = pg32();
        let plane = g.lattice().get(g.lattice().of_dim(2)[0]).members().clone();
        let x = g.subgeometry(&plane.complement(), "ag32");
        assert_eq!(x.len(), 8);
        assert!(x
            .lattice()
            .of_dim(1)
            .iter()
            .all(|&l| x.lattice().get(l).len() == 2));
        let same = g.subgeometry(&g.full_set(), "all");
        assert_eq!(same.lattice().len(), g.lattice().len());
    }

    #[test]
    fn truncation_is_bijective_not_iso() {
        let g = pg32();
        let t = g.truncation(2, "t");
        assert_eq!(t.dim(), 2);
        assert_eq!(t.closure_of(&[0, 1]).len(), 3);
        let third = (0..15)
            .find(|&x| !g.closure_of(&[0, 1]).contains(x))
            .unwrap();
        assert_eq!(t.closure_of(&[0, 1, third]).len(), 15);
    }
}

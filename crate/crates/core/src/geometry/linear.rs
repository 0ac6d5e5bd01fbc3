use crate::gf::{vecops, GaloisField};

use super::PointSet;

const NONE: u32 = u32::MAX;

/// Points given by normalized coordinate vectors in `K^(n+1)`; the closure of a
/// set is the set of member points lying in its linear span.
pub struct LinearRep {
    field: &'static GaloisField,
    ambient_dim: usize,
    coords: Vec<Vec<u8>>,
    lookup: Vec<u32>,
}

/// Incremental row echelon basis used for rank and span membership.
#[derive(Clone)]
pub struct Echelon {
    field: &'static GaloisField,
    rows: Vec<Vec<u8>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: &'static GaloisField) -> Echelon {
        Echelon {
            field,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the current rows; zero iff `v` lies in the span.
    pub fn reduce(&self, v: &[u8]) -> Vec<u8> {
        let f = self.field;
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = w[p];
            if c != 0 {
                for (x, &r) in w.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        vecops::is_zero(&self.reduce(v))
    }

    /// Insert `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: &[u8]) -> bool {
        let f = self.field;
        let w = self.reduce(v);
        let Some(p) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(w[p]);
        let w: Vec<u8> = w.iter().map(|&x| f.mul(inv, x)).collect();
        for row in self.rows.iter_mut() {
            let c = row[p];
            if c != 0 {
                for (x, &r) in row.iter_mut().zip(&w) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, w);
        self.pivots.insert(at, p);
        true
    }

    /// Reduced rows, ordered by pivot.
    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Every normalized vector of the span, in combination order.
    pub fn normalized_span(&self) -> Vec<Vec<u8>> {
        let f = self.field;
        let r = self.rows.len();
        let q = f.order() as usize;
        let len = self.rows.first().map_or(0, Vec::len);
        let mut out = Vec::new();
        for lead in 0..r {
            let free = r - lead - 1;
            for code in 0..q.pow(free as u32) {
                let tail = vecops::decode(q as u32, free, code);
                let mut v = self.rows[lead].clone();
                for (t, row) in tail.iter().zip(&self.rows[lead + 1..]) {
                    if *t != 0 {
                        for (x, &y) in v.iter_mut().zip(row) {
                            *x = f.add(*x, f.mul(*t, y));
                        }
                    }
                }
                debug_assert_eq!(v.len(), len);
                out.push(v);
            }
        }
        out
    }
}

impl LinearRep {
    /// `coords` must be normalized and pairwise distinct.
    pub fn new(field: &'static GaloisField, ambient_dim: usize, coords: Vec<Vec<u8>>) -> LinearRep {
        let q = field.order() as usize;
        let mut lookup = vec![NONE; q.pow(ambient_dim as u32 + 1)];
        for (i, c) in coords.iter().enumerate() {
            debug_assert_eq!(c.len(), ambient_dim + 1);
            lookup[vecops::encode(q as u32, c)] = i as u32;
        }
        LinearRep {
            field,
            ambient_dim,
            coords,
            lookup,
        }
    }

    pub fn field(&self) -> &'static GaloisField {
        self.field
    }

    /// Projective dimension `n` of the coordinate space `K^(n+1)`.
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn coords(&self, i: usize) -> &[u8] {
        &self.coords[i]
    }

    pub fn all_coords(&self) -> &[Vec<u8>] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Index of the point spanned by `v` (any nonzero representative).
    pub fn index_of(&self, v: &[u8]) -> Option<usize> {
        if v.len() != self.ambient_dim + 1 {
            return None;
        }
        let n = vecops::normalize(self.field, v)?;
        self.index_of_normalized(&n)
    }

    pub fn index_of_normalized(&self, v: &[u8]) -> Option<usize> {
        let i = self.lookup[vecops::encode(self.field.order(), v)];
        (i != NONE).then_some(i as usize)
    }

    pub fn echelon<I: IntoIterator<Item = usize>>(&self, points: I) -> Echelon {
        let mut e = Echelon::new(self.field);
        for i in points {
            if e.rank() == self.ambient_dim + 1 {
                break;
            }
            e.insert(&self.coords[i]);
        }
        e
    }

    pub fn rank<I: IntoIterator<Item = usize>>(&self, points: I) -> usize {
        self.echelon(points).rank()
    }

    /// Member points in the span of an echelon basis.
    pub fn points_in_span(&self, e: &Echelon) -> PointSet {
        let n = self.coords.len();
        if e.rank() == self.ambient_dim + 1 {
            return PointSet::full(n);
        }
        let q = self.field.order() as usize;
        let span_size = (q.pow(e.rank() as u32) - 1) / (q - 1);
        let mut out = PointSet::empty(n);
        if span_size <= 2 * n {
            for v in e.normalized_span() {
                if let Some(i) = self.index_of_normalized(&v) {
                    out.insert(i);
                }
            }
        } else {
            for (i, c) in self.coords.iter().enumerate() {
                if e.contains(c) {
                    out.insert(i);
                }
            }
        }
        out
    }

    pub fn closure<I: IntoIterator<Item = usize>>(&self, points: I) -> PointSet {
        let e = self.echelon(points);
        self.points_in_span(&e)
    }
}

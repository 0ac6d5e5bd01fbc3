use crate::geometry::{FiniteGeometry, PointSet};
use crate::gf::{vecops, GaloisField, Matrix};

/// A vector subspace `W ⊆ K^len`, stored as a reduced row echelon basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearSubspace {
    field: &'static GaloisField,
    len: usize,
    basis: Vec<Vec<u8>>,
    pivots: Vec<usize>,
}

impl LinearSubspace {
    pub fn zero(field: &'static GaloisField, len: usize) -> LinearSubspace {
        LinearSubspace {
            field,
            len,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: &'static GaloisField, len: usize) -> LinearSubspace {
        let rows: Vec<Vec<u8>> = (0..len)
            .map(|i| (0..len).map(|j| u8::from(i == j)).collect())
            .collect();
        LinearSubspace::span(field, len, &rows)
    }

    /// Span of the given vectors.
    pub fn span(field: &'static GaloisField, len: usize, vectors: &[Vec<u8>]) -> LinearSubspace {
        if vectors.is_empty() {
            return LinearSubspace::zero(field, len);
        }
        let (m, pivots) = Matrix::from_rows(field, vectors).rref();
        LinearSubspace {
            field,
            len,
            basis: m.to_rows(),
            pivots,
        }
    }

    /// Span of the coordinate vectors of the given points of a linear geometry.
    pub fn of_points(g: &FiniteGeometry, points: &PointSet) -> LinearSubspace {
        let rep = g.linear_rep().expect("geometry with coordinates");
        let vecs: Vec<Vec<u8>> = points.iter().map(|i| rep.coords(i).to_vec()).collect();
        LinearSubspace::span(rep.field(), rep.ambient_dim() + 1, &vecs)
    }

    pub fn field(&self) -> &'static GaloisField {
        self.field
    }

    /// Length of the ambient vectors.
    pub fn ambient_len(&self) -> usize {
        self.len
    }

    /// Vector-space dimension.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Projective dimension `dim W - 1`.
    pub fn projective_dim(&self) -> isize {
        self.basis.len() as isize - 1
    }

    pub fn basis(&self) -> &[Vec<u8>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Non-pivot columns; their unit vectors span the canonical complement.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.len).filter(|c| !self.pivots.contains(c)).collect()
    }

    pub fn reduce(&self, v: &[u8]) -> Vec<u8> {
        let f = self.field;
        let mut w = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
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

    pub fn is_subspace_of(&self, other: &LinearSubspace) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &LinearSubspace) -> LinearSubspace {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        LinearSubspace::span(self.field, self.len, &rows)
    }

    pub fn intersection(&self, other: &LinearSubspace) -> LinearSubspace {
        // solve sum a_i u_i = sum b_j w_j
        let (a, b) = (self.dim(), other.dim());
        if a == 0 || b == 0 {
            return LinearSubspace::zero(self.field, self.len);
        }
        let f = self.field;
        let mut cols: Vec<Vec<u8>> = self.basis.clone();
        cols.extend(
            other
                .basis
                .iter()
                .map(|w| w.iter().map(|&x| f.neg(x)).collect()),
        );
        let m = Matrix::from_columns(f, self.len, &cols);
        let vecs: Vec<Vec<u8>> = m
            .kernel()
            .into_iter()
            .map(|k| {
                let mut v = vec![0u8; self.len];
                for (coef, u) in k[..a].iter().zip(&self.basis) {
                    v = vecops::add(f, &v, &vecops::scale(f, *coef, u));
                }
                v
            })
            .collect();
        LinearSubspace::span(f, self.len, &vecs)
    }

    /// Points of a linear geometry lying in `W`.
    pub fn points_in(&self, g: &FiniteGeometry) -> PointSet {
        let rep = g.linear_rep().expect("geometry with coordinates");
        PointSet::from_iter(
            g.len(),
            (0..g.len()).filter(|&i| self.contains(rep.coords(i))),
        )
    }

    /// Coordinates on `V/W` via the canonical complement.
    pub fn quotient_coords(&self) -> QuotientCoords {
        QuotientCoords {
            sub: self.clone(),
            free: self.free_columns(),
        }
    }
}

/// Coordinates on `V/W`: a class is represented by the reduction of any member
/// modulo the echelon basis of `W`, restricted to the free columns.
#[derive(Clone, Debug)]
pub struct QuotientCoords {
    sub: LinearSubspace,
    free: Vec<usize>,
}

impl QuotientCoords {
    pub fn subspace(&self) -> &LinearSubspace {
        &self.sub
    }

    pub fn free(&self) -> &[usize] {
        &self.free
    }

    /// Dimension of `V/W`.
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn project(&self, v: &[u8]) -> Vec<u8> {
        let r = self.sub.reduce(v);
        self.free.iter().map(|&c| r[c]).collect()
    }

    /// The section `V/W -> V` onto the canonical complement.
    pub fn lift(&self, u: &[u8]) -> Vec<u8> {
        let mut v = vec![0u8; self.sub.len];
        for (&c, &x) in self.free.iter().zip(u) {
            v[c] = x;
        }
        v
    }

    /// Matrix of `project`, of shape `dim(V/W) x len`.
    pub fn projection_matrix(&self) -> Matrix {
        let f = self.sub.field;
        let mut q = Matrix::zeros(f, self.free.len(), self.sub.len);
        for (r, &c) in self.free.iter().enumerate() {
            q.set(r, c, 1);
            for (row, &p) in self.sub.basis.iter().zip(&self.sub.pivots) {
                q.set(r, p, f.neg(row[c]));
            }
        }
        q
    }

    /// Matrix of `lift`, of shape `len x dim(V/W)`.
    pub fn section_matrix(&self) -> Matrix {
        let mut s = Matrix::zeros(self.sub.field, self.sub.len, self.free.len());
        for (r, &c) in self.free.iter().enumerate() {
            s.set(c, r, 1);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_coords_round_trip() {
        let f = GaloisField::get(3).unwrap();
        let w = LinearSubspace::span(f, 4, &[vec![1, 2, 0, 1], vec![0, 1, 1, 2]]);
        let qc = w.quotient_coords();
        assert_eq!(qc.dim(), 2);
        let q = qc.projection_matrix();
        let v = vec![2, 1, 1, 0];
        assert_eq!(q.mul_vec(&v), qc.project(&v));
        for b in w.basis() {
            assert!(vecops::is_zero(&qc.project(b)));
        }
        let u = vec![1, 2];
        assert_eq!(qc.project(&qc.lift(&u)), u);
        assert_eq!(q.mul(&qc.section_matrix()), Matrix::identity(f, 2));
    }

    #[test]
    fn sum_and_intersection() {
        let f = GaloisField::get(2).unwrap();
        let a = LinearSubspace::span(
            f,
            4,
            &[vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0]],
        );
        let b = LinearSubspace::span(
            f,
            4,
            &[vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]],
        );
        assert_eq!(a.intersection(&b).dim(), 2);
        assert_eq!(a.sum(&b).dim(), 4);
        assert!(a.intersection(&b).is_subspace_of(&a));
    }
}

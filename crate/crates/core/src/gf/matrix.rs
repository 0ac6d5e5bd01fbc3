//! Dense matrices over a [`GaloisField`], stored row-major as element codes.

use std::fmt;

use super::field::GaloisField;
use super::hom::FieldHom;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: &'static GaloisField,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Matrix over {} ({}x{})",
            self.field, self.rows, self.cols
        )?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: &'static GaloisField, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &'static GaloisField, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: &'static GaloisField, rows: &[Vec<u8>]) -> Matrix {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix {
            field,
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: &'static GaloisField, len: usize, cols: &[Vec<u8>]) -> Matrix {
        let mut m = Matrix::zeros(field, len, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), len);
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn field(&self) -> &'static GaloisField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u8> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul_vec(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(v.len(), self.cols);
        let f = self.field;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.field, other.field);
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn scale(&self, lambda: u8) -> Matrix {
        let f = self.field;
        Matrix {
            data: self.data.iter().map(|&x| f.mul(lambda, x)).collect(),
            ..self.clone()
        }
    }

    /// Apply a field hom entrywise, landing in its target field.
    pub fn map_entries(&self, hom: &FieldHom) -> Matrix {
        assert_eq!(hom.source(), self.field);
        Matrix {
            field: hom.target(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| hom.apply(x)).collect(),
        }
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self.get(r, c));
            for j in 0..self.cols {
                let v = f.mul(inv, self.get(r, j));
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in 0..self.cols {
                    let v = f.sub(self.get(i, j), f.mul(factor, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Nonzero rows of the reduced row echelon form, with pivots.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        m.data.truncate(pivots.len() * m.cols);
        m.rows = pivots.len();
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<u8>> {
        let f = self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0u8; self.cols];
                v[fc] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r.get(i, fc));
                }
                v
            })
            .collect()
    }

    /// Some `x` with `self * x = b`, if one exists.
    pub fn solve(&self, b: &[u8]) -> Option<Vec<u8>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u8; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(i, self.cols);
        }
        Some(x)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }
}

/// Vector helpers shared by the geometry code.
pub mod vecops {
    use crate::gf::GaloisField;

    pub fn is_zero(v: &[u8]) -> bool {
        v.iter().all(|&x| x == 0)
    }

    /// Scale so the leftmost nonzero entry is 1. `None` for the zero vector.
    pub fn normalize(f: &GaloisField, v: &[u8]) -> Option<Vec<u8>> {
        let lead = *v.iter().find(|&&x| x != 0)?;
        let inv = f.inv(lead);
        Some(v.iter().map(|&x| f.mul(inv, x)).collect())
    }

    pub fn add(f: &GaloisField, a: &[u8], b: &[u8]) -> Vec<u8> {
        a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
    }

    pub fn sub(f: &GaloisField, a: &[u8], b: &[u8]) -> Vec<u8> {
        a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
    }

    pub fn scale(f: &GaloisField, lambda: u8, v: &[u8]) -> Vec<u8> {
        v.iter().map(|&x| f.mul(lambda, x)).collect()
    }

    /// `Some(lambda)` with `b = lambda * a`, for nonzero `a`.
    pub fn ratio(f: &GaloisField, a: &[u8], b: &[u8]) -> Option<u8> {
        let i = a.iter().position(|&x| x != 0)?;
        let lambda = f.div(b[i], a[i]);
        a.iter()
            .zip(b)
            .all(|(&x, &y)| f.mul(lambda, x) == y)
            .then_some(lambda)
    }

    /// Base-`q` integer encoding of a vector of codes.
    pub fn encode(q: u32, v: &[u8]) -> usize {
        v.iter()
            .rev()
            .fold(0usize, |acc, &c| acc * q as usize + c as usize)
    }

    pub fn decode(q: u32, len: usize, mut code: usize) -> Vec<u8> {
        (0..len)
            .map(|_| {
                let c = (code % q as usize) as u8;
                code /= q as usize;
                c
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_rank() {
        let f = GaloisField::get(3).unwrap();
        let m = Matrix::from_rows(f, &[vec![1, 2, 0, 1], vec![2, 1, 0, 2]]);
        assert_eq!(m.rank(), 1);
        let ker = m.kernel();
        assert_eq!(ker.len(), 3);
        for v in &ker {
            assert!(vecops::is_zero(&m.mul_vec(v)));
        }
    }

    #[test]
    fn solve_round_trip() {
        let f = GaloisField::get(4).unwrap();
        let m = Matrix::from_rows(f, &[vec![1, 2, 3], vec![0, 1, 2], vec![3, 0, 1]]);
        let x = vec![2, 3, 1];
        let b = m.mul_vec(&x);
        let y = m.solve(&b).unwrap();
        assert_eq!(m.mul_vec(&y), b);
        let singular = Matrix::from_rows(f, &[vec![1, 1], vec![1, 1]]);
        assert!(singular.solve(&[1, 0]).is_none());
    }

    #[test]
    fn normalize_and_ratio() {
        let f = GaloisField::get(5).unwrap();
        assert_eq!(vecops::normalize(f, &[0, 3, 1]), Some(vec![0, 1, 2]));
        assert_eq!(vecops::normalize(f, &[0, 0]), None);
        assert_eq!(vecops::ratio(f, &[1, 2], &[2, 4]), Some(2));
        assert_eq!(vecops::ratio(f, &[1, 2], &[2, 3]), None);
        let v = vec![4, 0, 3];
        assert_eq!(vecops::decode(5, 3, vecops::encode(5, &v)), v);
    }
}

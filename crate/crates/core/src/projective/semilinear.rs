use rand::Rng;

use super::{LinearSubspace, ProjectiveError};
use crate::geometry::{FiniteGeometry, PartialMorphism};
use crate::gf::{vecops, FieldHom, GaloisField, Matrix};

/// `Φ(v) = M · σ(v)`: apply `σ` coordinatewise, then the matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemilinearMap {
    sigma: FieldHom,
    matrix: Matrix,
}

impl SemilinearMap {
    pub fn new(sigma: FieldHom, matrix: Matrix) -> Result<SemilinearMap, ProjectiveError> {
        if matrix.field() != sigma.target() {
            return Err(ProjectiveError::FieldMismatch);
        }
        Ok(SemilinearMap { sigma, matrix })
    }

    pub fn linear(matrix: Matrix) -> SemilinearMap {
        SemilinearMap {
            sigma: FieldHom::identity(matrix.field()),
            matrix,
        }
    }

    pub fn sigma(&self) -> &FieldHom {
        &self.sigma
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn source_field(&self) -> &'static GaloisField {
        self.sigma.source()
    }

    pub fn target_field(&self) -> &'static GaloisField {
        self.sigma.target()
    }

    /// Length of source vectors, `n + 1`.
    pub fn source_len(&self) -> usize {
        self.matrix.cols()
    }

    /// Length of target vectors, `m + 1`.
    pub fn target_len(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn apply_vec(&self, v: &[u8]) -> Vec<u8> {
        let twisted: Vec<u8> = v.iter().map(|&x| self.sigma.apply(x)).collect();
        self.matrix.mul_vec(&twisted)
    }

    /// Normalized image of `⟨v⟩`, `None` when `v ∈ ker Φ`.
    pub fn apply_point(&self, v: &[u8]) -> Option<Vec<u8>> {
        vecops::normalize(self.target_field(), &self.apply_vec(v))
    }

    /// `later ∘ self`.
    pub fn then(&self, later: &SemilinearMap) -> Result<SemilinearMap, ProjectiveError> {
        let sigma = later
            .sigma
            .after(&self.sigma)
            .ok_or(ProjectiveError::FieldMismatch)?;
        if later.source_len() != self.target_len() {
            return Err(ProjectiveError::ShapeMismatch);
        }
        let matrix = later.matrix.mul(&self.matrix.map_entries(&later.sigma));
        Ok(SemilinearMap { sigma, matrix })
    }

    pub fn scale(&self, lambda: u8) -> SemilinearMap {
        SemilinearMap {
            sigma: self.sigma.clone(),
            matrix: self.matrix.scale(lambda),
        }
    }

    /// Scaled so the first nonzero entry in row-major order is 1.
    pub fn canonical(&self) -> SemilinearMap {
        match self.matrix.data().iter().find(|&&x| x != 0) {
            Some(&lead) => self.scale(self.target_field().inv(lead)),
            None => self.clone(),
        }
    }

    /// The scalar applied by [`SemilinearMap::canonical`].
    pub fn canonical_factor(&self) -> u8 {
        self.matrix
            .data()
            .iter()
            .find(|&&x| x != 0)
            .map_or(1, |&lead| self.target_field().inv(lead))
    }

    /// `λ` with `other = λ · self`; requires equal `σ`.
    pub fn proportional(&self, other: &SemilinearMap) -> Option<u8> {
        if self.sigma != other.sigma
            || self.matrix.rows() != other.matrix.rows()
            || self.matrix.cols() != other.matrix.cols()
        {
            return None;
        }
        if self.is_zero() {
            return other.is_zero().then_some(1);
        }
        let lambda = vecops::ratio(self.target_field(), self.matrix.data(), other.matrix.data())?;
        (lambda != 0).then_some(lambda)
    }

    /// Kernel, by `F_p`-linear elimination on the `k(n+1)` prime-field coordinates.
    pub fn kernel(&self) -> LinearSubspace {
        let (k_src, k_tgt) = (self.source_field(), self.target_field());
        let p = k_src.characteristic();
        let fp = GaloisField::get(p).expect("prime field");
        let (deg, deg_t) = (k_src.degree() as usize, k_tgt.degree() as usize);
        let (n1, m1) = (self.source_len(), self.target_len());
        let mut cols = Vec::with_capacity(n1 * deg);
        for i in 0..n1 {
            for j in 0..deg {
                let mut unit = vec![0u8; deg];
                unit[j] = 1;
                let mut e = vec![0u8; n1];
                e[i] = k_src.from_coeffs(&unit);
                let img = self.apply_vec(&e);
                let col: Vec<u8> = img.iter().flat_map(|&y| k_tgt.coeffs(y)).collect();
                debug_assert_eq!(col.len(), m1 * deg_t);
                cols.push(col);
            }
        }
        let a = Matrix::from_columns(fp, m1 * deg_t, &cols);
        let vecs: Vec<Vec<u8>> = a
            .kernel()
            .into_iter()
            .map(|kv| {
                (0..n1)
                    .map(|i| k_src.from_coeffs(&kv[i * deg..(i + 1) * deg]))
                    .collect()
            })
            .collect();
        LinearSubspace::span(k_src, n1, &vecs)
    }

    /// Additivity on basis pairs and `Φ(λv) = σ(λ)Φ(v)` for basis vectors and
    /// every scalar, plus the exhaustive homomorphism check on `σ`.
    pub fn verify(&self) -> bool {
        let (ks, kt) = (self.source_field(), self.target_field());
        if !self.sigma.verify() {
            return false;
        }
        let n1 = self.source_len();
        let unit = |i: usize| -> Vec<u8> { (0..n1).map(|j| u8::from(i == j)).collect() };
        for i in 0..n1 {
            let e = unit(i);
            let fe = self.apply_vec(&e);
            for lambda in ks.elements() {
                let lv = vecops::scale(ks, lambda, &e);
                if self.apply_vec(&lv) != vecops::scale(kt, self.sigma.apply(lambda), &fe) {
                    return false;
                }
            }
            for j in 0..n1 {
                let s = vecops::add(ks, &e, &unit(j));
                if self.apply_vec(&s) != vecops::add(kt, &fe, &self.apply_vec(&unit(j))) {
                    return false;
                }
            }
        }
        true
    }

    /// Uniform random matrix with the given `σ`.
    pub fn random<R: Rng>(rng: &mut R, sigma: FieldHom, rows: usize, cols: usize) -> SemilinearMap {
        let q = sigma.target().order();
        let mut m = Matrix::zeros(sigma.target(), rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, rng.gen_range(0..q) as u8);
            }
        }
        SemilinearMap { sigma, matrix: m }
    }

    /// Random square map of full rank.
    pub fn random_invertible<R: Rng>(rng: &mut R, sigma: FieldHom, n: usize) -> SemilinearMap {
        loop {
            let phi = SemilinearMap::random(rng, sigma.clone(), n, n);
            if phi.matrix.rank() == n {
                return phi;
            }
        }
    }
}

/// The projectivization of a nonzero semilinear map, undefined on `P(ker Φ)`.
#[derive(Clone, Debug)]
pub struct ProjPartialMap {
    pub source_dim: usize,
    pub target_dim: usize,
    pub underlying: SemilinearMap,
    pub exceptional: LinearSubspace,
}

/// Images of the points of a linear geometry, as indices into `target`;
/// `None` on kernel points.
pub fn point_map(
    phi: &SemilinearMap,
    source: &FiniteGeometry,
    target: &FiniteGeometry,
) -> Result<Vec<Option<usize>>, ProjectiveError> {
    let rs = source.linear_rep().ok_or(ProjectiveError::NotLinear)?;
    let rt = target.linear_rep().ok_or(ProjectiveError::NotLinear)?;
    if rs.field() != phi.source_field() || rt.field() != phi.target_field() {
        return Err(ProjectiveError::FieldMismatch);
    }
    if rs.ambient_dim() + 1 != phi.source_len() || rt.ambient_dim() + 1 != phi.target_len() {
        return Err(ProjectiveError::ShapeMismatch);
    }
    (0..source.len())
        .map(|i| match phi.apply_point(rs.coords(i)) {
            None => Ok(None),
            Some(w) => rt
                .index_of_normalized(&w)
                .map(Some)
                .ok_or(ProjectiveError::ImageOutsideTarget(i)),
        })
        .collect()
}

/// The partial map `P(V) ⇢ P(V')` of a nonzero `Φ`, validated as a partial
/// morphism of the given coordinate geometries.
pub fn induced_partial(
    phi: &SemilinearMap,
    source: &FiniteGeometry,
    target: &FiniteGeometry,
) -> Result<(ProjPartialMap, PartialMorphism), ProjectiveError> {
    if phi.is_zero() {
        return Err(ProjectiveError::ZeroMap);
    }
    let map = point_map(phi, source, target)?;
    let pm = PartialMorphism::new(source.clone(), target.clone(), map)?;
    let exceptional = phi.kernel();
    debug_assert_eq!(&exceptional.points_in(source), pm.exceptional());
    Ok((
        ProjPartialMap {
            source_dim: phi.source_len() - 1,
            target_dim: phi.target_len() - 1,
            underlying: phi.clone(),
            exceptional,
        },
        pm,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::build_pg;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn frobenius_on_gf4_point() {
        let f = GaloisField::get(4).unwrap();
        let phi = SemilinearMap::new(FieldHom::frobenius(f, 1), Matrix::identity(f, 4)).unwrap();
        assert_eq!(phi.apply_point(&[1, 2, 0, 0]), Some(vec![1, 3, 0, 0]));
    }

    #[test]
    fn projection_kernel_is_last_point() {
        let f = GaloisField::get(3).unwrap();
        let mut m = Matrix::identity(f, 4);
        m.set(3, 3, 0);
        let phi = SemilinearMap::linear(m);
        let ker = phi.kernel();
        assert_eq!(ker.basis(), &[vec![0, 0, 0, 1]]);
        let pg = build_pg(3, f).unwrap();
        let (pp, pm) = induced_partial(&phi, &pg, &pg).unwrap();
        assert_eq!(pm.exceptional().len(), 1);
        assert_eq!(pp.exceptional.dim(), 1);
        assert!(phi.apply_point(&[0, 0, 0, 1]).is_none());
    }

    #[test]
    fn twisted_kernel_matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (s, t) = (GaloisField::get(4).unwrap(), GaloisField::get(16).unwrap());
        for hom in crate::gf::list_homomorphisms(s, t) {
            for _ in 0..10 {
                let mut phi = SemilinearMap::random(&mut rng, hom.clone(), 3, 4);
                phi.matrix.set(2, 0, 0);
                let ker = phi.kernel();
                let pg = build_pg(3, s).unwrap();
                for i in pg.points() {
                    let v = pg.coords(i).unwrap();
                    assert_eq!(ker.contains(v), vecops::is_zero(&phi.apply_vec(v)));
                }
            }
        }
    }

    #[test]
    fn composition_and_proportional() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = GaloisField::get(9).unwrap();
        let a = SemilinearMap::random(&mut rng, FieldHom::frobenius(f, 1), 3, 3);
        let b = SemilinearMap::random(&mut rng, FieldHom::frobenius(f, 1), 3, 3);
        let ba = a.then(&b).unwrap();
        assert!(ba.sigma().is_identity());
        let v = vec![1, 5, 7];
        assert_eq!(ba.apply_vec(&v), b.apply_vec(&a.apply_vec(&v)));
        assert!(ba.verify());
        assert_eq!(a.proportional(&a), Some(1));
        let f5 = GaloisField::get(5).unwrap();
        let c = SemilinearMap::random_invertible(&mut rng, FieldHom::identity(f5), 3);
        assert_eq!(c.proportional(&c.scale(2)), Some(2));
        let g = SemilinearMap::new(FieldHom::identity(f), a.matrix().clone()).unwrap();
        assert_eq!(a.proportional(&g), None);
        assert_eq!(c.scale(3).canonical(), c.canonical());
    }
}

use serde::Serialize;

use super::ReconstructError;
use crate::geometry::{FiniteGeometry, PartialMorphism};
use crate::gf::{vecops, FieldHom, GaloisField, Matrix};
use crate::projective::{LinearSubspace, SemilinearMap};

/// Output of [`reconstruct_ftpg`].
#[derive(Clone, Debug, Serialize)]
pub struct FtpgResult {
    #[serde(skip)]
    pub phi: SemilinearMap,
    #[serde(skip)]
    pub exceptional: LinearSubspace,
    pub sigma_power: u32,
    /// Source points of the basis `e_0 .. e_d`, then the sums `e_j + e_i` used
    /// to fix the scalars.
    pub frame: Vec<usize>,
    pub verified_points: usize,
}

/// Full coordinatized projective space: linear and not a proper subgeometry.
pub(super) fn require_full_pg(
    g: &FiniteGeometry,
) -> Result<&crate::geometry::LinearRep, ReconstructError> {
    let rep = g.linear_rep().ok_or(ReconstructError::NotFullProjective)?;
    let q = rep.field().order() as usize;
    let full = (q.pow(rep.ambient_dim() as u32 + 1) - 1) / (q - 1);
    if g.len() != full {
        return Err(ReconstructError::NotFullProjective);
    }
    Ok(rep)
}

/// Coefficients of `y` in the basis `cols`, if it lies in their span.
fn coefficients(f: &'static GaloisField, cols: &[Vec<u8>], y: &[u8]) -> Option<Vec<u8>> {
    Matrix::from_columns(f, y.len(), cols).solve(y)
}

/// The semilinear map behind a partial morphism `ψ: PG(n, K) ⇢ PG(m, K')`
/// whose image is not contained in a line.
pub fn reconstruct_ftpg(psi: &PartialMorphism) -> Result<FtpgResult, ReconstructError> {
    reconstruct_ftpg_with_frame(psi, None)
}

/// As [`reconstruct_ftpg`], with the frame basis taken in the order `perm`
/// of the canonical complement's columns.
pub fn reconstruct_ftpg_with_frame(
    psi: &PartialMorphism,
    perm: Option<&[usize]>,
) -> Result<FtpgResult, ReconstructError> {
    let src = require_full_pg(psi.source())?;
    let tgt = require_full_pg(psi.target())?;
    let (k, kp) = (src.field(), tgt.field());
    let n1 = src.ambient_dim() + 1;
    let m1 = tgt.ambient_dim() + 1;
    let source = psi.source();

    let undefined = psi.exceptional();
    if !source.is_flat(undefined) {
        return Err(ReconstructError::ExceptionalNotFlat(undefined.to_vec()));
    }
    let e = LinearSubspace::of_points(source, undefined);
    let mut free = e.free_columns();
    if let Some(p) = perm {
        if p.len() != free.len() {
            return Err(ReconstructError::BadInstance(format!(
                "frame permutation needs {} entries",
                free.len()
            )));
        }
        free = p.iter().map(|&i| free[i]).collect();
    }
    if free.len() < 3 {
        return Err(ReconstructError::ImageInLine);
    }
    let unit = |c: usize| -> Vec<u8> { (0..n1).map(|j| u8::from(j == c)).collect() };
    let image_of = |v: &[u8]| -> Result<Vec<u8>, ReconstructError> {
        let x = src.index_of(v).expect("nonzero vector");
        let y = psi.apply(x).ok_or_else(|| {
            ReconstructError::InternalContradiction(format!(
                "point {x} off the exceptional flat is undefined"
            ))
        })?;
        Ok(tgt.coords(y).to_vec())
    };

    let w: Vec<Vec<u8>> = free
        .iter()
        .map(|&c| image_of(&unit(c)))
        .collect::<Result<_, _>>()?;
    if Matrix::from_columns(kp, m1, &w).rank() < 3 {
        return Err(ReconstructError::ImageInLine);
    }
    // Over a proper extension the images of a basis may be dependent, so the
    // scalars a_i with Φ(e_i) = a_i w_i come from sums e_i + e_j whose two
    // summands have distinct images.
    let distinct = |i: usize, j: usize| {
        Matrix::from_columns(kp, m1, &[w[i].clone(), w[j].clone()]).rank() == 2
    };
    let j1 = (1..w.len())
        .find(|&j| distinct(0, j))
        .expect("rank at least 3");
    let sum = |i: usize, j: usize, lambda: u8| -> Vec<u8> {
        let mut v = unit(free[i]);
        v[free[j]] = lambda;
        v
    };
    // coefficients (c_i, c_j) of ψ(e_i + λ e_j) in the basis w_i, w_j
    let pair_coeffs = |i: usize, j: usize, lambda: u8| -> Result<(u8, u8), ReconstructError> {
        let y = image_of(&sum(i, j, lambda))?;
        coefficients(kp, &[w[i].clone(), w[j].clone()], &y)
            .filter(|c| c[0] != 0)
            .map(|c| (c[0], c[1]))
            .ok_or_else(|| {
                ReconstructError::InternalContradiction(format!(
                    "image of e{i} + {lambda} e{j} leaves the line"
                ))
            })
    };

    let mut a: Vec<Option<u8>> = vec![None; w.len()];
    a[0] = Some(1);
    let (c0, c1) = pair_coeffs(0, j1, 1)?;
    let a1 = kp.div(c1, c0);
    a[j1] = Some(a1);
    let mut pairs = vec![(0, j1)];

    // σ from ψ⟨e_0 + λ e_j1⟩ = ⟨w_0 + σ(λ) a_j1 w_j1⟩
    let mut table = vec![0u8; k.order() as usize];
    for lambda in k.elements() {
        let (c0, c1) = pair_coeffs(0, j1, lambda)?;
        table[lambda as usize] = kp.div(kp.div(c1, c0), a1);
    }
    let sigma = FieldHom::from_table(k, kp, table).ok_or(ReconstructError::SigmaNotHomomorphism)?;
    if !sigma.verify() {
        return Err(ReconstructError::SigmaNotHomomorphism);
    }

    while a.iter().any(Option::is_none) {
        let next = (0..w.len()).filter(|&i| a[i].is_none()).find_map(|i| {
            (0..w.len())
                .find(|&j| a[j].is_some() && distinct(j, i))
                .map(|j| (j, i))
        });
        let Some((j, i)) = next else {
            return Err(ReconstructError::InternalContradiction(
                "frame images are not connected".into(),
            ));
        };
        let (cj, ci) = pair_coeffs(j, i, 1)?;
        a[i] = Some(kp.mul(a[j].unwrap(), kp.div(ci, cj)));
        pairs.push((j, i));
    }
    let v2: Vec<Vec<u8>> = w
        .iter()
        .zip(&a)
        .map(|(wi, ai)| vecops::scale(kp, ai.unwrap(), wi))
        .collect();

    let mut m = Matrix::zeros(kp, m1, n1);
    for (&c, col) in free.iter().zip(&v2) {
        for (r, &x) in col.iter().enumerate() {
            m.set(r, c, x);
        }
    }
    // columns on the pivots of E make every basis vector of E vanish
    for (row, &p) in e.basis().iter().zip(e.pivots()) {
        let mut col = vec![0u8; m1];
        for (&c, vc) in free.iter().zip(&v2) {
            let s = sigma.apply(row[c]);
            if s != 0 {
                col = vecops::sub(kp, &col, &vecops::scale(kp, s, vc));
            }
        }
        for (r, &x) in col.iter().enumerate() {
            m.set(r, p, x);
        }
    }
    let phi = SemilinearMap::new(sigma.clone(), m)?.canonical();

    for x in source.points() {
        let got = phi
            .apply_point(src.coords(x))
            .map(|v| tgt.index_of_normalized(&v).expect("normalized"));
        if got != psi.apply(x) {
            return Err(ReconstructError::VerificationFailed {
                point: x,
                stage: "ftpg".into(),
            });
        }
    }
    let mut frame: Vec<usize> = free
        .iter()
        .map(|&c| src.index_of(&unit(c)).unwrap())
        .collect();
    frame.extend(
        pairs
            .iter()
            .map(|&(j, i)| src.index_of(&sum(j, i, 1)).unwrap()),
    );
    Ok(FtpgResult {
        exceptional: phi.kernel(),
        sigma_power: sigma.frobenius_power(),
        phi,
        frame,
        verified_points: source.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::list_homomorphisms;
    use crate::projective::{build_pg, induced_partial, LinearSubspace};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(q: u32) -> &'static GaloisField {
        GaloisField::get(q).unwrap()
    }

    #[test]
    fn identity_and_frobenius() {
        let pg = build_pg(3, gf(2)).unwrap();
        let id = SemilinearMap::linear(Matrix::identity(gf(2), 4));
        let (_, pm) = induced_partial(&id, &pg, &pg).unwrap();
        let r = reconstruct_ftpg(&pm).unwrap();
        assert_eq!(r.phi, id);
        assert_eq!(r.sigma_power, 0);

        let pg4 = build_pg(3, gf(4)).unwrap();
        let frob =
            SemilinearMap::new(FieldHom::frobenius(gf(4), 1), Matrix::identity(gf(4), 4)).unwrap();
        let (_, pm) = induced_partial(&frob, &pg4, &pg4).unwrap();
        let r = reconstruct_ftpg(&pm).unwrap();
        assert_eq!(r.phi, frob);
        assert_eq!(r.sigma_power, 1);
    }

    #[test]
    fn projection_from_a_point() {
        let (p3, p2) = (build_pg(3, gf(3)).unwrap(), build_pg(2, gf(3)).unwrap());
        let w = LinearSubspace::span(gf(3), 4, &[vec![1, 2, 0, 1]]);
        let q = w.quotient_coords().projection_matrix();
        let phi = SemilinearMap::linear(q);
        let (_, pm) = induced_partial(&phi, &p3, &p2).unwrap();
        let r = reconstruct_ftpg(&pm).unwrap();
        assert!(phi.proportional(&r.phi).is_some());
        assert_eq!(r.exceptional, w);
        assert_eq!(r.phi.matrix().rank(), 3);
    }

    #[test]
    fn frame_permutations_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (pg2, pg4) = (build_pg(3, gf(2)).unwrap(), build_pg(3, gf(4)).unwrap());
        for sigma in list_homomorphisms(gf(2), gf(4)) {
            let phi = SemilinearMap::random_invertible(&mut rng, sigma, 4);
            let (_, pm) = induced_partial(&phi, &pg2, &pg4).unwrap();
            let a = reconstruct_ftpg(&pm).unwrap();
            let b = reconstruct_ftpg_with_frame(&pm, Some(&[3, 1, 0, 2])).unwrap();
            assert_eq!(a.phi, b.phi);
            assert!(phi.proportional(&a.phi).is_some());
        }
    }

    #[test]
    fn image_in_line_rejected() {
        let (p3, p1) = (build_pg(3, gf(2)).unwrap(), build_pg(1, gf(2)).unwrap());
        let m = Matrix::from_rows(gf(2), &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
        let (_, pm) = induced_partial(&SemilinearMap::linear(m), &p3, &p1).unwrap();
        assert!(matches!(
            reconstruct_ftpg(&pm),
            Err(ReconstructError::ImageInLine)
        ));
    }
}

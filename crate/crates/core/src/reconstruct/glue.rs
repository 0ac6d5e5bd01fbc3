use serde::Serialize;

use super::ReconstructError;
use crate::gf::{vecops, GaloisField, Matrix};
use crate::projective::{LinearSubspace, QuotientCoords, SemilinearMap};

/// Two independent vectors `v1, v2` of `V` and their images `v1', v2'`, with
/// the coordinates of every quotient involved.
#[derive(Clone, Debug)]
pub struct QuotientFrame {
    pub v: [Vec<u8>; 2],
    pub vp: [Vec<u8>; 2],
    src: [QuotientCoords; 2],
    tgt: [QuotientCoords; 2],
    tgt12: QuotientCoords,
}

impl QuotientFrame {
    pub fn new(
        k: &'static GaloisField,
        kp: &'static GaloisField,
        v: [Vec<u8>; 2],
        vp: [Vec<u8>; 2],
    ) -> Result<QuotientFrame, ReconstructError> {
        let (n1, m1) = (v[0].len(), vp[0].len());
        let sp = |f, len, vs: &[Vec<u8>]| LinearSubspace::span(f, len, vs);
        if sp(k, n1, &v).dim() != 2 || sp(kp, m1, &vp).dim() != 2 {
            return Err(ReconstructError::BadInstance(
                "base vectors must be independent".into(),
            ));
        }
        Ok(QuotientFrame {
            src: [
                sp(k, n1, &v[..1]).quotient_coords(),
                sp(k, n1, &v[1..]).quotient_coords(),
            ],
            tgt: [
                sp(kp, m1, &vp[..1]).quotient_coords(),
                sp(kp, m1, &vp[1..]).quotient_coords(),
            ],
            tgt12: sp(kp, m1, &vp).quotient_coords(),
            v,
            vp,
        })
    }

    /// `Φ_i` on a vector of `V`, lifted to `V'` through the canonical section.
    fn lifted(&self, i: usize, phi: &SemilinearMap, x: &[u8]) -> Vec<u8> {
        self.tgt[i].lift(&phi.apply_vec(&self.src[i].project(x)))
    }

    /// The reduction `V → V'/⟨v1', v2'⟩` of `Φ_i`, on the unit vectors of `V`.
    fn reduction(&self, i: usize, phi: &SemilinearMap) -> Vec<Vec<u8>> {
        let n1 = self.v[0].len();
        (0..n1)
            .map(|j| {
                let e: Vec<u8> = (0..n1).map(|c| u8::from(c == j)).collect();
                self.tgt12.project(&self.lifted(i, phi, &e))
            })
            .collect()
    }

    /// `Φ_i` read off a map `Φ` with `Φ(v_i) ∈ ⟨v_i'⟩`, in quotient coordinates.
    pub fn reduce_map(&self, phi: &SemilinearMap, i: usize) -> SemilinearMap {
        let (s, t) = (&self.src[i], &self.tgt[i]);
        let cols: Vec<Vec<u8>> = (0..s.dim())
            .map(|c| {
                let e: Vec<u8> = (0..s.dim()).map(|j| u8::from(j == c)).collect();
                t.project(&phi.apply_vec(&s.lift(&e)))
            })
            .collect();
        SemilinearMap::new(
            phi.sigma().clone(),
            Matrix::from_columns(phi.target_field(), t.dim(), &cols),
        )
        .expect("same fields")
    }
}

/// `λ` with `λ Φ̄_1 = Φ̄_2` on `V/⟨v1, v2⟩`, and `λ Φ_1`.
pub fn normalize_pair(
    phi1: &SemilinearMap,
    phi2: &SemilinearMap,
    frame: &QuotientFrame,
) -> Result<(SemilinearMap, u8), ReconstructError> {
    if phi1.sigma() != phi2.sigma() {
        return Err(ReconstructError::NotProportional);
    }
    let kp = phi1.target_field();
    let r1: Vec<u8> = frame.reduction(0, phi1).concat();
    let r2: Vec<u8> = frame.reduction(1, phi2).concat();
    let lambda = vecops::ratio(kp, &r1, &r2)
        .filter(|&l| l != 0)
        .ok_or(ReconstructError::NotProportional)?;
    if vecops::scale(kp, lambda, &r1) != r2 {
        return Err(ReconstructError::NotProportional);
    }
    Ok((phi1.scale(lambda), lambda))
}

/// The unique `Φ: V → V'` reducing to `Φ_1` modulo `⟨v1⟩, ⟨v1'⟩` and to `Φ_2`
/// modulo `⟨v2⟩, ⟨v2'⟩`. The reductions of `Φ_1, Φ_2` to `V/⟨v1, v2⟩` must
/// already agree exactly.
pub fn glue_fibred_product(
    phi1: &SemilinearMap,
    phi2: &SemilinearMap,
    frame: &QuotientFrame,
) -> Result<SemilinearMap, ReconstructError> {
    if phi1.sigma() != phi2.sigma() {
        return Err(ReconstructError::ReductionsDisagree);
    }
    let kp = phi1.target_field();
    let n1 = frame.v[0].len();
    let m1 = frame.vp[0].len();
    let pair = Matrix::from_columns(kp, m1, &frame.vp);
    let mut m = Matrix::zeros(kp, m1, n1);
    for j in 0..n1 {
        let e: Vec<u8> = (0..n1).map(|c| u8::from(c == j)).collect();
        let a = frame.lifted(0, phi1, &e);
        let b = frame.lifted(1, phi2, &e);
        if frame.tgt12.project(&a) != frame.tgt12.project(&b) {
            return Err(ReconstructError::ReductionsDisagree);
        }
        let st = pair
            .solve(&vecops::sub(kp, &a, &b))
            .ok_or(ReconstructError::LiftInconsistent)?;
        let w = vecops::sub(kp, &a, &vecops::scale(kp, st[0], &frame.vp[0]));
        for (r, &x) in w.iter().enumerate() {
            m.set(r, j, x);
        }
    }
    let phi = SemilinearMap::new(phi1.sigma().clone(), m)?;
    // the kernel of Φ projects into the kernels of Φ_1 and Φ_2
    for k in phi.kernel().basis() {
        for (i, phi_i) in [phi1, phi2].into_iter().enumerate() {
            if !vecops::is_zero(&phi_i.apply_vec(&frame.src[i].project(k))) {
                return Err(ReconstructError::LiftInconsistent);
            }
        }
    }
    for (i, phi_i) in [phi1, phi2].into_iter().enumerate() {
        for j in 0..n1 {
            let e: Vec<u8> = (0..n1).map(|c| u8::from(c == j)).collect();
            if frame.tgt[i].project(&phi.apply_vec(&e))
                != phi_i.apply_vec(&frame.src[i].project(&e))
            {
                return Err(ReconstructError::LiftInconsistent);
            }
        }
    }
    Ok(phi)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FibredReport {
    pub domain: usize,
    pub product: usize,
    pub injective: bool,
    pub surjective: bool,
}

/// Enumerates `v ↦ ([v]_1, [v]_2)` from `K^len` into
/// `V/⟨v1⟩ ×_{V/⟨v1,v2⟩} V/⟨v2⟩`.
pub fn fibred_product_bijection(f: &'static GaloisField, v1: &[u8], v2: &[u8]) -> FibredReport {
    let len = v1.len();
    let q = f.order();
    let c1 = LinearSubspace::span(f, len, &[v1.to_vec()]).quotient_coords();
    let c2 = LinearSubspace::span(f, len, &[v2.to_vec()]).quotient_coords();
    let c12 = LinearSubspace::span(f, len, &[v1.to_vec(), v2.to_vec()]).quotient_coords();
    let total = (q as usize).pow(len as u32);
    let key = |a: &[u8], b: &[u8]| (vecops::encode(q, a), vecops::encode(q, b));
    let mut image = std::collections::HashSet::new();
    for code in 0..total {
        let v = vecops::decode(q, len, code);
        image.insert(key(&c1.project(&v), &c2.project(&v)));
    }
    let (d1, d2) = (c1.dim(), c2.dim());
    let mut product = std::collections::HashSet::new();
    for a in 0..(q as usize).pow(d1 as u32) {
        let av = vecops::decode(q, d1, a);
        let ra = c12.project(&c1.lift(&av));
        for b in 0..(q as usize).pow(d2 as u32) {
            let bv = vecops::decode(q, d2, b);
            if c12.project(&c2.lift(&bv)) == ra {
                product.insert(key(&av, &bv));
            }
        }
    }
    FibredReport {
        domain: total,
        product: product.len(),
        injective: image.len() == total,
        surjective: image.is_subset(&product) && product.len() == image.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldHom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(q: u32) -> &'static GaloisField {
        GaloisField::get(q).unwrap()
    }

    #[test]
    fn glue_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = gf(3);
        for _ in 0..20 {
            let phi = SemilinearMap::random_invertible(&mut rng, FieldHom::identity(f), 4);
            let v = [vec![1, 0, 2, 1], vec![0, 1, 1, 0]];
            let vp = [phi.apply_vec(&v[0]), phi.apply_vec(&v[1])];
            let frame = QuotientFrame::new(f, f, v, vp).unwrap();
            let (p1, p2) = (frame.reduce_map(&phi, 0), frame.reduce_map(&phi, 1));
            assert_eq!(glue_fibred_product(&p1, &p2, &frame).unwrap(), phi);
            let (scaled, lambda) = normalize_pair(&p1.scale(2), &p2, &frame).unwrap();
            assert_eq!(lambda, 2);
            assert_eq!(scaled, p1);
            assert!(matches!(
                glue_fibred_product(&p1, &p2.scale(2), &frame),
                Err(ReconstructError::ReductionsDisagree)
            ));
        }
    }

    #[test]
    fn zero_maps_glue_to_zero() {
        let f = gf(2);
        let v = [vec![1, 0, 0, 0], vec![0, 1, 0, 0]];
        let frame = QuotientFrame::new(f, f, v.clone(), v).unwrap();
        let z = SemilinearMap::linear(Matrix::zeros(f, 3, 3));
        assert!(glue_fibred_product(&z, &z, &frame).unwrap().is_zero());
    }

    #[test]
    fn normalize_over_gf5() {
        let f = gf(5);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let phi = SemilinearMap::random_invertible(&mut rng, FieldHom::identity(f), 4);
        let v = [vec![0, 0, 1, 3], vec![1, 4, 0, 0]];
        let vp = [phi.apply_vec(&v[0]), phi.apply_vec(&v[1])];
        let frame = QuotientFrame::new(f, f, v, vp).unwrap();
        let (p1, p2) = (frame.reduce_map(&phi, 0), frame.reduce_map(&phi, 1));
        let (_, lambda) = normalize_pair(&p1, &p2.scale(2), &frame).unwrap();
        assert_eq!(lambda, 2);
        let frob =
            SemilinearMap::new(FieldHom::frobenius(gf(4), 1), Matrix::identity(gf(4), 3)).unwrap();
        let id = SemilinearMap::linear(Matrix::identity(gf(4), 3));
        let v4 = [vec![1, 0, 0, 0], vec![0, 1, 0, 0]];
        let frame4 = QuotientFrame::new(gf(4), gf(4), v4.clone(), v4).unwrap();
        assert!(matches!(
            normalize_pair(&frob, &id, &frame4),
            Err(ReconstructError::NotProportional)
        ));
    }

    #[test]
    fn fibred_product_is_bijective() {
        let r = fibred_product_bijection(gf(3), &[1, 0, 0, 1], &[0, 1, 2, 0]);
        assert_eq!(
            r,
            FibredReport {
                domain: 81,
                product: 81,
                injective: true,
                surjective: true
            }
        );
    }
}

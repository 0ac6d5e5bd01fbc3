#![allow(dead_code)]

use projlift::examples::{
    affine, coordinate_hyperplane, coordinate_hyperplanes, make_complement, make_quadric,
    make_subfield_complement, make_two_hyperplanes, near_pencil, QuadricForm,
};
use projlift::geometry::FiniteGeometry;
use projlift::gf::{list_homomorphisms, FieldHom, GaloisField};
use projlift::projective::{build_pg, SemilinearMap};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn gf(q: u32) -> &'static GaloisField {
    GaloisField::get(q).unwrap()
}

pub fn pg(n: usize, q: u32) -> FiniteGeometry {
    build_pg(n, gf(q)).unwrap()
}

pub fn quadric(q: u32, form: QuadricForm) -> FiniteGeometry {
    make_quadric(&pg(3, q), form).unwrap()
}

pub fn two_planes_complement(q: u32) -> FiniteGeometry {
    let f = gf(q);
    make_complement(
        &pg(3, q),
        &[
            coordinate_hyperplane(f, 3, 0),
            coordinate_hyperplane(f, 3, 1),
        ],
    )
}

pub fn two_hyperplanes(q: u32) -> FiniteGeometry {
    let f = gf(q);
    make_two_hyperplanes(
        &pg(3, q),
        &coordinate_hyperplane(f, 3, 0),
        &coordinate_hyperplane(f, 3, 1),
    )
    .unwrap()
}

/// Geometries with a locally projective round trip.
pub fn lp_gallery() -> Vec<FiniteGeometry> {
    vec![
        affine(3, gf(3)).unwrap(),
        affine(3, gf(4)).unwrap(),
        two_planes_complement(4),
        two_hyperplanes(3),
        make_subfield_complement(3, gf(2), gf(4)).unwrap(),
    ]
}

/// The three quadric families over GF(3) and GF(4).
pub fn benz_gallery() -> Vec<(QuadricForm, FiniteGeometry)> {
    let mut out = Vec::new();
    for q in [3, 4] {
        for form in [
            QuadricForm::Elliptic,
            QuadricForm::Hyperbolic,
            QuadricForm::Cone,
        ] {
            out.push((form, quadric(q, form)));
        }
    }
    out
}

/// Every example used for classifier coherence.
pub fn gallery() -> Vec<FiniteGeometry> {
    let mut g = vec![
        pg(2, 2),
        pg(3, 2),
        pg(3, 3),
        affine(3, gf(2)).unwrap(),
        two_hyperplanes(2),
        coordinate_hyperplanes(&pg(3, 2)),
        near_pencil(),
        quadric(2, QuadricForm::Elliptic),
    ];
    g.extend(lp_gallery());
    g.extend(benz_gallery().into_iter().map(|(_, x)| x));
    g
}

pub fn random_hom<R: Rng>(
    rng: &mut R,
    k: &'static GaloisField,
    kp: &'static GaloisField,
) -> FieldHom {
    list_homomorphisms(k, kp).choose(rng).unwrap().clone()
}

/// Random semilinear map whose image is not contained in a line.
pub fn random_map_rank3<R: Rng>(
    rng: &mut R,
    sigma: FieldHom,
    rows: usize,
    cols: usize,
) -> SemilinearMap {
    loop {
        let phi = SemilinearMap::random(rng, sigma.clone(), rows, cols);
        if phi.matrix().rank() >= 3 {
            return phi;
        }
    }
}

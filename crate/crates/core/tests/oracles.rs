//! Example values checked against computations that do not go through the
//! library's own algorithms.

mod common;

use std::collections::BTreeSet;

use common::{gf, pg, quadric, two_hyperplanes};
use projlift::examples::{affine, make_subfield_complement, QuadricForm};
use projlift::geometry::{quotient, FiniteGeometry};
use projlift::gf::{list_homomorphisms, FieldHom, GaloisField, Matrix};
use projlift::projective::SemilinearMap;
use projlift::reconstruct::{
    brute_force_oracle, DeclaredKind, MorphismInstance, DEFAULT_ORACLE_CAP,
};

/// Schoolbook product of two coefficient vectors, reduced by a monic modulus.
fn poly_mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let k = modulus.len() - 1;
    let mut prod = vec![0u32; 2 * k];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for d in (k..prod.len()).rev() {
        let c = prod[d];
        if c != 0 {
            for (i, &m) in modulus.iter().enumerate() {
                let t = d - k + i;
                prod[t] = (prod[t] + p * p - c * m % p) % p;
            }
        }
    }
    prod.truncate(k);
    prod
}

fn digits(code: u32, p: u32, k: usize) -> Vec<u32> {
    (0..k).map(|i| code / p.pow(i as u32) % p).collect()
}

fn undigits(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0, |acc, &d| acc * p + d)
}

#[test]
fn field_tables_match_polynomial_arithmetic() {
    for q in [2, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
        let f = gf(q);
        let (p, k) = (f.characteristic(), f.degree() as usize);
        let modulus: Vec<u32> = f.modulus().iter().map(|&c| c as u32).collect();
        assert_eq!(modulus.len(), k + 1);
        assert_eq!(modulus[k], 1, "modulus of GF({q}) is monic");
        for a in 0..q {
            for b in 0..q {
                let (da, db) = (digits(a, p, k), digits(b, p, k));
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                assert_eq!(
                    f.add(a as u8, b as u8) as u32,
                    undigits(&sum, p),
                    "GF({q}) {a}+{b}"
                );
                let prod = poly_mul_mod(&da, &db, &modulus, p);
                assert_eq!(
                    f.mul(a as u8, b as u8) as u32,
                    undigits(&prod, p),
                    "GF({q}) {a}*{b}"
                );
            }
        }
        // the multiplicative group has no zero divisors, so the modulus is irreducible
        for a in 1..q {
            assert!((1..q).all(|b| f.mul(a as u8, b as u8) != 0));
        }
    }
}

#[test]
fn small_field_values() {
    // x = code 2 in GF(4); x^2 = x + 1 under x^2 + x + 1
    assert_eq!(gf(4).modulus(), &[1, 1, 1]);
    assert_eq!(gf(4).mul(2, 2), 3);
    assert_eq!(gf(3).add(2, 2), 1);
    assert_eq!(gf(4).frobenius(2, 1), 3);
    for a in gf(9).elements() {
        assert_eq!(gf(9).frobenius(gf(9).frobenius(a, 1), 1), a);
    }
}

/// Every map `K -> K'` preserving sum, product and 1, by exhaustion.
fn all_homomorphisms(k: &GaloisField, kp: &GaloisField) -> BTreeSet<Vec<u8>> {
    let (n, m) = (k.order() as usize, kp.order() as u64);
    let mut out = BTreeSet::new();
    // 0 and 1 are forced, the remaining n - 2 images range freely
    for code in 0..m.pow(n as u32 - 2) {
        let mut t = vec![0u8, 1];
        t.extend((0..n - 2).map(|i| (code / m.pow(i as u32) % m) as u8));
        let ok = (0..n as u8).all(|a| {
            (0..n as u8).all(|b| {
                t[k.add(a, b) as usize] == kp.add(t[a as usize], t[b as usize])
                    && t[k.mul(a, b) as usize] == kp.mul(t[a as usize], t[b as usize])
            })
        });
        if ok {
            out.insert(t);
        }
    }
    out
}

#[test]
fn homomorphism_counts_by_exhaustion() {
    for (q, qp, expected) in [
        (4, 16, 2),
        (4, 8, 0),
        (2, 4, 1),
        (3, 9, 1),
        (4, 4, 2),
        (9, 9, 2),
    ] {
        let brute = all_homomorphisms(gf(q), gf(qp));
        assert_eq!(brute.len(), expected, "GF({q}) -> GF({qp})");
        let lib: BTreeSet<Vec<u8>> = list_homomorphisms(gf(q), gf(qp))
            .iter()
            .map(|h| h.table().to_vec())
            .collect();
        assert_eq!(lib, brute);
    }
}

/// Normalized representatives of all points of PG(n, q).
fn normalized_vectors(f: &GaloisField, len: usize) -> Vec<Vec<u8>> {
    let q = f.order() as usize;
    (1..q.pow(len as u32))
        .map(|c| {
            (0..len)
                .map(|i| (c / q.pow(i as u32) % q) as u8)
                .collect::<Vec<u8>>()
        })
        .filter(|v: &Vec<u8>| v.iter().find(|&&x| x != 0) == Some(&1))
        .collect()
}

fn point_sets(g: &FiniteGeometry, dim: isize) -> BTreeSet<BTreeSet<Vec<u8>>> {
    let lat = g.lattice();
    lat.of_dim(dim)
        .iter()
        .map(|&i| {
            lat.get(i)
                .members()
                .to_vec()
                .iter()
                .map(|&x| g.coords(x).unwrap().to_vec())
                .collect()
        })
        .collect()
}

/// Lines as sets `{a + t b} ∪ {b}`, over all pairs of representatives.
fn lines_by_hand(f: &GaloisField, len: usize) -> BTreeSet<BTreeSet<Vec<u8>>> {
    let pts = normalized_vectors(f, len);
    let norm = |v: Vec<u8>| {
        let lead = *v.iter().find(|&&x| x != 0).unwrap();
        v.iter().map(|&x| f.div(x, lead)).collect::<Vec<u8>>()
    };
    let mut out = BTreeSet::new();
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            let mut line: BTreeSet<Vec<u8>> = f
                .elements()
                .map(|t| {
                    norm(
                        a.iter()
                            .zip(b)
                            .map(|(&x, &y)| f.add(x, f.mul(t, y)))
                            .collect(),
                    )
                })
                .collect();
            line.insert(b.clone());
            out.insert(line);
        }
    }
    out
}

#[test]
fn projective_space_counts() {
    for (n, q, points, lines) in [
        (1, 2, 3, 1),
        (2, 3, 13, 13),
        (3, 2, 15, 35),
        (3, 3, 40, 130),
    ] {
        let g = pg(n, q);
        assert_eq!(normalized_vectors(gf(q), n + 1).len(), points);
        assert_eq!(g.len(), points);
        let by_hand = lines_by_hand(gf(q), n + 1);
        assert_eq!(by_hand.len(), lines);
        assert_eq!(point_sets(&g, 1), by_hand, "PG({n},{q})");
        assert!(by_hand.iter().all(|l| l.len() == q as usize + 1));
    }
    assert_eq!(point_sets(&pg(3, 2), 2).len(), 15);
}

fn vectors_where(q: u32, pred: impl Fn(&GaloisField, &[u8]) -> bool) -> BTreeSet<Vec<u8>> {
    let f = gf(q);
    normalized_vectors(f, 4)
        .into_iter()
        .filter(|v| pred(f, v))
        .collect()
}

fn coords_of(g: &FiniteGeometry) -> BTreeSet<Vec<u8>> {
    g.points().map(|x| g.coords(x).unwrap().to_vec()).collect()
}

#[test]
fn quadric_point_sets() {
    // -1 is a non-square mod 3, so x0 x1 + x2^2 + x3^2 is elliptic
    let elliptic = vectors_where(3, |_, v| {
        let s: u32 = v[0] as u32 * v[1] as u32 + (v[2] as u32).pow(2) + (v[3] as u32).pow(2);
        s.is_multiple_of(3)
    });
    assert_eq!(elliptic.len(), 10);
    assert_eq!(coords_of(&quadric(3, QuadricForm::Elliptic)), elliptic);

    let hyperbolic = vectors_where(2, |_, v| (v[0] & v[3]) == (v[1] & v[2]));
    assert_eq!(hyperbolic.len(), 9);
    let x = quadric(2, QuadricForm::Hyperbolic);
    assert_eq!(coords_of(&x), hyperbolic);
    let full_lines = lines_by_hand(gf(2), 4)
        .into_iter()
        .filter(|l| l.is_subset(&hyperbolic))
        .count();
    assert_eq!(full_lines, 6);

    let cone = vectors_where(3, |_, v| {
        (v[0] as u32 * v[1] as u32 + 2 * (v[2] as u32).pow(2)).is_multiple_of(3)
            && v[..3].iter().any(|&c| c != 0)
    });
    assert_eq!(cone.len(), 12);
    assert_eq!(coords_of(&quadric(3, QuadricForm::Cone)), cone);

    // every line meets the ovoid in at most two points
    for l in lines_by_hand(gf(3), 4) {
        assert!(l.intersection(&elliptic).count() <= 2);
    }
}

#[test]
fn constructor_point_counts() {
    assert_eq!(affine(3, gf(4)).unwrap().len(), 64);
    assert_eq!(
        make_subfield_complement(3, gf(2), gf(4)).unwrap().len(),
        85 - 15
    );
    assert_eq!(
        make_subfield_complement(2, gf(2), gf(4)).unwrap().len(),
        21 - 7
    );
    // two planes of PG(3,3) minus their common line: 2 * (13 - 4)
    assert_eq!(two_hyperplanes(3).len(), 18);
    let two = vectors_where(3, |_, v| (v[0] == 0) != (v[1] == 0));
    assert_eq!(coords_of(&two_hyperplanes(3)), two);
}

#[test]
fn frobenius_collineation_on_a_point() {
    let phi =
        SemilinearMap::new(FieldHom::frobenius(gf(4), 1), Matrix::identity(gf(4), 4)).unwrap();
    assert_eq!(phi.apply_vec(&[1, 2, 0, 0]), vec![1, 3, 0, 0]);
}

#[test]
fn proportionality_scalar_over_gf5() {
    let f = gf(5);
    let m = Matrix::from_rows(f, &[vec![1, 2, 0], vec![0, 3, 4], vec![2, 0, 1]]);
    let phi = SemilinearMap::linear(m.clone());
    let phi2 = SemilinearMap::linear(m.scale(2));
    // hand-scaled: 2 * (1, 2, 0) = (2, 4, 0)
    assert_eq!(phi2.matrix().row(0), &[2, 4, 0]);
    assert_eq!(phi.proportional(&phi2), Some(2));
}

#[test]
fn point_quotient_of_pg32_pairs_up_lines() {
    let g = pg(3, 2);
    let apex = 0;
    let a = g.coords(apex).unwrap().to_vec();
    let mut classes = BTreeSet::new();
    for x in g.points().filter(|&x| x != apex) {
        let v = g.coords(x).unwrap();
        let w: Vec<u8> = v.iter().zip(&a).map(|(p, q)| p ^ q).collect();
        classes.insert(BTreeSet::from([v.to_vec(), w]));
    }
    assert_eq!(classes.len(), 7);
    let (qg, proj) = quotient(&g, &g.set_of(&[apex])).unwrap();
    assert_eq!(qg.len(), 7);
    assert_eq!(qg.dim(), 2);
    let mut lib = BTreeSet::new();
    for c in qg.points() {
        let members: BTreeSet<Vec<u8>> = g
            .points()
            .filter(|&x| proj.apply(x) == Some(c))
            .map(|x| g.coords(x).unwrap().to_vec())
            .collect();
        lib.insert(members);
    }
    assert_eq!(lib, classes);
}

#[test]
fn identity_of_pg32_has_one_lift() {
    let f = gf(2);
    let g = pg(3, 2);
    let pts = normalized_vectors(f, 4);
    let mut lifts = Vec::new();
    for code in 0u32..1 << 16 {
        let rows: Vec<Vec<u8>> = (0..4)
            .map(|r| (0..4).map(|c| (code >> (4 * r + c) & 1) as u8).collect())
            .collect();
        let m = Matrix::from_rows(f, &rows);
        if pts.iter().all(|v| &m.mul_vec(v) == v) {
            lifts.push(m);
        }
    }
    assert_eq!(lifts, vec![Matrix::identity(f, 4)]);

    let id = SemilinearMap::linear(Matrix::identity(f, 4));
    let inst =
        MorphismInstance::from_semilinear(&g, &g, &id, DeclaredKind::FullProjective).unwrap();
    assert_eq!(
        brute_force_oracle(&inst, DEFAULT_ORACLE_CAP).unwrap(),
        vec![id]
    );
}

//! Deterministic constructors for the example geometries used as the test gallery.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{FiniteGeometry, PointSet};
use crate::gf::{canonical_embedding, GaloisField, GfError};
use crate::projective::{build_pg, LinearSubspace, ProjectiveError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExampleError {
    #[error("the two hyperplanes coincide")]
    EqualHyperplanes,
    #[error("subspace is not a hyperplane")]
    NotHyperplane,
    #[error("{sub} does not embed properly in {field}")]
    NoEmbedding { sub: u32, field: u32 },
    #[error("no irreducible binary quadratic form over gf({0})")]
    NoIrreducibleForm(u32),
    #[error("quadrics are built in dimension 3, got {0}")]
    QuadricDimension(usize),
    #[error("unknown example {0:?}")]
    UnknownName(String),
    #[error("bad parameter: {0}")]
    BadParams(String),
    #[error(transparent)]
    Gf(#[from] GfError),
    #[error(transparent)]
    Projective(#[from] ProjectiveError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadricForm {
    /// `x0 x1 + f(x2, x3)`, `f` irreducible.
    Elliptic,
    /// `x0 x3 - x1 x2`.
    Hyperbolic,
    /// `x0 x1 = x2^2` with the vertex `(0,0,0,1)` removed.
    Cone,
}

fn eval(f: &GaloisField, coeffs: &[u8], v: &[u8]) -> u8 {
    coeffs
        .iter()
        .zip(v)
        .fold(0, |acc, (&a, &x)| f.add(acc, f.mul(a, x)))
}

/// Complement of the union of the given subspaces.
pub fn make_complement(pg: &FiniteGeometry, flats: &[LinearSubspace]) -> FiniteGeometry {
    let mut removed = pg.empty_set();
    for w in flats {
        removed.union_with(&w.points_in(pg));
    }
    pg.subgeometry(
        &removed.complement(),
        format!("{}-minus-{}", pg.label(), flats.len()),
    )
}

/// Coordinate hyperplane `x_i = 0`.
pub fn coordinate_hyperplane(field: &'static GaloisField, n: usize, i: usize) -> LinearSubspace {
    let rows: Vec<Vec<u8>> = (0..=n)
        .filter(|&j| j != i)
        .map(|j| (0..=n).map(|k| u8::from(k == j)).collect())
        .collect();
    LinearSubspace::span(field, n + 1, &rows)
}

/// `AG(n, K)`: the complement of `x0 = 0`.
pub fn affine(n: usize, field: &'static GaloisField) -> Result<FiniteGeometry, ExampleError> {
    let pg = build_pg(n, field)?;
    let h = coordinate_hyperplane(field, n, 0);
    let keep = h.points_in(&pg).complement();
    Ok(pg.subgeometry(&keep, format!("AG({n},{})", field.order())))
}

/// `(H1 ∪ H2) − (H1 ∩ H2)`.
pub fn make_two_hyperplanes(
    pg: &FiniteGeometry,
    h1: &LinearSubspace,
    h2: &LinearSubspace,
) -> Result<FiniteGeometry, ExampleError> {
    let n = pg.dim() as usize;
    if h1.dim() != n || h2.dim() != n {
        return Err(ExampleError::NotHyperplane);
    }
    if h1 == h2 {
        return Err(ExampleError::EqualHyperplanes);
    }
    let (a, b) = (h1.points_in(pg), h2.points_in(pg));
    let keep = a.union(&b).difference(&a.intersection(&b));
    Ok(pg.subgeometry(&keep, format!("{}-two-hyperplanes", pg.label())))
}

/// `PG(n, L) − PG(n, K)` for a proper subfield `K` via the canonical embedding.
pub fn make_subfield_complement(
    n: usize,
    sub: &'static GaloisField,
    field: &'static GaloisField,
) -> Result<FiniteGeometry, ExampleError> {
    let no = ExampleError::NoEmbedding {
        sub: sub.order(),
        field: field.order(),
    };
    if sub == field {
        return Err(no);
    }
    let iota = canonical_embedding(sub, field).ok_or(no)?;
    let pg = build_pg(n, field)?;
    let small = build_pg(n, sub)?;
    let rep = pg.linear_rep().expect("coordinates");
    let mut removed = pg.empty_set();
    for i in small.points() {
        let v: Vec<u8> = small
            .coords(i)
            .unwrap()
            .iter()
            .map(|&c| iota.apply(c))
            .collect();
        removed.insert(rep.index_of(&v).expect("embedded point"));
    }
    Ok(pg.subgeometry(
        &removed.complement(),
        format!("PG({n},{})-PG({n},{})", field.order(), sub.order()),
    ))
}

/// Coefficients `(a, b, c)` of `a s^2 + b s t + c t^2`: `(1, 0, 1)` when that
/// is irreducible, else the lexicographically smallest irreducible one.
pub fn irreducible_binary_form(f: &GaloisField) -> Result<[u8; 3], ExampleError> {
    let irreducible = |a: u8, b: u8, c: u8| {
        a != 0
            && f.elements()
                .all(|t| f.add(f.add(f.mul(a, f.mul(t, t)), f.mul(b, t)), c) != 0)
    };
    if irreducible(1, 0, 1) {
        return Ok([1, 0, 1]);
    }
    for a in f.elements() {
        for b in f.elements() {
            for c in f.elements() {
                if irreducible(a, b, c) {
                    return Ok([a, b, c]);
                }
            }
        }
    }
    Err(ExampleError::NoIrreducibleForm(f.order()))
}

/// Points of a quadric in `PG(3, K)`.
pub fn make_quadric(
    pg: &FiniteGeometry,
    form: QuadricForm,
) -> Result<FiniteGeometry, ExampleError> {
    let rep = pg.linear_rep().ok_or(ProjectiveError::NotLinear)?;
    if rep.ambient_dim() != 3 {
        return Err(ExampleError::QuadricDimension(rep.ambient_dim()));
    }
    let f = rep.field();
    let abc = if form == QuadricForm::Elliptic {
        irreducible_binary_form(f)?
    } else {
        [0; 3]
    };
    let on = |x: &[u8]| -> bool {
        match form {
            QuadricForm::Hyperbolic => f.sub(f.mul(x[0], x[3]), f.mul(x[1], x[2])) == 0,
            QuadricForm::Elliptic => {
                let q = eval(
                    f,
                    &abc,
                    &[f.mul(x[2], x[2]), f.mul(x[2], x[3]), f.mul(x[3], x[3])],
                );
                f.add(f.mul(x[0], x[1]), q) == 0
            }
            QuadricForm::Cone => {
                f.mul(x[0], x[1]) == f.mul(x[2], x[2]) && x[..3].iter().any(|&c| c != 0)
            }
        }
    };
    let keep = PointSet::from_iter(pg.len(), (0..pg.len()).filter(|&i| on(rep.coords(i))));
    let name = match form {
        QuadricForm::Elliptic => "elliptic-quadric",
        QuadricForm::Hyperbolic => "hyperbolic-quadric",
        QuadricForm::Cone => "cone",
    };
    Ok(pg.subgeometry(&keep, format!("{name}-{}", pg.label())))
}

/// Union of the `n + 1` coordinate hyperplanes.
pub fn coordinate_hyperplanes(pg: &FiniteGeometry) -> FiniteGeometry {
    let rep = pg.linear_rep().expect("coordinates");
    let keep = PointSet::from_iter(
        pg.len(),
        (0..pg.len()).filter(|&i| rep.coords(i).contains(&0)),
    );
    pg.subgeometry(&keep, format!("{}-coordinate-hyperplanes", pg.label()))
}

/// Four points on a closure table `{∅, singletons, {0,1,2}, all}`; exchange fails.
pub fn exchange_failure() -> FiniteGeometry {
    FiniteGeometry::from_table(
        4,
        vec![vec![], vec![0], vec![1], vec![2], vec![3], vec![0, 1, 2]],
        "exchange-failure",
    )
    .expect("valid table")
}

/// `{a, b, c, d, x}` in `PG(2,2)` with `x = ab ∩ cd`: its one plane has a
/// quadrilateral, yet `X/x` has a 2-point line.
pub fn near_pencil() -> FiniteGeometry {
    let f = GaloisField::get(2).unwrap();
    let pg = build_pg(2, f).unwrap();
    let rep = pg.linear_rep().unwrap();
    let pts = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [1, 1, 0]];
    let keep = PointSet::from_iter(pg.len(), pts.iter().map(|v| rep.index_of(v).unwrap()));
    pg.subgeometry(&keep, "near-pencil")
}

/// Two disjoint copies of `PG(1, K)` as one (reducible projective) geometry.
pub fn disjoint_lines(field: &'static GaloisField) -> Result<FiniteGeometry, ExampleError> {
    let line = build_pg(1, field)?;
    Ok(FiniteGeometry::coproduct(
        &[line.clone(), line],
        format!("two-lines-{}", field.order()),
    ))
}

/// A named example with its parameters, as accepted by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleSpec {
    pub name: String,
    pub field: String,
    pub dim: Option<usize>,
    /// Subfield for `subfield-complement`.
    pub subfield: Option<String>,
    /// Number of coordinate hyperplanes removed by `complement`.
    pub remove: Option<usize>,
}

pub const EXAMPLE_NAMES: &[&str] = &[
    "pg",
    "affine",
    "complement",
    "two-hyperplanes",
    "pair-of-planes",
    "subfield-complement",
    "elliptic-quadric",
    "hyperbolic-quadric",
    "cone",
    "coordinate-hyperplanes",
    "exchange-failure",
    "near-pencil",
    "disjoint-lines",
];

impl ExampleSpec {
    pub fn new(name: &str, field: &str, dim: Option<usize>) -> ExampleSpec {
        ExampleSpec {
            name: name.to_string(),
            field: field.to_string(),
            dim,
            subfield: None,
            remove: None,
        }
    }

    pub fn build(&self) -> Result<FiniteGeometry, ExampleError> {
        let field = || GaloisField::parse(&self.field);
        let dim = self.dim.unwrap_or(3);
        match self.name.as_str() {
            "pg" => Ok(build_pg(dim, field()?)?),
            "affine" => affine(dim, field()?),
            "complement" => {
                let f = field()?;
                let k = self.remove.unwrap_or(1);
                if k > dim + 1 {
                    return Err(ExampleError::BadParams(format!(
                        "cannot remove {k} coordinate hyperplanes"
                    )));
                }
                let hs: Vec<LinearSubspace> =
                    (0..k).map(|i| coordinate_hyperplane(f, dim, i)).collect();
                Ok(make_complement(&build_pg(dim, f)?, &hs))
            }
            "two-hyperplanes" | "pair-of-planes" => {
                let f = field()?;
                let pg = build_pg(dim, f)?;
                make_two_hyperplanes(
                    &pg,
                    &coordinate_hyperplane(f, dim, 0),
                    &coordinate_hyperplane(f, dim, 1),
                )
            }
            "subfield-complement" => {
                let sub = self.subfield.as_deref().ok_or_else(|| {
                    ExampleError::BadParams("subfield-complement needs --subfield".into())
                })?;
                make_subfield_complement(dim, GaloisField::parse(sub)?, field()?)
            }
            "elliptic-quadric" => make_quadric(&build_pg(3, field()?)?, QuadricForm::Elliptic),
            "hyperbolic-quadric" => make_quadric(&build_pg(3, field()?)?, QuadricForm::Hyperbolic),
            "cone" => make_quadric(&build_pg(3, field()?)?, QuadricForm::Cone),
            "coordinate-hyperplanes" => Ok(coordinate_hyperplanes(&build_pg(dim, field()?)?)),
            "exchange-failure" => Ok(exchange_failure()),
            "near-pencil" => Ok(near_pencil()),
            "disjoint-lines" => disjoint_lines(field()?),
            other => Err(ExampleError::UnknownName(other.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> &'static GaloisField {
        GaloisField::get(q).unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(affine(3, gf(4)).unwrap().len(), 64);
        assert_eq!(make_subfield_complement(3, gf(2), gf(4)).unwrap().len(), 70);
        assert_eq!(make_subfield_complement(2, gf(2), gf(4)).unwrap().len(), 14);
        assert!(matches!(
            make_subfield_complement(3, gf(4), gf(8)),
            Err(ExampleError::NoEmbedding { .. })
        ));
        let pg33 = build_pg(3, gf(3)).unwrap();
        let h0 = coordinate_hyperplane(gf(3), 3, 0);
        let h1 = coordinate_hyperplane(gf(3), 3, 1);
        assert_eq!(make_two_hyperplanes(&pg33, &h0, &h1).unwrap().len(), 18);
        assert_eq!(
            make_two_hyperplanes(&pg33, &h0, &h0).unwrap_err(),
            ExampleError::EqualHyperplanes
        );
        let pg32 = build_pg(3, gf(2)).unwrap();
        let (a, b) = (
            coordinate_hyperplane(gf(2), 3, 0),
            coordinate_hyperplane(gf(2), 3, 1),
        );
        assert_eq!(make_two_hyperplanes(&pg32, &a, &b).unwrap().len(), 8);
    }

    #[test]
    fn quadric_counts() {
        for q in [2u32, 3, 4, 5] {
            let pg = build_pg(3, gf(q)).unwrap();
            let e = make_quadric(&pg, QuadricForm::Elliptic).unwrap();
            assert_eq!(e.len() as u32, q * q + 1, "elliptic q={q}");
            let h = make_quadric(&pg, QuadricForm::Hyperbolic).unwrap();
            assert_eq!(h.len() as u32, (q + 1) * (q + 1));
            let c = make_quadric(&pg, QuadricForm::Cone).unwrap();
            assert_eq!(c.len() as u32, q * (q + 1));
        }
        assert_eq!(irreducible_binary_form(gf(3)).unwrap(), [1, 0, 1]);
        assert_ne!(irreducible_binary_form(gf(5)).unwrap(), [1, 0, 1]);
    }

    #[test]
    fn hyperbolic_gf2_has_six_lines() {
        let pg = build_pg(3, gf(2)).unwrap();
        let h = make_quadric(&pg, QuadricForm::Hyperbolic).unwrap();
        let (p, inj) = h.root_embedding();
        let x = PointSet::from_iter(p.len(), inj);
        let full = p
            .lattice()
            .lines()
            .iter()
            .filter(|&&l| p.lattice().get(l).members().is_subset(&x))
            .count();
        assert_eq!(full, 6);
    }

    #[test]
    fn spec_round_trip() {
        let g = ExampleSpec::new("elliptic-quadric", "gf(3)", None)
            .build()
            .unwrap();
        assert_eq!(g.len(), 10);
        assert!(matches!(
            ExampleSpec::new("elliptic-quadric", "gf(17)", None).build(),
            Err(ExampleError::Gf(_))
        ));
        assert_eq!(
            ExampleSpec::new("affine", "gf(4)", Some(3))
                .build()
                .unwrap()
                .len(),
            64
        );
        let mut s = ExampleSpec::new("complement", "gf(4)", Some(3));
        s.remove = Some(2);
        assert_eq!(s.build().unwrap().len(), 85 - 21 - 21 + 5);
    }
}

use serde::Serialize;
use serde_json::{json, Value};

use super::{ClassifyError, Embedded};
use crate::geometry::{FiniteGeometry, PointSet};
use crate::projective::{hyperplanes, quotient_iso, LinearSubspace};
use crate::report::{Verdict, Witness};

/// A hyperplane `{a·x = 0}` of `P` with its points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HyperplaneCert {
    pub dual: Vec<u8>,
    pub points: Vec<usize>,
}

/// Every ambient line meets `X` in no point or at least two. Witness
/// `points = [x]` (in `P`), `sets = [line]`.
pub fn check_line_condition(x: &FiniteGeometry) -> Result<Verdict, ClassifyError> {
    let e = Embedded::of(x)?;
    let lat = e.ambient.lattice();
    let lines = lat.lines();
    let bad = lines.iter().find_map(|&l| {
        let m = lat.get(l).members();
        (m.intersection_len(&e.members) == 1).then(|| {
            let p = m.intersection(&e.members).first().unwrap();
            Witness::new("single_point_line", vec![p], vec![m.to_vec()])
        })
    });
    Ok(Verdict::from_result(lines.len() as u64, bad))
}

/// `X/x = P/x` for every `x`: no tangent line. Witness `points = [x]`,
/// `sets = [tangent line]`, in `P`.
pub fn check_minimal_embedding(x: &FiniteGeometry) -> Result<Verdict, ClassifyError> {
    let e = Embedded::of(x)?;
    let lat = e.ambient.lattice();
    let bad = e.members.iter().find_map(|p| {
        e.tangent_lines(p).first().map(|&l| {
            Witness::new(
                "tangent_class",
                vec![p],
                vec![lat.get(l).members().to_vec()],
            )
        })
    });
    Ok(Verdict::from_result(x.len() as u64, bad))
}

#[derive(Debug, Clone, Serialize)]
pub struct AffinoReport {
    /// First hyperplane `H` in dual order with `X ∪ H = P`.
    pub hyperplane: Option<HyperplaneCert>,
    /// Number of such hyperplanes.
    pub count: usize,
}

/// First hyperplane `H` of `p` in dual order with `members ∪ H = p`, and the
/// number of such hyperplanes.
pub fn covering_hyperplanes(
    p: &FiniteGeometry,
    members: &PointSet,
) -> (Option<HyperplaneCert>, usize) {
    let mut first = None;
    let mut count = 0;
    for (dual, h) in hyperplanes(p) {
        if members.union(&h).len() == p.len() {
            count += 1;
            if first.is_none() {
                first = Some(HyperplaneCert {
                    dual,
                    points: h.to_vec(),
                });
            }
        }
    }
    (first, count)
}

/// A hyperplane `H` of `P` with `X ∪ H = P`.
pub fn is_affino_projective(x: &FiniteGeometry) -> Result<AffinoReport, ClassifyError> {
    let e = Embedded::of(x)?;
    let (hyperplane, count) = covering_hyperplanes(&e.ambient, &e.members);
    Ok(AffinoReport { hyperplane, count })
}

#[derive(Debug, Clone, Serialize)]
pub struct PointCert {
    /// The point, in `P`.
    pub point: usize,
    /// First `H_x ∋ x` containing every tangent line at `x`.
    pub hyperplane: Option<HyperplaneCert>,
    pub count: usize,
    /// Dual vector, in the coordinates of `P/x`, of the first hyperplane
    /// `H'` with `X/x ∪ H' = P/x`.
    pub quotient_hyperplane: Option<Vec<u8>>,
    pub quotient_count: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct LocallyAffinoReport {
    pub holds: bool,
    /// Witness `points = [x]`, `sets` = the tangent lines at `x`.
    pub lines: Verdict,
    /// Witness `points = [x]`.
    pub quotients: Verdict,
    pub agree: bool,
    pub certificates: Vec<PointCert>,
}

/// Finds `H_x` for each `x` by the line criterion, and separately checks
/// that `X/x` is affino-projective inside `P/x`.
pub fn is_locally_affino_projective(
    x: &FiniteGeometry,
) -> Result<LocallyAffinoReport, ClassifyError> {
    let e = Embedded::of(x)?;
    let p = &e.ambient;
    let rep = p.linear_rep().expect("ambient has coordinates");
    let lat = p.lattice();
    let all = hyperplanes(p);
    let mut certificates = Vec::new();
    let mut line_witness = None;
    let mut quotient_witness = None;
    let mut agree = true;
    for pt in e.members.iter() {
        let tangents = e.tangent_lines(pt);
        let mut union = PointSet::singleton(p.len(), pt);
        for &l in &tangents {
            union.union_with(lat.get(l).members());
        }
        let mut hyperplane = None;
        let mut count = 0;
        for (dual, h) in &all {
            if union.is_subset(h) {
                count += 1;
                if hyperplane.is_none() {
                    hyperplane = Some(HyperplaneCert {
                        dual: dual.clone(),
                        points: h.to_vec(),
                    });
                }
            }
        }
        if hyperplane.is_none() && line_witness.is_none() {
            let sets = tangents
                .iter()
                .map(|&l| lat.get(l).members().to_vec())
                .collect();
            line_witness = Some(Witness::new("tangents_span_too_much", vec![pt], sets));
        }

        let w = LinearSubspace::span(
            rep.field(),
            rep.ambient_dim() + 1,
            &[rep.coords(pt).to_vec()],
        );
        let iso = quotient_iso(p, &w)?;
        let image = PointSet::from_iter(
            iso.pg.len(),
            e.members
                .iter()
                .filter(|&y| y != pt)
                .filter_map(|y| iso.image_of_point(y)),
        );
        let (qh, quotient_count) = covering_hyperplanes(&iso.pg, &image);
        if qh.is_none() && quotient_witness.is_none() {
            quotient_witness = Some(Witness::points("quotient_not_affino_projective", vec![pt]));
        }
        agree &= count == quotient_count;
        certificates.push(PointCert {
            point: pt,
            hyperplane,
            count,
            quotient_hyperplane: qh.map(|h| h.dual),
            quotient_count,
        });
    }
    let lines = Verdict::from_result(x.len() as u64, line_witness);
    let quotients = Verdict::from_result(x.len() as u64, quotient_witness);
    Ok(LocallyAffinoReport {
        holds: lines.holds,
        agree: agree && lines.holds == quotients.holds,
        lines,
        quotients,
        certificates,
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Applicable {
    NotApplicable { reason: String },
    Checked(Verdict),
}

impl Applicable {
    pub fn holds(&self) -> Option<bool> {
        match self {
            Applicable::NotApplicable { .. } => None,
            Applicable::Checked(v) => Some(v.holds),
        }
    }

    pub fn summary(&self) -> Value {
        match self.holds() {
            Some(b) => json!(b),
            None => json!("not-applicable"),
        }
    }
}

fn mobius_inner(e: &Embedded) -> Applicable {
    if e.members.len() <= 2 {
        return Applicable::NotApplicable {
            reason: format!("{} points", e.members.len()),
        };
    }
    let p = &e.ambient;
    let lat = p.lattice();
    let top = p.dim() - 1;
    let bad = e.members.iter().find_map(|pt| {
        let mut union = p.empty_set();
        for l in e.tangent_lines(pt) {
            union.union_with(lat.get(l).members());
        }
        let is_hyperplane = !union.is_empty() && p.is_flat(&union) && p.dim_of(&union) == top;
        (!is_hyperplane).then(|| {
            Witness::new(
                "tangent_union_not_hyperplane",
                vec![pt],
                vec![union.to_vec()],
            )
        })
    });
    Applicable::Checked(Verdict::from_result(e.members.len() as u64, bad))
}

fn ambient_dim_at_least_3(e: &Embedded) -> Result<(), ClassifyError> {
    let dim = e.ambient.dim();
    if dim < 3 {
        return Err(ClassifyError::DimensionTooLow { dim, required: 3 });
    }
    Ok(())
}

/// At each `x` the union of the tangent lines is a hyperplane. Witness
/// `points = [x]`, `sets = [union]`, in `P`.
pub fn is_mobius(x: &FiniteGeometry) -> Result<Applicable, ClassifyError> {
    let e = Embedded::of(x)?;
    ambient_dim_at_least_3(&e)?;
    Ok(mobius_inner(&e))
}

/// Möbius, and no ambient line meets `X` in more than two points. Witness as
/// for [`is_mobius`], or `sets = [line]`.
pub fn is_ovoid(x: &FiniteGeometry) -> Result<Applicable, ClassifyError> {
    let e = Embedded::of(x)?;
    ambient_dim_at_least_3(&e)?;
    let m = mobius_inner(&e);
    if m.holds() != Some(true) {
        return Ok(m);
    }
    let lat = e.ambient.lattice();
    let lines = lat.lines();
    let bad = lines.iter().find_map(|&l| {
        let s = lat.get(l).members();
        (s.intersection_len(&e.members) > 2)
            .then(|| Witness::sets("line_meets_three_times", vec![s.to_vec()]))
    });
    Ok(Applicable::Checked(Verdict::from_result(
        lines.len() as u64,
        bad,
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{affine, make_quadric, QuadricForm};
    use crate::gf::GaloisField;
    use crate::projective::build_pg;

    fn gf(q: u32) -> &'static GaloisField {
        GaloisField::get(q).unwrap()
    }

    #[test]
    fn affine_space_finds_its_hyperplane() {
        let ag = affine(3, gf(3)).unwrap();
        let r = is_affino_projective(&ag).unwrap();
        let h = r.hyperplane.unwrap();
        assert_eq!(h.dual, vec![1, 0, 0, 0]);
        assert_eq!(r.count, 1);
        let pg = build_pg(3, gf(3)).unwrap();
        let r = is_affino_projective(&pg).unwrap();
        assert_eq!(r.hyperplane.unwrap().dual, vec![0, 0, 0, 1]);
        assert_eq!(r.count, 40);
        assert!(check_minimal_embedding(&pg).unwrap().holds);
        assert_eq!(is_mobius(&pg).unwrap().holds(), Some(false));
    }

    #[test]
    fn elliptic_quadric() {
        let pg = build_pg(3, gf(3)).unwrap();
        let e = make_quadric(&pg, QuadricForm::Elliptic).unwrap();
        let r = is_locally_affino_projective(&e).unwrap();
        assert!(r.holds && r.agree);
        for c in &r.certificates {
            // the tangent plane is the only choice
            assert_eq!(c.count, 1);
            let h = pg.set_of(&c.hyperplane.as_ref().unwrap().points);
            let on: Vec<usize> = h
                .intersection(&PointSet::from_iter(pg.len(), e.root_embedding().1))
                .to_vec();
            assert_eq!(on, vec![c.point]);
        }
        assert!(is_affino_projective(&e).unwrap().hyperplane.is_none());
        assert!(!check_line_condition(&e).unwrap().holds);
        assert!(!check_minimal_embedding(&e).unwrap().holds);
        assert_eq!(is_mobius(&e).unwrap().holds(), Some(true));
        assert_eq!(is_ovoid(&e).unwrap().holds(), Some(true));
    }

    #[test]
    fn hyperbolic_and_cone() {
        let pg = build_pg(3, gf(2)).unwrap();
        let h = make_quadric(&pg, QuadricForm::Hyperbolic).unwrap();
        assert!(is_locally_affino_projective(&h).unwrap().holds);
        assert_eq!(is_ovoid(&h).unwrap().holds(), Some(false));
        let pg = build_pg(3, gf(3)).unwrap();
        let c = make_quadric(&pg, QuadricForm::Cone).unwrap();
        let r = is_locally_affino_projective(&c).unwrap();
        assert!(r.holds && r.agree);
    }

    #[test]
    fn tiny_sets_are_not_applicable() {
        let pg = build_pg(3, gf(2)).unwrap();
        let two = pg.subgeometry(&pg.set_of(&[0, 1]), "two");
        assert_eq!(is_mobius(&two).unwrap().summary(), json!("not-applicable"));
        let plane = build_pg(2, gf(2)).unwrap();
        assert!(is_mobius(&plane).is_err());
    }
}

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ClassifyError;
use crate::geometry::{quotient, FiniteGeometry, PointSet};
use crate::projective::{check_projective_axioms, ProjectiveCheckOptions};
use crate::report::{Verdict, Witness};

#[derive(Debug, Clone, Serialize)]
pub struct EnoughPointsReport {
    pub holds: bool,
    /// Every plane has four points, no three collinear. Witness: the plane.
    pub planes: Verdict,
    /// Every line of every `X/x` has three points. Witness `points = [x]`,
    /// `sets` = the classes on the short line.
    pub quotient_lines: Verdict,
    pub agree: bool,
}

fn quadrilateral(g: &FiniteGeometry, plane: &PointSet) -> Option<[usize; 4]> {
    let lat = g.lattice();
    let pts = plane.to_vec();
    let on =
        |a: usize, b: usize, c: usize| lat.line_of(g, a, b).is_some_and(|l| lat.get(l).contains(c));
    for (i, &a) in pts.iter().enumerate() {
        for (j, &b) in pts.iter().enumerate().skip(i + 1) {
            for (k, &c) in pts.iter().enumerate().skip(j + 1) {
                if on(a, b, c) {
                    continue;
                }
                for &d in &pts[k + 1..] {
                    if !on(a, b, d) && !on(a, c, d) && !on(b, c, d) {
                        return Some([a, b, c, d]);
                    }
                }
            }
        }
    }
    None
}

/// Enough points, by its plane form; the quotient form is computed alongside.
pub fn has_enough_points(g: &FiniteGeometry) -> Result<EnoughPointsReport, ClassifyError> {
    if g.dim() < 2 {
        return Err(ClassifyError::DimensionTooLow {
            dim: g.dim(),
            required: 2,
        });
    }
    let lat = g.lattice();
    let planes = lat.planes();
    let bad_plane = planes
        .iter()
        .find(|&&p| quadrilateral(g, lat.get(p).members()).is_none())
        .map(|&p| {
            Witness::sets(
                "plane_without_quadrilateral",
                vec![lat.get(p).members().to_vec()],
            )
        });
    let planes = Verdict::from_result(planes.len() as u64, bad_plane);

    let mut short = None;
    for x in g.points() {
        let (q, _) = quotient(g, &g.set_of(&[x]))?;
        let data = q.quotient_data().expect("quotient geometry");
        let ql = q.lattice();
        if let Some(&l) = ql.lines().iter().find(|&&l| ql.get(l).len() < 3) {
            let classes = ql
                .get(l)
                .members()
                .iter()
                .map(|c| data.class(c).to_vec())
                .collect();
            short = Some(Witness::new("short_quotient_line", vec![x], classes));
            break;
        }
    }
    let quotient_lines = Verdict::from_result(g.len() as u64, short);
    Ok(EnoughPointsReport {
        holds: planes.holds,
        agree: planes.holds == quotient_lines.holds,
        planes,
        quotient_lines,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LocallyProjectiveReport {
    pub holds: bool,
    /// `X/x` satisfies P1–P3 for every `x`. Witness `points = [x]`.
    pub quotients: Verdict,
    /// Dimension formula for flat pairs through each `x`. Witness
    /// `points = [x]`, `sets` = the two flats.
    pub local_formula: Verdict,
    /// Points where the two routes disagree.
    pub disagreements: Vec<usize>,
    pub agree: bool,
}

fn formula_at(g: &FiniteGeometry, x: usize) -> (u64, Option<Witness>) {
    let lat = g.lattice();
    let through: Vec<usize> = (0..lat.len()).filter(|&i| lat.get(i).contains(x)).collect();
    let mut checked = 0;
    for (k, &i) in through.iter().enumerate() {
        for &j in &through[k..] {
            checked += 1;
            let (a, b) = (lat.get(i), lat.get(j));
            let meet = a.members().intersection(b.members());
            let mut gens = lat.basis(i).to_vec();
            gens.extend_from_slice(lat.basis(j));
            let join_dim = g.rank_of(&gens) as isize - 1;
            if a.dim() + b.dim() != join_dim + g.dim_of(&meet) {
                let sets = vec![a.members().to_vec(), b.members().to_vec()];
                return (
                    checked,
                    Some(Witness::new("local_dimension_formula", vec![x], sets)),
                );
            }
        }
    }
    (checked, None)
}

/// Both characterizations, point by point: `X/x` projective, and the
/// dimension formula for flats through `x`.
pub fn is_locally_projective(
    g: &FiniteGeometry,
    opts: ProjectiveCheckOptions,
) -> LocallyProjectiveReport {
    let mut q_witness = None;
    let mut f_witness = None;
    let mut q_exhaustive = true;
    let mut disagreements = Vec::new();
    let mut f_checked = 0;
    for x in g.points() {
        let (q, _) = quotient(g, &g.set_of(&[x])).expect("points are flats");
        let r = check_projective_axioms(&q, opts);
        q_exhaustive &= r.p3.exhaustive;
        let (c, fw) = formula_at(g, x);
        f_checked += c;
        if r.is_projective == fw.is_some() {
            disagreements.push(x);
        }
        if !r.is_projective && q_witness.is_none() {
            let data = q.quotient_data().expect("quotient geometry");
            let inner = [&r.p1, &r.p2, &r.p3, &r.generated_by_lines]
                .into_iter()
                .find_map(|v| v.witness.clone());
            let sets = inner
                .map(|w| w.points.iter().map(|&c| data.class(c).to_vec()).collect())
                .unwrap_or_default();
            q_witness = Some(Witness::new("quotient_not_projective", vec![x], sets));
        }
        if f_witness.is_none() {
            f_witness = fw;
        }
    }
    let mut quotients = Verdict::from_result(g.len() as u64, q_witness);
    if !q_exhaustive {
        quotients = quotients.sampled(opts.seed);
    }
    let local_formula = Verdict::from_result(f_checked, f_witness);
    LocallyProjectiveReport {
        holds: quotients.holds,
        agree: disagreements.is_empty(),
        quotients,
        local_formula,
        disagreements,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LpReport {
    /// Witness: a pair of points without a unique line, or a short line.
    pub lp1: Verdict,
    /// Witness: a non-collinear triple without a unique plane, or a plane
    /// whose points are all collinear.
    pub lp2: Verdict,
    /// Witness `points = [a, b]`, `sets = [plane]`.
    pub lp3: Verdict,
    /// Witness `points = [x]`, `sets = [plane, L1, L2]`.
    pub lp4: Verdict,
    /// Only for dimension 3. Witness: the two planes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lp4_prime: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lp5: Option<Verdict>,
    pub all_hold: bool,
}

/// LP1–LP4 on the lines and planes of `X`, plus LP4′ and LP5 in dimension 3.
pub fn check_lp_axioms(g: &FiniteGeometry) -> LpReport {
    let lat = g.lattice();
    let n = g.len();
    let lines = lat.lines();
    let planes = lat.planes();
    let mut on_line = vec![0u8; n * n];
    for &l in lines {
        let pts = lat.get(l).members().to_vec();
        for &a in &pts {
            for &b in &pts {
                on_line[a * n + b] = on_line[a * n + b].saturating_add(1);
            }
        }
    }
    let collinear =
        |a: usize, b: usize, c: usize| lat.line_of(g, a, b).is_some_and(|l| lat.get(l).contains(c));

    let mut lp1 = None;
    if let Some(&l) = lines.iter().find(|&&l| lat.get(l).len() < 2) {
        lp1 = Some(Witness::sets(
            "short_line",
            vec![lat.get(l).members().to_vec()],
        ));
    }
    'lp1: for a in 0..n {
        for b in a + 1..n {
            if lp1.is_some() {
                break 'lp1;
            }
            if on_line[a * n + b] != 1 {
                lp1 = Some(Witness::points("pair_not_on_unique_line", vec![a, b]));
            }
        }
    }
    let lp1 = Verdict::from_result((n * n.saturating_sub(1) / 2) as u64, lp1);

    // LP2
    let mut lp2 = None;
    let mut checked = 0u64;
    for &p in planes {
        let pts = lat.get(p).members().to_vec();
        let spans = pts.iter().enumerate().any(|(i, &a)| {
            pts[i + 1..]
                .iter()
                .enumerate()
                .any(|(j, &b)| pts[i + j + 2..].iter().any(|&c| !collinear(a, b, c)))
        });
        if !spans {
            lp2 = Some(Witness::sets("collinear_plane", vec![pts]));
            break;
        }
    }
    if lp2.is_none() {
        'lp2: for a in 0..n {
            for b in a + 1..n {
                let both: Vec<usize> = planes
                    .iter()
                    .copied()
                    .filter(|&p| lat.get(p).contains(a) && lat.get(p).contains(b))
                    .collect();
                for c in b + 1..n {
                    if collinear(a, b, c) {
                        continue;
                    }
                    checked += 1;
                    if both.iter().filter(|&&p| lat.get(p).contains(c)).count() != 1 {
                        lp2 = Some(Witness::points("triple_not_on_unique_plane", vec![a, b, c]));
                        break 'lp2;
                    }
                }
            }
        }
    }
    let lp2 = Verdict::from_result(checked, lp2);

    // LP3
    let mut lp3 = None;
    let mut checked = 0u64;
    'lp3: for &p in planes {
        let pl = lat.get(p).members();
        let pts = pl.to_vec();
        for (i, &a) in pts.iter().enumerate() {
            for &b in &pts[i + 1..] {
                checked += 1;
                let line = lat.line_of(g, a, b).map(|l| lat.get(l).members());
                if !line.is_some_and(|l| l.is_subset(pl)) {
                    lp3 = Some(Witness::new(
                        "line_leaves_plane",
                        vec![a, b],
                        vec![pts.clone()],
                    ));
                    break 'lp3;
                }
            }
        }
    }
    let lp3 = Verdict::from_result(checked, lp3);

    // LP4
    let mut joins: HashMap<(usize, usize), PointSet> = HashMap::new();
    let mut join = |l: usize, x: usize| -> PointSet {
        joins
            .entry((l, x))
            .or_insert_with(|| {
                let mut gens = lat.basis(l).to_vec();
                gens.push(x);
                g.closure_of(&gens)
            })
            .clone()
    };
    let mut lp4 = None;
    let mut checked = 0u64;
    'lp4: for &p in planes {
        let pl = lat.get(p).members();
        let inside: Vec<usize> = lines
            .iter()
            .copied()
            .filter(|&l| lat.get(l).members().is_subset(pl))
            .collect();
        for (i, &l1) in inside.iter().enumerate() {
            for &l2 in &inside[i + 1..] {
                for x in (0..n).filter(|&x| !pl.contains(x)) {
                    checked += 1;
                    let meet = join(l1, x).intersection(&join(l2, x));
                    let is_line = lat.index_of(&meet).is_some_and(|k| lat.get(k).dim() == 1);
                    if !is_line {
                        let sets = vec![
                            pl.to_vec(),
                            lat.get(l1).members().to_vec(),
                            lat.get(l2).members().to_vec(),
                        ];
                        lp4 = Some(Witness::new("planes_meet_off_a_line", vec![x], sets));
                        break 'lp4;
                    }
                }
            }
        }
    }
    let lp4 = Verdict::from_result(checked, lp4);

    let (lp4_prime, lp5) = if g.dim() == 3 {
        let mut w = None;
        let mut checked = 0u64;
        'lp4p: for (i, &p1) in planes.iter().enumerate() {
            for &p2 in &planes[i + 1..] {
                let meet = lat.get(p1).members().intersection(lat.get(p2).members());
                if meet.is_empty() {
                    continue;
                }
                checked += 1;
                if !lat.index_of(&meet).is_some_and(|k| lat.get(k).dim() == 1) {
                    let sets = vec![
                        lat.get(p1).members().to_vec(),
                        lat.get(p2).members().to_vec(),
                    ];
                    w = Some(Witness::sets("planes_meet_off_a_line", sets));
                    break 'lp4p;
                }
            }
        }
        let all: Vec<usize> = g.points().collect();
        let basis = g.basis_of(&g.full_set(), &all).unwrap_or_default();
        let lp5 = if basis.len() >= 4 {
            Verdict::pass(1)
        } else {
            Verdict::fail(1, Witness::points("coplanar_basis", basis))
        };
        (Some(Verdict::from_result(checked, w)), Some(lp5))
    } else {
        (None, None)
    };
    let all_hold = lp1.holds
        && lp2.holds
        && lp3.holds
        && lp4.holds
        && lp4_prime.as_ref().is_none_or(|v| v.holds)
        && lp5.as_ref().is_none_or(|v| v.holds);
    LpReport {
        lp1,
        lp2,
        lp3,
        lp4,
        lp4_prime,
        lp5,
        all_hold,
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BundleOptions {
    /// Enumerate exhaustively when `lines^4 <= limit`.
    pub limit: u64,
    pub seed: u64,
    /// Skew line pairs examined when sampling.
    pub samples: usize,
}

impl Default for BundleOptions {
    fn default() -> Self {
        BundleOptions {
            limit: 100_000_000,
            seed: 0xB1D,
            samples: 2000,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BundleReport {
    /// Witness: four lines (`sets`) with every pair but the last two coplanar.
    pub verdict: Verdict,
    pub lines: usize,
    /// Configurations with five coplanar pairs, no three lines coplanar.
    pub instances: u64,
    /// Four pairwise coplanar lines, no three coplanar (exhaustive runs only).
    pub bundles: u64,
    /// Bundles whose lines share a point.
    pub concurrent: u64,
}

/// The bundle theorem: four lines, no three coplanar, with five coplanar pairs
/// have the sixth pair coplanar too.
pub fn check_bundle_theorem(
    g: &FiniteGeometry,
    opts: BundleOptions,
) -> Result<BundleReport, ClassifyError> {
    if g.dim() < 3 {
        return Err(ClassifyError::DimensionTooLow {
            dim: g.dim(),
            required: 3,
        });
    }
    let lat = g.lattice();
    let lines = lat.lines();
    let m = lines.len();
    let rank = |ls: &[usize]| {
        let gens: Vec<usize> = ls
            .iter()
            .flat_map(|&i| lat.basis(lines[i]).iter().copied())
            .collect();
        g.rank_of(&gens)
    };
    let mut coplanar = vec![PointSet::empty(m); m];
    for i in 0..m {
        for j in i + 1..m {
            if rank(&[i, j]) <= 3 {
                coplanar[i].insert(j);
                coplanar[j].insert(i);
            }
        }
    }
    let skew: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .filter(|&(i, j)| !coplanar[i].contains(j))
        .collect();
    let exhaustive = (m as u64).saturating_pow(4) <= opts.limit;
    let anchors: Vec<(usize, usize)> = if exhaustive {
        skew
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        skew.choose_multiple(&mut rng, opts.samples.min(skew.len()))
            .copied()
            .collect()
    };
    let mut instances = 0u64;
    let mut witness = None;
    'outer: for &(l3, l4) in &anchors {
        let common = coplanar[l3].intersection(&coplanar[l4]).to_vec();
        for (a, &l1) in common.iter().enumerate() {
            for &l2 in &common[a + 1..] {
                if !coplanar[l1].contains(l2)
                    || rank(&[l1, l2, l3]) <= 3
                    || rank(&[l1, l2, l4]) <= 3
                {
                    continue;
                }
                instances += 1;
                let sets = [l1, l2, l3, l4]
                    .iter()
                    .map(|&i| lat.get(lines[i]).members().to_vec())
                    .collect();
                witness = Some(Witness::sets("sixth_pair_not_coplanar", sets));
                break 'outer;
            }
        }
    }
    let mut bundles = 0u64;
    let mut concurrent = 0u64;
    if exhaustive {
        for a in 0..m {
            let na: Vec<usize> = coplanar[a].iter().filter(|&b| b > a).collect();
            for (i, &b) in na.iter().enumerate() {
                for (j, &c) in na.iter().enumerate().skip(i + 1) {
                    if !coplanar[b].contains(c) || rank(&[a, b, c]) <= 3 {
                        continue;
                    }
                    for &d in &na[j + 1..] {
                        if !coplanar[b].contains(d)
                            || !coplanar[c].contains(d)
                            || rank(&[a, b, d]) <= 3
                            || rank(&[a, c, d]) <= 3
                            || rank(&[b, c, d]) <= 3
                        {
                            continue;
                        }
                        bundles += 1;
                        let mut common = lat.get(lines[a]).members().clone();
                        for &l in &[b, c, d] {
                            common.intersect_with(lat.get(lines[l]).members());
                        }
                        if !common.is_empty() {
                            concurrent += 1;
                        }
                    }
                }
            }
        }
    }
    let mut verdict = Verdict::from_result(anchors.len() as u64, witness);
    if !exhaustive {
        verdict = verdict.sampled(opts.seed);
    }
    Ok(BundleReport {
        verdict,
        lines: m,
        instances,
        bundles,
        concurrent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{affine, exchange_failure, make_quadric, near_pencil, QuadricForm};
    use crate::gf::GaloisField;
    use crate::projective::build_pg;

    fn gf(q: u32) -> &'static GaloisField {
        GaloisField::get(q).unwrap()
    }

    #[test]
    fn five_point_ovoid_is_not_locally_projective() {
        // X/x has four points, 2-point lines, and any three span it
        let x = make_quadric(&build_pg(3, gf(2)).unwrap(), QuadricForm::Elliptic).unwrap();
        assert_eq!(x.len(), 5);
        let r = is_locally_projective(&x, ProjectiveCheckOptions::default());
        assert!(!r.holds && !r.local_formula.holds && r.agree);
    }

    #[test]
    fn enough_points() {
        let r = has_enough_points(&build_pg(3, gf(2)).unwrap()).unwrap();
        assert!(r.holds && r.agree);
        let pg = build_pg(3, gf(4)).unwrap();
        let r = has_enough_points(&make_quadric(&pg, QuadricForm::Elliptic).unwrap()).unwrap();
        assert!(r.holds && r.agree);
        let r = has_enough_points(&near_pencil()).unwrap();
        assert!(r.planes.holds && !r.quotient_lines.holds && !r.agree);
        assert!(has_enough_points(&build_pg(1, gf(2)).unwrap()).is_err());
    }

    #[test]
    fn locally_projective_examples() {
        let opts = ProjectiveCheckOptions::default();
        let ag = affine(3, gf(3)).unwrap();
        let r = is_locally_projective(&ag, opts);
        assert!(r.holds && r.agree);
        let pg = build_pg(3, gf(3)).unwrap();
        let e = make_quadric(&pg, QuadricForm::Elliptic).unwrap();
        let r = is_locally_projective(&e, opts);
        assert!(!r.holds && r.agree);
        assert_eq!(r.local_formula.witness.as_ref().unwrap().sets.len(), 2);
    }

    #[test]
    fn lp_axioms() {
        let r = check_lp_axioms(&build_pg(3, gf(2)).unwrap());
        assert!(r.all_hold && r.lp4_prime.is_some(), "{r:?}");
        let r = check_lp_axioms(&affine(3, gf(3)).unwrap());
        assert!(r.all_hold, "{r:?}");
        let r = check_lp_axioms(&exchange_failure());
        assert!(!r.lp1.holds);
        assert_eq!(r.lp1.witness.unwrap().points, vec![0, 3]);
    }

    #[test]
    fn bundles_in_pg32() {
        let r =
            check_bundle_theorem(&build_pg(3, gf(2)).unwrap(), BundleOptions::default()).unwrap();
        assert!(r.verdict.holds && r.verdict.exhaustive);
        assert_eq!(r.lines, 35);
        // 15 points, 7 quadrangles of the Fano plane of lines through each
        assert_eq!(r.bundles, 105);
        assert_eq!(r.concurrent, r.bundles);
        let pg = build_pg(3, gf(3)).unwrap();
        let e = make_quadric(&pg, QuadricForm::Elliptic).unwrap();
        let r = check_bundle_theorem(&e, BundleOptions::default()).unwrap();
        assert!(r.verdict.holds && r.verdict.exhaustive);
    }
}

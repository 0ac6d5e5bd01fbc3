use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ProjectiveError;
use crate::geometry::{is_generated_by_lines, FiniteGeometry};
use crate::report::{Verdict, Witness};

#[derive(Debug, Clone, Copy)]
pub struct ProjectiveCheckOptions {
    /// Above this many configurations a check samples `limit` of them instead.
    pub limit: u64,
    pub seed: u64,
}

impl Default for ProjectiveCheckOptions {
    fn default() -> Self {
        ProjectiveCheckOptions {
            limit: 100_000_000,
            seed: 0x5EED,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProjectiveAxiomReport {
    /// A unique line through any two points. Witness: the pair.
    pub p1: Verdict,
    /// Every line has two points. Witness: the line.
    pub p2: Verdict,
    /// Veblen–Young. Witness `points = [a, b, c, p, p']`: triangle `a b c`,
    /// `p ∈ ab`, `p' ∈ ac`, and `pp'` misses `bc`.
    pub p3: Verdict,
    /// The flats are exactly the subsets closed under joining lines.
    pub generated_by_lines: Verdict,
    /// Over all flat pairs. Witness: the two flats.
    pub dimension_formula: Verdict,
    /// The formula restricted to pairs with a common point.
    pub local_dimension_formula: Verdict,
    pub irreducible: bool,
    pub is_projective: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// P1, P2, P3, generation by lines and the dimension formula, exhaustive up to `opts.limit`.
pub fn check_projective_axioms(
    g: &FiniteGeometry,
    opts: ProjectiveCheckOptions,
) -> ProjectiveAxiomReport {
    let lat = g.lattice();
    let n = g.len();
    let lines = lat.lines();

    // P1: every pair on exactly one line
    let mut count = vec![0u8; n * n];
    for &l in lines {
        let pts = lat.get(l).members().to_vec();
        for &a in &pts {
            for &b in &pts {
                count[a * n + b] = count[a * n + b].saturating_add(1);
            }
        }
    }
    let mut p1 = Verdict::pass((n * n.saturating_sub(1) / 2) as u64);
    'p1: for a in 0..n {
        for b in a + 1..n {
            if count[a * n + b] != 1 {
                p1 = Verdict::fail(0, Witness::points("pair_not_on_unique_line", vec![a, b]));
                break 'p1;
            }
        }
    }

    let p2 = Verdict::from_result(
        lines.len() as u64,
        lines
            .iter()
            .find(|&&l| lat.get(l).len() < 2)
            .map(|&l| Witness::sets("short_line", vec![lat.get(l).members().to_vec()])),
    );

    let p3 = veblen_young(g, opts);
    let (dimension_formula, local_dimension_formula) = dimension_formula(g, opts);

    let irreducible = lines.iter().all(|&l| lat.get(l).len() >= 3);
    let generated_by_lines = is_generated_by_lines(g);
    let is_projective = p1.holds && p2.holds && p3.holds && generated_by_lines.holds;
    let note = (!dimension_formula.holds && local_dimension_formula.holds)
        .then(|| "not projective, locally projective candidate".to_string());
    ProjectiveAxiomReport {
        p1,
        p2,
        p3,
        generated_by_lines,
        dimension_formula,
        local_dimension_formula,
        irreducible,
        is_projective,
        note,
    }
}

fn veblen_young(g: &FiniteGeometry, opts: ProjectiveCheckOptions) -> Verdict {
    let lat = g.lattice();
    let n = g.len();
    let mut total: u64 = 0;
    for a in 0..n {
        let through = lat.lines_through(a);
        let sizes: Vec<u64> = through
            .iter()
            .map(|&l| lat.get(l).len() as u64 - 1)
            .collect();
        let sum: u64 = sizes.iter().map(|s| s * s).sum();
        let sq: u64 = sizes.iter().map(|s| s * s * s * s).sum();
        total = total.saturating_add((sum * sum - sq) / 2);
    }
    let check = |a: usize, b: usize, c: usize, p: usize, pp: usize| -> Option<Witness> {
        let m = lat.line_of(g, p, pp)?;
        let bc = lat.line_of(g, b, c)?;
        (!lat.get(m).members().intersects(lat.get(bc).members()))
            .then(|| Witness::points("veblen_young", vec![a, b, c, p, pp]))
    };
    if total <= opts.limit {
        let mut checked = 0u64;
        for a in 0..n {
            let through = lat.lines_through(a);
            for (i, &l1) in through.iter().enumerate() {
                let r1: Vec<usize> = lat.get(l1).members().iter().filter(|&x| x != a).collect();
                for &l2 in &through[i + 1..] {
                    let r2: Vec<usize> = lat.get(l2).members().iter().filter(|&x| x != a).collect();
                    for &b in &r1 {
                        for &c in &r2 {
                            for &p in &r1 {
                                for &pp in &r2 {
                                    checked += 1;
                                    if let Some(w) = check(a, b, c, p, pp) {
                                        return Verdict::fail(checked, w);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Verdict::pass(checked)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for t in 0..opts.limit {
            let a = rng.gen_range(0..n);
            let through = lat.lines_through(a);
            if through.len() < 2 {
                continue;
            }
            let i = rng.gen_range(0..through.len());
            let mut j = rng.gen_range(0..through.len() - 1);
            if j >= i {
                j += 1;
            }
            let pick = |l: usize, rng: &mut ChaCha8Rng| {
                let r: Vec<usize> = lat.get(l).members().iter().filter(|&x| x != a).collect();
                r[rng.gen_range(0..r.len())]
            };
            let (b, p) = (pick(through[i], &mut rng), pick(through[i], &mut rng));
            let (c, pp) = (pick(through[j], &mut rng), pick(through[j], &mut rng));
            if let Some(w) = check(a, b, c, p, pp) {
                return Verdict::fail(t + 1, w).sampled(opts.seed);
            }
        }
        Verdict::pass(opts.limit).sampled(opts.seed)
    }
}

/// Returns (all pairs, pairs with a common point).
fn dimension_formula(g: &FiniteGeometry, opts: ProjectiveCheckOptions) -> (Verdict, Verdict) {
    let lat = g.lattice();
    let flats = lat.flats();
    let total = (flats.len() as u64).pow(2) / 2;
    let exhaustive = total <= opts.limit;
    let mut global = None;
    let mut local = None;
    let mut checked = 0u64;
    let mut test = |i: usize, j: usize| {
        checked += 1;
        let (a, b) = (&flats[i], &flats[j]);
        let meet = a.members().intersection(b.members());
        let meet_dim = match lat.index_of(&meet) {
            Some(k) => flats[k].dim(),
            None => g.dim_of(&meet),
        };
        let mut gens = lat.basis(i).to_vec();
        gens.extend_from_slice(lat.basis(j));
        let join_dim = g.rank_of(&gens) as isize - 1;
        if a.dim() + b.dim() != join_dim + meet_dim {
            let w = || {
                Witness::sets(
                    "dimension_formula",
                    vec![a.members().to_vec(), b.members().to_vec()],
                )
            };
            if global.is_none() {
                global = Some(w());
            }
            if local.is_none() && !meet.is_empty() {
                local = Some(w());
            }
        }
        global.is_some() && local.is_some()
    };
    if exhaustive {
        'outer: for i in 0..flats.len() {
            for j in i..flats.len() {
                if test(i, j) {
                    break 'outer;
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.limit {
            if test(rng.gen_range(0..flats.len()), rng.gen_range(0..flats.len())) {
                break;
            }
        }
    }
    let wrap = |w| {
        let v = Verdict::from_result(checked, w);
        if exhaustive {
            v
        } else {
            v.sampled(opts.seed)
        }
    };
    (wrap(global), wrap(local))
}

/// Classes of "equal, or joined by a line with at least three points".
pub fn decompose_irreducible(g: &FiniteGeometry) -> Result<Vec<Vec<usize>>, ProjectiveError> {
    let r = check_projective_axioms(g, ProjectiveCheckOptions::default());
    if !r.is_projective {
        return Err(ProjectiveError::NotProjective);
    }
    let lat = g.lattice();
    let mut parent: Vec<usize> = g.points().collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    for &l in lat.lines() {
        let pts = lat.get(l).members().to_vec();
        if pts.len() >= 3 {
            for &x in &pts[1..] {
                let (a, b) = (find(&mut parent, pts[0]), find(&mut parent, x));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; g.len()];
    for x in g.points() {
        let r = find(&mut parent, x);
        if slot[r] == usize::MAX {
            slot[r] = classes.len();
            classes.push(Vec::new());
        }
        classes[slot[r]].push(x);
    }
    Ok(classes)
}

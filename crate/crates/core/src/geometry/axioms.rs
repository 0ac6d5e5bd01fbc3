use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{FiniteGeometry, Kind, PointSet};
use crate::report::{Verdict, Witness};

pub type AxiomVerdict = Verdict;

#[derive(Debug, Clone, Serialize)]
pub struct GeometryAxiomReport {
    pub g1: AxiomVerdict,
    pub g2: AxiomVerdict,
    pub g3: AxiomVerdict,
    /// Finitary axiom; vacuous for a finite universe.
    pub g4: AxiomVerdict,
}

impl GeometryAxiomReport {
    pub fn all_hold(&self) -> bool {
        self.g1.holds && self.g2.holds && self.g3.holds && self.g4.holds
    }
}

/// The declared closed sets: the table itself for abstract geometries,
/// otherwise every closed set of the closure operator.
fn family(g: &FiniteGeometry) -> Vec<PointSet> {
    match &g.0.kind {
        Kind::Table(t) => t.clone(),
        _ => g
            .lattice()
            .flats()
            .iter()
            .map(|f| f.members().clone())
            .collect(),
    }
}

/// G1 to G4 with a witness for each failure. For G3 the witness is the triple
/// `(S, x, S')` with `S ⊊ S' ⊊ S ∨ x`; it is stored as `sets = [S, S']`,
/// `points = [x]`.
pub fn check_geometry_axioms(g: &FiniteGeometry) -> GeometryAxiomReport {
    let fam = family(g);
    let closed: HashSet<&PointSet> = fam.iter().collect();

    let mut checked = 0;
    let mut g1_witness = None;
    let mut required = vec![g.empty_set(), g.full_set()];
    required.extend(g.points().map(|x| PointSet::singleton(g.len(), x)));
    for s in &required {
        checked += 1;
        if !closed.contains(s) {
            g1_witness = Some(Witness::sets("not_closed", vec![s.to_vec()]));
            break;
        }
    }
    let g1 = Verdict::from_result(checked, g1_witness);

    let mut checked = 0;
    let mut g2_witness = None;
    'outer: for (i, a) in fam.iter().enumerate() {
        for b in &fam[i + 1..] {
            checked += 1;
            let m = a.intersection(b);
            if !closed.contains(&m) {
                g2_witness = Some(Witness::sets(
                    "intersection_not_closed",
                    vec![a.to_vec(), b.to_vec(), m.to_vec()],
                ));
                break 'outer;
            }
        }
    }
    let g2 = Verdict::from_result(checked, g2_witness);

    let mut checked = 0;
    let mut g3_witness = None;
    let mut sorted = fam.clone();
    sorted.sort_by_cached_key(|s| (g.rank(s), s.clone()));
    'g3: for s in &sorted {
        let gens = s.to_vec();
        for x in g.points().filter(|&x| !s.contains(x)) {
            checked += 1;
            let mut with_x = gens.clone();
            with_x.push(x);
            let jx = g.closure_of(&with_x);
            for y in jx.difference(s).iter() {
                let mut with_y = gens.clone();
                with_y.push(y);
                let jy = g.closure_of(&with_y);
                if jy != jx {
                    g3_witness = Some(Witness::new(
                        "exchange",
                        vec![x],
                        vec![s.to_vec(), jy.to_vec()],
                    ));
                    break 'g3;
                }
            }
        }
    }
    let g3 = Verdict::from_result(checked, g3_witness);

    GeometryAxiomReport {
        g1,
        g2,
        g3,
        g4: Verdict::pass(0),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosureLawReport {
    pub extensive: AxiomVerdict,
    pub monotone: AxiomVerdict,
    pub idempotent: AxiomVerdict,
}

impl ClosureLawReport {
    pub fn all_hold(&self) -> bool {
        self.extensive.holds && self.monotone.holds && self.idempotent.holds
    }
}

/// Extensive, monotone and idempotent. Exhaustive over all subsets up to 12
/// points, otherwise `samples` random pairs `A ⊆ B` from `seed`.
pub fn check_closure_laws(g: &FiniteGeometry, samples: usize, seed: u64) -> ClosureLawReport {
    let n = g.len();
    let mut ext = None;
    let mut mono = None;
    let mut idem = None;
    let mut count = 0u64;
    let mut check = |a: &PointSet, b: &PointSet| {
        let ca = g.closure(a);
        let cb = g.closure(b);
        if ext.is_none() && !a.is_subset(&ca) {
            ext = Some(Witness::sets(
                "not_extensive",
                vec![a.to_vec(), ca.to_vec()],
            ));
        }
        if mono.is_none() && !ca.is_subset(&cb) {
            mono = Some(Witness::sets("not_monotone", vec![a.to_vec(), b.to_vec()]));
        }
        if idem.is_none() && g.closure(&ca) != ca {
            idem = Some(Witness::sets("not_idempotent", vec![a.to_vec()]));
        }
    };
    let exhaustive = n <= 12;
    if exhaustive {
        for mask in 0u32..(1 << n) {
            let a = PointSet::from_iter(n, (0..n).filter(|i| mask >> i & 1 == 1));
            for x in (0..n).filter(|i| mask >> i & 1 == 0) {
                let mut b = a.clone();
                b.insert(x);
                check(&a, &b);
                count += 1;
            }
            if mask == (1 << n) - 1 {
                check(&a, &a);
                count += 1;
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let k = rng.gen_range(0..=n.min(6));
            let a = PointSet::from_iter(n, (0..k).map(|_| rng.gen_range(0..n)));
            let mut b = a.clone();
            for _ in 0..rng.gen_range(0..=3) {
                b.insert(rng.gen_range(0..n));
            }
            check(&a, &b);
            count += 1;
        }
    }
    let wrap = |w: Option<Witness>| {
        let v = Verdict::from_result(count, w);
        if exhaustive {
            v
        } else {
            v.sampled(seed)
        }
    };
    ClosureLawReport {
        extensive: wrap(ext),
        monotone: wrap(mono),
        idempotent: wrap(idem),
    }
}

use std::collections::HashMap;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{FiniteGeometry, GeometryError, PointSet};
use crate::report::{Verdict, Witness};

/// A total point map whose flat preimages are flats.
#[derive(Clone, Debug)]
pub struct GeometryMorphism {
    source: FiniteGeometry,
    target: FiniteGeometry,
    map: Vec<usize>,
}

/// A map defined exactly off an exceptional flat `E`, constant on the classes
/// `x ∨ E`, and a morphism on the complement of `E`.
#[derive(Clone, Debug)]
pub struct PartialMorphism {
    source: FiniteGeometry,
    target: FiniteGeometry,
    exceptional: PointSet,
    map: Vec<Option<usize>>,
}

pub type MorphismWitness = Witness;

fn check_shape(
    source: &FiniteGeometry,
    target: &FiniteGeometry,
    map: &[Option<usize>],
) -> Result<(), GeometryError> {
    if map.len() != source.len() {
        return Err(GeometryError::LengthMismatch {
            expected: source.len(),
            found: map.len(),
        });
    }
    if let Some(&bad) = map.iter().flatten().find(|&&y| y >= target.len()) {
        return Err(GeometryError::PointOutOfRange {
            point: bad,
            n: target.len(),
        });
    }
    Ok(())
}

impl GeometryMorphism {
    /// Validates condition (a) on every target flat.
    pub fn new(
        source: FiniteGeometry,
        target: FiniteGeometry,
        map: Vec<usize>,
    ) -> Result<Self, GeometryError> {
        let opt: Vec<Option<usize>> = map.iter().map(|&y| Some(y)).collect();
        check_shape(&source, &target, &opt)?;
        let a = condition_a(&source, &target, &opt);
        if let Some(w) = a.witness {
            return Err(GeometryError::NotAMorphism(format!(
                "preimage {:?} of flat {:?} is not closed",
                w.sets[1], w.sets[0]
            )));
        }
        Ok(GeometryMorphism {
            source,
            target,
            map,
        })
    }

    pub fn new_unchecked(source: FiniteGeometry, target: FiniteGeometry, map: Vec<usize>) -> Self {
        GeometryMorphism {
            source,
            target,
            map,
        }
    }

    pub fn source(&self) -> &FiniteGeometry {
        &self.source
    }

    pub fn target(&self) -> &FiniteGeometry {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn image_of(&self, a: &PointSet) -> PointSet {
        PointSet::from_iter(self.target.len(), a.iter().map(|x| self.map[x]))
    }

    pub fn image(&self) -> PointSet {
        PointSet::from_iter(self.target.len(), self.map.iter().copied())
    }

    pub fn is_injective(&self) -> bool {
        self.image().len() == self.map.len()
    }

    pub fn is_surjective(&self) -> bool {
        self.image().len() == self.target.len()
    }

    /// `self` after `first`.
    pub fn after(&self, first: &GeometryMorphism) -> GeometryMorphism {
        assert_eq!(first.target, self.source);
        GeometryMorphism {
            source: first.source.clone(),
            target: self.target.clone(),
            map: first.map.iter().map(|&y| self.map[y]).collect(),
        }
    }

    pub fn as_partial(&self) -> PartialMorphism {
        PartialMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            exceptional: self.source.empty_set(),
            map: self.map.iter().map(|&y| Some(y)).collect(),
        }
    }
}

impl PartialMorphism {
    /// Validates that the undefined set is a flat, that the map is constant on
    /// its classes, and condition (a) on the domain.
    pub fn new(
        source: FiniteGeometry,
        target: FiniteGeometry,
        map: Vec<Option<usize>>,
    ) -> Result<Self, GeometryError> {
        check_shape(&source, &target, &map)?;
        let exceptional =
            PointSet::from_iter(source.len(), (0..map.len()).filter(|&i| map[i].is_none()));
        if !source.is_flat(&exceptional) {
            return Err(GeometryError::NotAFlat(exceptional.to_vec()));
        }
        if let Some((a, b)) = class_violation(&source, &exceptional, &map) {
            return Err(GeometryError::NotConstantOnClasses(a, b));
        }
        let a = condition_a(&source, &target, &map);
        if let Some(w) = a.witness {
            return Err(GeometryError::NotAMorphism(format!(
                "preimage {:?} of flat {:?} is not closed in the domain",
                w.sets[1], w.sets[0]
            )));
        }
        Ok(PartialMorphism {
            source,
            target,
            exceptional,
            map,
        })
    }

    pub fn new_unchecked(
        source: FiniteGeometry,
        target: FiniteGeometry,
        map: Vec<Option<usize>>,
    ) -> Self {
        let exceptional =
            PointSet::from_iter(source.len(), (0..map.len()).filter(|&i| map[i].is_none()));
        PartialMorphism {
            source,
            target,
            exceptional,
            map,
        }
    }

    pub fn source(&self) -> &FiniteGeometry {
        &self.source
    }

    pub fn target(&self) -> &FiniteGeometry {
        &self.target
    }

    pub fn exceptional(&self) -> &PointSet {
        &self.exceptional
    }

    pub fn map(&self) -> &[Option<usize>] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        self.map[x]
    }

    pub fn domain(&self) -> PointSet {
        self.exceptional.complement()
    }

    /// The restriction to the domain, as a total morphism on the subgeometry.
    pub fn restriction(&self) -> GeometryMorphism {
        let dom = self.domain();
        let sub = self
            .source
            .subgeometry(&dom, format!("{}-dom", self.source.label()));
        let map = dom
            .iter()
            .map(|x| self.map[x].expect("defined on the domain"))
            .collect();
        GeometryMorphism::new_unchecked(sub, self.target.clone(), map)
    }
}

/// First pair in one `E`-class with different images.
pub(super) fn class_violation(
    source: &FiniteGeometry,
    e: &PointSet,
    map: &[Option<usize>],
) -> Option<(usize, usize)> {
    let gens = e.to_vec();
    let mut seen: HashMap<PointSet, usize> = HashMap::new();
    for x in 0..source.len() {
        if e.contains(x) {
            continue;
        }
        let mut g = gens.clone();
        g.push(x);
        let j = source.closure_of(&g);
        match seen.get(&j) {
            Some(&rep) if map[rep] != map[x] => return Some((rep, x)),
            Some(_) => {}
            None => {
                seen.insert(j, x);
            }
        }
    }
    None
}

/// Condition (a): the preimage of each target flat is closed in the domain.
/// Witness `sets = [flat, preimage, closure of preimage within the domain]`.
fn condition_a(source: &FiniteGeometry, target: &FiniteGeometry, map: &[Option<usize>]) -> Verdict {
    let domain = PointSet::from_iter(source.len(), (0..map.len()).filter(|&i| map[i].is_some()));
    let mut checked = 0;
    for f in target.lattice().flats() {
        checked += 1;
        let pre = PointSet::from_iter(
            source.len(),
            (0..map.len()).filter(|&i| map[i].is_some_and(|y| f.contains(y))),
        );
        let cl = source.closure(&pre).intersection(&domain);
        if cl != pre {
            return Verdict::fail(
                checked,
                Witness::sets(
                    "preimage_not_closed",
                    vec![f.members().to_vec(), pre.to_vec(), cl.to_vec()],
                ),
            );
        }
    }
    Verdict::pass(checked)
}

#[derive(Debug, Clone, Copy)]
pub struct MorphismCheckOptions {
    /// Above this many subsets of size 2 to 4 the closure check samples.
    pub subset_cap: u64,
    pub seed: u64,
}

impl Default for MorphismCheckOptions {
    fn default() -> Self {
        MorphismCheckOptions {
            subset_cap: 200_000,
            seed: 0xC0C,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MorphismReport {
    /// Preimages of flats are flats.
    pub condition_a: Verdict,
    /// `φ(cl A) ⊆ cl φ(A)` for every domain subset with 2 to 4 points.
    /// Witness `points = A ++ [x]` with `x ∈ cl A` and `φ(x) ∉ cl φ(A)`.
    pub condition_c: Verdict,
    pub agree: bool,
    /// Set when an exhaustive subset check disagrees with condition (a).
    pub internal_error: bool,
}

impl MorphismReport {
    pub fn is_morphism(&self) -> bool {
        self.condition_a.holds
    }
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Checks a candidate (possibly partial) point map against both morphism conditions.
pub fn check_morphism(
    source: &FiniteGeometry,
    target: &FiniteGeometry,
    map: &[Option<usize>],
    opts: MorphismCheckOptions,
) -> Result<MorphismReport, GeometryError> {
    check_shape(source, target, map)?;
    let condition_a = condition_a(source, target, map);

    let dom: Vec<usize> = (0..map.len()).filter(|&i| map[i].is_some()).collect();
    let domain = PointSet::from_iter(source.len(), dom.iter().copied());
    let d = dom.len() as u64;
    let total = binom(d, 2) + binom(d, 3) + binom(d, 4);
    let exhaustive = total <= opts.subset_cap;

    let mut checked = 0u64;
    let mut test = |a: &[usize]| -> Option<Witness> {
        checked += 1;
        let cl = source.closure_of(a).intersection(&domain);
        let img: Vec<usize> = a.iter().map(|&x| map[x].unwrap()).collect();
        let cl_img = target.closure_of(&img);
        let bad = cl.iter().find(|&x| !cl_img.contains(map[x].unwrap()));
        bad.map(|x| {
            let mut pts = a.to_vec();
            pts.push(x);
            Witness::points("closure_not_preserved", pts)
        })
    };
    let mut witness = None;
    if exhaustive {
        'size: for k in 2..=4usize.min(dom.len()) {
            let mut idx: Vec<usize> = (0..k).collect();
            loop {
                let a: Vec<usize> = idx.iter().map(|&i| dom[i]).collect();
                if let Some(w) = test(&a) {
                    witness = Some(w);
                    break 'size;
                }
                // next k-combination in lexicographic order
                let mut i = k;
                while i > 0 && idx[i - 1] == dom.len() - k + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                idx[i - 1] += 1;
                for j in i..k {
                    idx[j] = idx[j - 1] + 1;
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for t in 0..opts.subset_cap {
            let k = 2 + (t % 3) as usize;
            let mut a: Vec<usize> = sample(&mut rng, dom.len(), k)
                .into_iter()
                .map(|i| dom[i])
                .collect();
            a.sort_unstable();
            if let Some(w) = test(&a) {
                witness = Some(w);
                break;
            }
        }
    }
    let mut condition_c = Verdict::from_result(checked, witness);
    if !exhaustive {
        condition_c = condition_c.sampled(opts.seed);
    }
    let agree = condition_a.holds == condition_c.holds;
    Ok(MorphismReport {
        internal_error: !agree && condition_c.exhaustive && condition_a.holds,
        condition_a,
        condition_c,
        agree,
    })
}

/// Injective with a morphism inverse on the image subgeometry.
/// Witness `sets = [S, φ(S), closure of φ(S) within the image]`.
pub fn is_embedding(phi: &GeometryMorphism) -> Verdict {
    if !phi.is_injective() {
        let mut first = HashMap::new();
        for (x, &y) in phi.map.iter().enumerate() {
            if let Some(&x0) = first.get(&y) {
                return Verdict::fail(0, Witness::points("not_injective", vec![x0, x]));
            }
            first.insert(y, x);
        }
    }
    let image = phi.image();
    let mut checked = 0;
    for f in phi.source.lattice().flats() {
        checked += 1;
        let img = phi.image_of(f.members());
        let cl = phi.target.closure(&img).intersection(&image);
        if cl != img {
            return Verdict::fail(
                checked,
                Witness::sets(
                    "image_not_closed",
                    vec![f.members().to_vec(), img.to_vec(), cl.to_vec()],
                ),
            );
        }
    }
    Verdict::pass(checked)
}

#[derive(Debug, Clone, Serialize)]
pub struct DimBoundsReport {
    pub source_dim: isize,
    pub target_dim: isize,
    /// `dim X >= dim X'`.
    pub bound_holds: bool,
    pub bijective: bool,
    pub isomorphism: bool,
    /// Equal finite dimensions force an isomorphism.
    pub equality_case_holds: bool,
    pub note: String,
}

/// Dimension comparison for a surjective morphism.
pub fn check_dim_bounds(phi: &GeometryMorphism) -> Result<DimBoundsReport, GeometryError> {
    if !phi.is_surjective() {
        return Err(GeometryError::NotSurjective);
    }
    let source_dim = phi.source.dim();
    let target_dim = phi.target.dim();
    let bijective = phi.is_injective();
    let isomorphism = bijective && is_embedding(phi).holds;
    let equal = source_dim == target_dim;
    let note = match (equal, bijective, isomorphism) {
        (_, _, true) => "isomorphism",
        (true, _, false) => "equal dimensions without isomorphism",
        (false, true, false) => "bijective morphism, not an isomorphism",
        (false, false, _) => "dimension drops",
    };
    Ok(DimBoundsReport {
        source_dim,
        target_dim,
        bound_holds: source_dim >= target_dim,
        bijective,
        isomorphism,
        equality_case_holds: !equal || isomorphism,
        note: note.to_string(),
    })
}

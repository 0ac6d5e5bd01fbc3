use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

use super::{FiniteGeometry, Flat, PointSet};

/// Pair tables above this many points would be too large; lines are then
/// found by closure and lookup.
const PAIR_TABLE_MAX: usize = 1500;

/// All flats of a geometry, sorted by `(dim, members)`.
pub struct FlatLattice {
    n: usize,
    flats: Vec<Flat>,
    bases: Vec<Vec<usize>>,
    index: HashMap<PointSet, usize>,
    by_dim: Vec<Vec<usize>>,
    lines: OnceLock<LineTable>,
}

struct LineTable {
    pair: Option<Vec<u32>>,
    through: Vec<Vec<usize>>,
}

impl FlatLattice {
    pub(super) fn build(g: &FiniteGeometry) -> FlatLattice {
        let n = g.len();
        let start = g.closure_of(&[]);
        let start_gens = g.greedy(&start.to_vec());
        let mut seen: HashMap<PointSet, Vec<usize>> = HashMap::new();
        seen.insert(start.clone(), start_gens.clone());
        let mut queue = VecDeque::from([(start, start_gens)]);
        let skip = g.exchange_assumed();
        while let Some((s, gens)) = queue.pop_front() {
            let mut covered = s.clone();
            for x in 0..n {
                if covered.contains(x) {
                    continue;
                }
                let mut next_gens = gens.clone();
                next_gens.push(x);
                let j = g.closure_of(&next_gens);
                if skip {
                    // with exchange every y in J - S generates the same J
                    covered.union_with(&j);
                }
                if !seen.contains_key(&j) {
                    seen.insert(j.clone(), next_gens.clone());
                    queue.push_back((j, next_gens));
                }
            }
        }
        let mut entries: Vec<(Flat, Vec<usize>)> = seen
            .into_iter()
            .map(|(members, gens)| {
                let dim = g.rank_of(&gens) as isize - 1;
                let basis = g.greedy(&members.to_vec());
                (Flat { members, dim }, basis)
            })
            .collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let mut flats = Vec::with_capacity(entries.len());
        let mut bases = Vec::with_capacity(entries.len());
        for (f, b) in entries {
            flats.push(f);
            bases.push(b);
        }
        let index = flats
            .iter()
            .enumerate()
            .map(|(i, f)| (f.members.clone(), i))
            .collect();
        let top = flats.iter().map(|f| f.dim).max().unwrap_or(-1);
        let mut by_dim = vec![Vec::new(); (top + 2) as usize];
        for (i, f) in flats.iter().enumerate() {
            by_dim[(f.dim + 1) as usize].push(i);
        }
        FlatLattice {
            n,
            flats,
            bases,
            index,
            by_dim,
            lines: OnceLock::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn get(&self, i: usize) -> &Flat {
        &self.flats[i]
    }

    /// Greedy basis of flat `i` in canonical point order.
    pub fn basis(&self, i: usize) -> &[usize] {
        &self.bases[i]
    }

    pub fn index_of(&self, s: &PointSet) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Indices of flats of dimension `d`.
    pub fn of_dim(&self, d: isize) -> &[usize] {
        if d < -1 || (d + 1) as usize >= self.by_dim.len() {
            return &[];
        }
        &self.by_dim[(d + 1) as usize]
    }

    /// Dimension of the top flat.
    pub fn top_dim(&self) -> isize {
        self.by_dim.len() as isize - 2
    }

    pub fn lines(&self) -> &[usize] {
        self.of_dim(1)
    }

    pub fn planes(&self) -> &[usize] {
        self.of_dim(2)
    }

    /// Flats of codimension one.
    pub fn hyperplanes(&self) -> &[usize] {
        self.of_dim(self.top_dim() - 1)
    }

    fn line_table(&self) -> &LineTable {
        self.lines.get_or_init(|| {
            let mut through = vec![Vec::new(); self.n];
            let mut pair = (self.n <= PAIR_TABLE_MAX).then(|| vec![u32::MAX; self.n * self.n]);
            for &l in self.lines() {
                let pts = self.flats[l].members.to_vec();
                for &a in &pts {
                    through[a].push(l);
                    if let Some(t) = pair.as_mut() {
                        for &b in &pts {
                            t[a * self.n + b] = l as u32;
                        }
                    }
                }
            }
            LineTable { pair, through }
        })
    }

    /// Lines (flat indices) through point `x`.
    pub fn lines_through(&self, x: usize) -> &[usize] {
        &self.line_table().through[x]
    }

    /// Index of the line `x ∨ y`, for `x != y` when that join is a line.
    pub fn line_of(&self, g: &FiniteGeometry, x: usize, y: usize) -> Option<usize> {
        let t = self.line_table();
        if let Some(pair) = &t.pair {
            let l = pair[x * self.n + y];
            return (l != u32::MAX).then_some(l as usize);
        }
        let j = g.closure_of(&[x, y]);
        self.index_of(&j).filter(|&i| self.flats[i].dim == 1)
    }
}

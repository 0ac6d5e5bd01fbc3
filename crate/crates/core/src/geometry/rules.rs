use std::collections::HashSet;

use super::{FiniteGeometry, PointSet};
use crate::report::{Verdict, Witness};

pub type RuleReport = Verdict;

struct RuleClosure<'a> {
    g: &'a FiniteGeometry,
    planes: bool,
    set: PointSet,
    point_queue: Vec<usize>,
    line_queue: Vec<usize>,
    inside: Vec<usize>,
    inside_set: HashSet<usize>,
}

impl RuleClosure<'_> {
    fn add_point(&mut self, w: usize) {
        if self.set.insert(w) {
            self.point_queue.push(w);
        }
    }

    fn add_line(&mut self, l: usize) {
        let lat = self.g.lattice();
        for w in lat.get(l).members().iter() {
            self.add_point(w);
        }
        if self.planes && self.inside_set.insert(l) {
            self.inside.push(l);
            self.line_queue.push(l);
        }
    }

    fn add_plane(&mut self, l: usize, z: usize) {
        let lat = self.g.lattice();
        let mut gens = lat.basis(l).to_vec();
        gens.push(z);
        for w in self.g.closure_of(&gens).iter() {
            self.add_point(w);
        }
    }

    fn line(&self, y: usize, z: usize) -> Option<usize> {
        self.g.lattice().line_of(self.g, y, z)
    }

    /// Smallest rule-closed superset of `c ∪ {x}`; stops early once it
    /// reaches `target`, the flat it would have to equal.
    fn run(&mut self, target: &PointSet) {
        while &self.set != target {
            if let Some(z) = self.point_queue.pop() {
                let snapshot = self.set.to_vec();
                for y in snapshot {
                    if y != z {
                        if let Some(l) = self.line(y, z) {
                            self.add_line(l);
                        }
                    }
                }
                if self.planes {
                    let lat = self.g.lattice();
                    let lines: Vec<usize> = self.inside.clone();
                    for l in lines {
                        if !lat.get(l).contains(z) {
                            self.add_plane(l, z);
                        }
                    }
                }
            } else if let Some(l) = self.line_queue.pop() {
                let lat = self.g.lattice();
                let snapshot: Vec<usize> = self
                    .set
                    .iter()
                    .filter(|&z| !lat.get(l).contains(z))
                    .collect();
                for z in snapshot {
                    self.add_plane(l, z);
                }
            } else {
                break;
            }
        }
    }
}

/// For every flat `C` and `x ∉ C`, the rule closure of `C ∪ {x}` must equal
/// `C ∨ x`; this is equivalent to every rule-closed set being a flat.
/// Witness: `sets = [C, rule closure]`, `points = [x]`.
fn check_rule(g: &FiniteGeometry, planes: bool) -> RuleReport {
    let lat = g.lattice();
    let mut checked = 0;
    for (ci, c) in lat.flats().iter().enumerate() {
        let c = c.members();
        let inside: Vec<usize> = if planes {
            lat.lines()
                .iter()
                .copied()
                .filter(|&l| lat.get(l).members().is_subset(c))
                .collect()
        } else {
            Vec::new()
        };
        for x in g.points().filter(|&x| !c.contains(x)) {
            checked += 1;
            let mut gens = lat.basis(ci).to_vec();
            gens.push(x);
            let target = g.closure_of(&gens);
            let mut set = c.clone();
            set.insert(x);
            let mut rc = RuleClosure {
                g,
                planes,
                set,
                point_queue: vec![x],
                line_queue: Vec::new(),
                inside_set: inside.iter().copied().collect(),
                inside: inside.clone(),
            };
            rc.run(&target);
            if rc.set != target {
                return Verdict::fail(
                    checked,
                    Witness::new(
                        "rule_closed_not_flat",
                        vec![x],
                        vec![c.to_vec(), rc.set.to_vec()],
                    ),
                );
            }
        }
    }
    Verdict::pass(checked)
}

pub fn is_generated_by_lines(g: &FiniteGeometry) -> RuleReport {
    check_rule(g, false)
}

pub fn is_generated_by_lines_planes(g: &FiniteGeometry) -> RuleReport {
    check_rule(g, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::GaloisField;
    use crate::projective::build_pg;

    #[test]
    fn projective_plane_generated_by_lines() {
        let g = build_pg(2, GaloisField::get(2).unwrap()).unwrap();
        assert!(is_generated_by_lines(&g).holds);
    }

    #[test]
    fn ag32_needs_planes() {
        let p = build_pg(3, GaloisField::get(2).unwrap()).unwrap();
        let h = p.lattice().get(p.lattice().planes()[0]).members().clone();
        let ag = p.subgeometry(&h.complement(), "ag32");
        let r = is_generated_by_lines(&ag);
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert!(!ag.is_flat(&ag.set_of(&w.sets[1])));
        assert!(is_generated_by_lines_planes(&ag).holds);
    }

    #[test]
    fn single_line() {
        let g = build_pg(1, GaloisField::get(3).unwrap()).unwrap();
        assert!(is_generated_by_lines(&g).holds);
    }
}

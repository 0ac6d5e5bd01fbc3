use super::{MorphismInstance, ReconstructError};
use crate::geometry::{quotient, FiniteGeometry, PartialMorphism, PointSet};
use crate::projective::{quotient_iso, LinearSubspace, QuotientIso};

/// The map `[x] ↦ [φ(x)]` from `X/x0` to `P'/φ(x0)`, undefined on the classes
/// inside `F = φ⁻¹(φ(x0))`.
pub fn induced_quotient_map(
    inst: &MorphismInstance,
    x0: usize,
) -> Result<PartialMorphism, ReconstructError> {
    let x = &inst.x;
    if x0 >= x.len() {
        return Err(ReconstructError::BadInstance(format!(
            "point {x0} outside X"
        )));
    }
    let y0 = inst.map[x0];
    let (qx, _) = quotient(x, &x.set_of(&[x0]))?;
    let (qt, _) = quotient(&inst.target, &inst.target.set_of(&[y0]))?;
    let dx = qx.quotient_data().expect("quotient geometry");
    let dt = qt.quotient_data().expect("quotient geometry");
    let map = (0..qx.len())
        .map(|c| {
            let y = inst.map[dx.representative(c)];
            (y != y0).then(|| dt.class_of(y).expect("off the exceptional point"))
        })
        .collect();
    Ok(PartialMorphism::new(qx, qt, map)?)
}

/// The quotient map at `x0` transported to `PG(n-1) ⇢ PG(m-1)` through the
/// coordinates of `P/x0` and `P'/φ(x0)`.
pub struct LocalMap {
    pub x0: usize,
    pub src: QuotientIso,
    pub tgt: QuotientIso,
    /// Points of `PG(n-1)` that are classes of `X/x0`.
    pub image: PointSet,
    /// Value on each point of `PG(n-1)`; `None` off `image` or on `F/x0`.
    pub values: Vec<Option<usize>>,
}

impl LocalMap {
    pub fn new(inst: &MorphismInstance, x0: usize) -> Result<LocalMap, ReconstructError> {
        let (p, inj) = inst.x.root_embedding();
        let rep = p.linear_rep().ok_or(ReconstructError::NotFullProjective)?;
        let trep = inst
            .target
            .linear_rep()
            .ok_or(ReconstructError::NotFullProjective)?;
        let p0 = inj[x0];
        let y0 = inst.map[x0];
        let w = LinearSubspace::span(
            rep.field(),
            rep.ambient_dim() + 1,
            &[rep.coords(p0).to_vec()],
        );
        let wt = LinearSubspace::span(
            trep.field(),
            trep.ambient_dim() + 1,
            &[trep.coords(y0).to_vec()],
        );
        let src = quotient_iso(&p, &w)?;
        let tgt = quotient_iso(&inst.target, &wt)?;
        let mut image = src.pg.empty_set();
        let mut values: Vec<Option<usize>> = vec![None; src.pg.len()];
        for x in inst.x.points().filter(|&x| x != x0) {
            let z = src.image_of_point(inj[x]).expect("distinct from x0");
            let y = inst.map[x];
            let v = if y == y0 { None } else { tgt.image_of_point(y) };
            if image.insert(z) {
                values[z] = v;
            } else if values[z] != v {
                return Err(ReconstructError::QuotientInconsistent { base: x0, point: x });
            }
        }
        Ok(LocalMap {
            x0,
            src,
            tgt,
            image,
            values,
        })
    }

    /// `X/x0 = P/x0`.
    pub fn is_full(&self) -> bool {
        self.image.len() == self.src.pg.len()
    }

    /// `X/x0` as a subgeometry of `PG(n-1)`.
    pub fn subgeometry(&self) -> FiniteGeometry {
        if self.is_full() {
            self.src.pg.clone()
        } else {
            self.src
                .pg
                .subgeometry(&self.image, format!("X/{}", self.x0))
        }
    }

    /// The partial morphism on `X/x0` as a subgeometry of `PG(n-1)`.
    pub fn partial(&self) -> Result<PartialMorphism, ReconstructError> {
        let map: Vec<Option<usize>> = self.image.iter().map(|z| self.values[z]).collect();
        Ok(PartialMorphism::new(
            self.subgeometry(),
            self.tgt.pg.clone(),
            map,
        )?)
    }
}

use std::fmt;

use super::field::GaloisField;

/// A ring homomorphism between two Galois fields, stored as a lookup table.
#[derive(Clone)]
pub struct FieldHom {
    source: &'static GaloisField,
    target: &'static GaloisField,
    image_of_generator: u8,
    table: Vec<u8>,
}

impl fmt::Debug for FieldHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FieldHom({} -> {}, x -> {})",
            self.source, self.target, self.image_of_generator
        )
    }
}

impl PartialEq for FieldHom {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.table == other.table
    }
}

impl Eq for FieldHom {}

impl FieldHom {
    /// Candidate map sending the generator to `t`, extended by polynomial evaluation.
    fn by_evaluation(
        source: &'static GaloisField,
        target: &'static GaloisField,
        t: u8,
    ) -> FieldHom {
        let table = source
            .elements()
            .map(|a| {
                source
                    .coeffs(a)
                    .iter()
                    .rev()
                    .fold(0u8, |acc, &c| target.add(target.mul(acc, t), c))
            })
            .collect();
        FieldHom {
            source,
            target,
            image_of_generator: t,
            table,
        }
    }

    /// Build from an explicit table; `None` unless it preserves 0, 1, + and x.
    pub fn from_table(
        source: &'static GaloisField,
        target: &'static GaloisField,
        table: Vec<u8>,
    ) -> Option<FieldHom> {
        if table.len() != source.order() as usize
            || table.iter().any(|&c| c as u32 >= target.order())
        {
            return None;
        }
        let hom = FieldHom {
            source,
            target,
            image_of_generator: table[source.generator() as usize],
            table,
        };
        hom.verify().then_some(hom)
    }

    pub fn identity(field: &'static GaloisField) -> FieldHom {
        FieldHom {
            source: field,
            target: field,
            image_of_generator: field.generator(),
            table: field.elements().collect(),
        }
    }

    /// The automorphism `a -> a^(p^i)`.
    pub fn frobenius(field: &'static GaloisField, i: u32) -> FieldHom {
        let table: Vec<u8> = field.elements().map(|a| field.frobenius(a, i)).collect();
        FieldHom {
            source: field,
            target: field,
            image_of_generator: table[field.generator() as usize],
            table,
        }
    }

    pub fn source(&self) -> &'static GaloisField {
        self.source
    }

    pub fn target(&self) -> &'static GaloisField {
        self.target
    }

    pub fn image_of_generator(&self) -> u8 {
        self.image_of_generator
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, a: u8) -> u8 {
        self.table[a as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.table.iter().enumerate().all(|(i, &c)| i as u8 == c)
    }

    /// `self` after `first`.
    pub fn after(&self, first: &FieldHom) -> Option<FieldHom> {
        if first.target != self.source {
            return None;
        }
        let table: Vec<u8> = first.table.iter().map(|&a| self.apply(a)).collect();
        Some(FieldHom {
            source: first.source,
            target: self.target,
            image_of_generator: table[first.source.generator() as usize],
            table,
        })
    }

    /// Exhaustive check that 0, 1, addition and multiplication are preserved.
    pub fn verify(&self) -> bool {
        let (s, t) = (self.source, self.target);
        if self.apply(0) != 0 || self.apply(1) != 1 {
            return false;
        }
        s.elements().all(|a| {
            s.elements().all(|b| {
                self.apply(s.add(a, b)) == t.add(self.apply(a), self.apply(b))
                    && self.apply(s.mul(a, b)) == t.mul(self.apply(a), self.apply(b))
            })
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.order() as usize];
        self.table
            .iter()
            .all(|&c| !std::mem::replace(&mut seen[c as usize], true))
    }

    /// Exponent `i` with `self = iota o frob^i`, `iota` the canonical embedding.
    pub fn frobenius_power(&self) -> u32 {
        let iota = canonical_embedding(self.source, self.target).expect("a hom exists");
        (0..self.source.degree())
            .find(|&i| {
                self.source
                    .elements()
                    .all(|a| self.apply(a) == iota.apply(self.source.frobenius(a, i)))
            })
            .expect("every hom is a twisted canonical embedding")
    }

    /// Inverse of the frobenius_power encoding.
    pub fn from_power(
        source: &'static GaloisField,
        target: &'static GaloisField,
        power: u32,
    ) -> Option<FieldHom> {
        if power >= source.degree() {
            return None;
        }
        let iota = canonical_embedding(source, target)?;
        let frob = FieldHom::frobenius(source, power);
        iota.after(&frob)
    }
}

/// All ring homomorphisms `source -> target`, ordered by the image of the generator.
pub fn list_homomorphisms(
    source: &'static GaloisField,
    target: &'static GaloisField,
) -> Vec<FieldHom> {
    if source.characteristic() != target.characteristic() {
        return Vec::new();
    }
    let candidates: Vec<u8> = if source.degree() == 1 {
        vec![0]
    } else {
        target.elements().collect()
    };
    candidates
        .into_iter()
        .map(|t| FieldHom::by_evaluation(source, target, t))
        .filter(FieldHom::verify)
        .collect()
}

/// The hom whose generator image has the smallest code.
pub fn canonical_embedding(
    source: &'static GaloisField,
    target: &'static GaloisField,
) -> Option<FieldHom> {
    list_homomorphisms(source, target).into_iter().next()
}

//! Exact arithmetic in GF(p^k), field homomorphisms and small dense linear algebra.

mod field;
mod hom;
pub mod matrix;

pub use field::{
    field_arith, frobenius, is_irreducible, prime_power, smallest_irreducible, ArithOp,
    FieldElement, GaloisField, SUPPORTED_ORDERS,
};
pub use hom::{canonical_embedding, list_homomorphisms, FieldHom};
pub use matrix::{vecops, Matrix};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields: gf({left}) and gf({right})")]
    FieldMismatch { left: u32, right: u32 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("gf({0}) is outside the supported range (q <= 16, p <= 13)")]
    Unsupported(u32),
    #[error("malformed field designator {0:?}, expected gf(q)")]
    BadDesignator(String),
    #[error("element code {code} out of range for gf({q})")]
    BadCode { code: u32, q: u32 },
    #[error("frobenius power {power} must be below the degree {degree}")]
    BadFrobeniusPower { power: u32, degree: u32 },
}

//! Finite incidence geometry over Galois fields, and reconstruction of the
//! semilinear map behind a morphism of locally projective or locally
//! affino-projective geometries.

pub mod classify;
pub mod examples;
pub mod geometry;
pub mod gf;
pub mod io;
pub mod projective;
pub mod reconstruct;
pub mod report;

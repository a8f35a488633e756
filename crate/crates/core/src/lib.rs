//! Exact symbolic calculus for affine connections with polynomial Christoffel
//! symbols: torsion, curvature, normal tensors, exterior covariant
//! differentials, and the natural endomorphism-valued 2-forms built from them.
//!
//! Everything is exact rational arithmetic; there are no tolerances anywhere.

pub mod exactla;
pub mod generators;
pub mod geometry;
pub mod poly;
pub mod tensor;
pub mod verify;

//! Formal semi-universal deformations of quasi-homogeneous singularities.
//!
//! Pipeline: an ideal is resolved by a free DG-algebra ([`resolvent`]), the
//! resolvent differential is read as an L-infinity codifferential
//! ([`dgmanifold`]), tangent cohomology `T^1`, `T^2` is computed on
//! derivations ([`tangent`]), and the deformation is lifted order by order
//! ([`kuranishi`]).

pub mod algebra;
pub mod linalg;
pub mod resolvent;
pub mod dgmanifold;
pub mod tangent;
pub mod kuranishi;
pub mod cli;

//! Characteristic pairs of quasitoric and pseudotoric manifolds.
//!
//! A locally standard `T^n`-manifold over a homology polytope is recovered
//! from its orbit space and the circle subgroups fixing each facet. This
//! crate works entirely with that combinatorial datum:
//!
//! * [`lattice`]: exact integer linear algebra (SNF, HNF, subtori).
//! * [`face_complex`]: the facet nerve of a simple nice manifold with corners.
//! * [`char_pair`]: characteristic functions, isotropy and the canonical model.
//! * [`morphism`]: skeletal maps, σ-compatibility and induced maps.
//! * [`classify`]: equivariant equivalence and enumeration.

pub mod char_pair;
pub mod classify;
pub mod face_complex;
pub mod lattice;
pub mod morphism;

//! Triangulations of lattice polytopes and their certificates.
//!
//! A [`TriangulationComplex`] is a plain geometric simplicial complex over a
//! fixed vertex pool. Everything of interest about one is checked, never
//! assumed: [`verify_complex`] certifies that the cells tile a given
//! polytope face to face, [`is_unimodular_triangulation`],
//! [`is_flag`] and [`is_regular`] certify the three structural properties,
//! and the two constructions — [`fibered_subdivision`] into fiberwise
//! chunks and the sweep triangulation of [`build_pi_triangulation`] — each
//! re-derive their own preconditions from scratch before building anything.

pub mod complex;
pub mod fibered;
pub mod pi;
pub mod regular;

pub use complex::{
    find_complex_defect, is_flag, is_unimodular_triangulation, verify_complex, ComplexDefect,
    SquareDiagonal, TriangulationComplex,
};
pub use fibered::{fibered_subdivision, refines, FiberedSubdivision};
pub use pi::{
    build_pi_triangulation, build_pi_triangulation_with, pi_tower, EnumerationOrder, PiOptions,
};
pub use regular::{is_regular, FoldConstraint, RegularityOutcome, RegularityRefutation};

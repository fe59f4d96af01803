//! Exact-arithmetic toolkit for lattice polytopes.
//!
//! The crate answers questions about finite lattice point sets with no
//! floating point anywhere: convex hulls and lattice point enumeration,
//! graded monoid slices and their normality gaps, Hilbert bases and
//! very-ampleness certificates, Ehrhart counting polynomials, families of
//! polytopes fibered in lattice segments over a base, and triangulations
//! built by sweeping those fibers, together with unimodularity, flagness and
//! regularity certificates.
//!
//! All public operations are deterministic: point sets are kept in
//! lexicographic order and every artifact serializes identically across runs.

pub mod affine;
pub mod config;
pub mod ehrhart;
pub mod enumerate;
pub mod error;
pub mod families;
pub mod hilbert;
pub mod hull;
pub mod invariants;
pub mod json;
pub mod lattice;
pub mod lp;
pub mod matrix;
pub mod monoid;
pub mod point;
pub mod triangulation;

pub use affine::{AffineForm, AffineMap};
pub use config::{LatticeChart, PointConfig};
pub use error::{Error, Result};
pub use hull::{convex_hull, Facet, HRepresentation, LatticePolytope};
pub use lattice::{lattice_span, linear_span, SublatticeBasis};
pub use point::IntPoint;
pub use triangulation::TriangulationComplex;

//! Finite lattice point configurations and lattice normalization.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::lattice::{lattice_span, SublatticeBasis};
use crate::point::{check_dims, sort_dedup, IntPoint};

/// A finite set of lattice points in `Z^d`, kept sorted lexicographically and
/// free of duplicates, with its difference lattice cached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfig {
    dim: usize,
    points: Vec<IntPoint>,
    span: SublatticeBasis,
}

impl PointConfig {
    pub fn new(dim: usize, points: Vec<IntPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        check_dims(&points, dim)?;
        let points = sort_dedup(points);
        let span = lattice_span(&points, dim)?;
        Ok(PointConfig { dim, points, span })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[IntPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The difference lattice `L(A)` spanned by `x - y` for `x, y` in the set.
    pub fn span(&self) -> &SublatticeBasis {
        &self.span
    }

    /// True when the difference lattice is all of `Z^d`; most monoid-level
    /// operations require this so that heights and gaps are measured against
    /// the ambient lattice.
    pub fn is_normalized(&self) -> bool {
        self.span.rank() == self.dim && self.span.is_direct_summand()
    }

    /// Re-coordinatizes the configuration so that its difference lattice
    /// becomes all of `Z^r`, `r` the affine rank. Returns the new
    /// configuration together with the chart mapping new coordinates back to
    /// the original ambient space.
    ///
    /// Monoid and gap invariants are preserved: the chart is an affine
    /// isomorphism between the original difference lattice and `Z^r`.
    pub fn normalize(&self) -> (PointConfig, LatticeChart) {
        let base = self.points[0].clone();
        let rank = self.span.rank();
        let new_points: Vec<IntPoint> = self
            .points
            .iter()
            .map(|p| {
                let coords = self
                    .span
                    .coordinates_of(&p.sub(&base))
                    .expect("difference of configuration points must lie in the span");
                IntPoint::new(coords)
            })
            .collect();
        let chart = LatticeChart {
            base,
            basis: self.span.clone(),
        };
        let config = PointConfig::new(rank, new_points)
            .expect("normalized coordinates are well-formed by construction");
        (config, chart)
    }
}

/// Chart recording how normalized coordinates embed back into the original
/// ambient space: `embed(c) = base + basis^T c`.
#[derive(Clone, Debug)]
pub struct LatticeChart {
    base: IntPoint,
    basis: SublatticeBasis,
}

impl LatticeChart {
    pub fn embed(&self, normalized: &IntPoint) -> IntPoint {
        self.basis
            .from_coordinates(normalized.coords())
            .add(&self.base)
    }

    /// Inverse of [`LatticeChart::embed`] for points of the original affine
    /// lattice; `None` for points outside it.
    pub fn project(&self, original: &IntPoint) -> Option<IntPoint> {
        let coords = self.basis.coordinates_of(&original.sub(&self.base))?;
        Some(IntPoint::new(coords))
    }

    pub fn base(&self) -> &IntPoint {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }
}

/// Translates every point by `-v`, the standard move before cone
/// constructions at a vertex `v`.
pub fn translate_to_origin(points: &[IntPoint], v: &IntPoint) -> Vec<IntPoint> {
    points.iter().map(|p| p.sub(v)).collect()
}

/// Scales every coordinate by `factor`.
pub fn dilate_points(points: &[IntPoint], factor: &BigInt) -> Vec<IntPoint> {
    points.iter().map(|p| p.scale(factor)).collect()
}

//! Sublattices of `Z^d` described by canonical Hermite bases.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::matrix::{hermite_normal_form, rat_solve_general, smith_divisors, IntMat};
use crate::point::{check_dims, IntPoint};

/// A sublattice of `Z^d`, stored as the Hermite normal form of a generating
/// set. Two generating sets span the same sublattice exactly when they
/// produce equal `SublatticeBasis` values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SublatticeBasis {
    basis: Vec<IntPoint>,
    ambient_dim: usize,
}

impl SublatticeBasis {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Basis vectors in echelon (Hermite) form.
    pub fn basis(&self) -> &[IntPoint] {
        &self.basis
    }

    /// Index of the sublattice inside its rational span, i.e. the product of
    /// the elementary divisors. Equals 1 exactly when the sublattice is
    /// saturated (no lattice point of the span is missed).
    pub fn index_in_span(&self) -> BigInt {
        smith_divisors(&IntMat::from_points(&self.basis, self.ambient_dim))
            .into_iter()
            .product()
    }

    /// True when the sublattice is a direct summand of the ambient `Z^d`,
    /// decided by all elementary divisors being 1.
    pub fn is_direct_summand(&self) -> bool {
        smith_divisors(&IntMat::from_points(&self.basis, self.ambient_dim))
            .iter()
            .all(|d| d.is_one())
    }

    /// Integer coordinates of `v` in this basis, or `None` if `v` is outside
    /// the sublattice.
    pub fn coordinates_of(&self, v: &IntPoint) -> Option<Vec<BigInt>> {
        if v.dim() != self.ambient_dim {
            return None;
        }
        // Solve B^T c = v over the rationals, then demand integrality.
        let mut rows = Vec::with_capacity(self.ambient_dim);
        for coord in 0..self.ambient_dim {
            rows.push(
                self.basis
                    .iter()
                    .map(|b| BigRational::from_integer(b.coords()[coord].clone()))
                    .collect::<Vec<_>>(),
            );
        }
        let rhs: Vec<BigRational> = v.to_rational();
        let (solution, nullspace) = rat_solve_general(&rows, &rhs)?;
        debug_assert!(nullspace.is_empty(), "basis vectors must be independent");
        if solution.iter().any(|c| !c.is_integer()) {
            return None;
        }
        Some(solution.iter().map(|c| c.to_integer()).collect())
    }

    /// Reconstructs the ambient vector with the given basis coordinates.
    pub fn from_coordinates(&self, coords: &[BigInt]) -> IntPoint {
        debug_assert_eq!(coords.len(), self.rank());
        let mut acc = vec![BigInt::from(0); self.ambient_dim];
        for (c, b) in coords.iter().zip(&self.basis) {
            for (a, v) in acc.iter_mut().zip(b.coords()) {
                *a += c * v;
            }
        }
        IntPoint::new(acc)
    }
}

/// The sublattice of `Z^d` generated by all pairwise differences of the given
/// points. Differences against the first point already generate it.
pub fn lattice_span(points: &[IntPoint], ambient_dim: usize) -> Result<SublatticeBasis> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    check_dims(points, ambient_dim)?;
    let base = &points[0];
    let diffs: Vec<IntPoint> = points.iter().skip(1).map(|p| p.sub(base)).collect();
    let hf = hermite_normal_form(&IntMat::from_points(&diffs, ambient_dim));
    Ok(SublatticeBasis {
        basis: hf
            .hnf
            .rows
            .into_iter()
            .map(IntPoint::new)
            .collect(),
        ambient_dim,
    })
}

/// Sublattice generated by the vectors themselves (linear, not affine).
pub fn linear_span(vectors: &[IntPoint], ambient_dim: usize) -> Result<SublatticeBasis> {
    check_dims(vectors, ambient_dim)?;
    let hf = hermite_normal_form(&IntMat::from_points(vectors, ambient_dim));
    Ok(SublatticeBasis {
        basis: hf
            .hnf
            .rows
            .into_iter()
            .map(IntPoint::new)
            .collect(),
        ambient_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_lattice_span_of_pm_vertices_is_full() {
        // Vertices of the m = 5 twisted prism over the unit square.
        let pts: Vec<IntPoint> = [
            [0, 0, 0],
            [0, 0, 1],
            [1, 0, 0],
            [1, 0, 1],
            [0, 1, 0],
            [0, 1, 1],
            [1, 1, 5],
            [1, 1, 6],
        ]
        .iter()
        .map(|c| IntPoint::from_i64(c))
        .collect();
        let span = lattice_span(&pts, 3).unwrap();
        assert_eq!(span.rank(), 3);
        assert_eq!(span.index_in_span(), BigInt::one());
        assert!(span.is_direct_summand());
    }

    #[test]
    fn test_doubled_square_is_not_a_summand() {
        let pts: Vec<IntPoint> = [[0, 0], [2, 0], [0, 2], [2, 2]]
            .iter()
            .map(|c| IntPoint::from_i64(c))
            .collect();
        let span = lattice_span(&pts, 2).unwrap();
        assert_eq!(span.rank(), 2);
        assert_eq!(span.index_in_span(), BigInt::from(4));
        assert!(!span.is_direct_summand());
    }

    #[test]
    fn test_collinear_span_has_rank_one() {
        let pts: Vec<IntPoint> = [[0, 0, 0], [1, 2, 3], [2, 4, 6]]
            .iter()
            .map(|c| IntPoint::from_i64(c))
            .collect();
        let span = lattice_span(&pts, 3).unwrap();
        assert_eq!(span.rank(), 1);
        assert_eq!(span.basis()[0], IntPoint::from_i64(&[1, 2, 3]));
        let coords = span.coordinates_of(&IntPoint::from_i64(&[2, 4, 6])).unwrap();
        assert_eq!(coords, vec![BigInt::from(2)]);
        assert!(span.coordinates_of(&IntPoint::from_i64(&[1, 1, 1])).is_none());
    }

    #[test]
    fn test_span_rejects_mixed_dimensions() {
        let pts = vec![IntPoint::from_i64(&[0, 0]), IntPoint::from_i64(&[1, 2, 3])];
        assert!(matches!(
            lattice_span(&pts, 2),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}

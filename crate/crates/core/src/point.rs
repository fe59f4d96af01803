//! Integer lattice points with exact arbitrary-precision coordinates.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// A point of `Z^d`, ordered lexicographically.
///
/// The lexicographic order doubles as the canonical output order everywhere
/// in this crate, so that identical inputs always produce identical artifacts.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntPoint(Vec<BigInt>);

impl IntPoint {
    pub fn new(coords: Vec<BigInt>) -> Self {
        IntPoint(coords)
    }

    /// Convenience constructor used pervasively in tests.
    pub fn from_i64(coords: &[i64]) -> Self {
        IntPoint(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn origin(dim: usize) -> Self {
        IntPoint(vec![BigInt::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &IntPoint) -> IntPoint {
        debug_assert_eq!(self.dim(), other.dim());
        IntPoint(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &IntPoint) -> IntPoint {
        debug_assert_eq!(self.dim(), other.dim());
        IntPoint(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, factor: &BigInt) -> IntPoint {
        IntPoint(self.0.iter().map(|c| c * factor).collect())
    }

    pub fn dot(&self, other: &[BigInt]) -> BigInt {
        debug_assert_eq!(self.dim(), other.len());
        self.0
            .iter()
            .zip(other)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Divides out the gcd of the coordinates, keeping the direction.
    ///
    /// The zero vector is returned unchanged.
    pub fn primitive(&self) -> IntPoint {
        let g = self
            .0
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() {
            return self.clone();
        }
        IntPoint(self.0.iter().map(|c| c / &g).collect())
    }

    /// Appends one coordinate, lifting the point into `Z^(d+1)`.
    pub fn with_coord(&self, last: BigInt) -> IntPoint {
        let mut coords = self.0.clone();
        coords.push(last);
        IntPoint(coords)
    }

    /// Drops the last coordinate; the inverse of [`IntPoint::with_coord`].
    pub fn drop_last(&self) -> (IntPoint, BigInt) {
        let mut coords = self.0.clone();
        let last = coords.pop().expect("drop_last on 0-dimensional point");
        (IntPoint(coords), last)
    }

    pub fn to_rational(&self) -> Vec<BigRational> {
        self.0
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }
}

impl fmt::Debug for IntPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Checks that all points share the given dimension.
pub fn check_dims(points: &[IntPoint], dim: usize) -> Result<()> {
    for p in points {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: p.dim(),
            });
        }
    }
    Ok(())
}

/// Sorts lexicographically and removes duplicates.
pub fn sort_dedup(mut points: Vec<IntPoint>) -> Vec<IntPoint> {
    points.sort();
    points.dedup();
    points
}

/// Exact rational point used where integer coordinates are not guaranteed.
pub type RatPoint = Vec<BigRational>;

/// True if every coordinate is an integer.
pub fn rational_is_integral(p: &[BigRational]) -> bool {
    p.iter().all(|c| c.is_integer())
}

/// Converts an integral rational point back to an [`IntPoint`].
pub fn rational_to_int(p: &[BigRational]) -> Option<IntPoint> {
    if !rational_is_integral(p) {
        return None;
    }
    Some(IntPoint(p.iter().map(|c| c.to_integer()).collect()))
}

/// Component-wise absolute maximum, used for crude norm bounds in tests.
pub fn max_abs_coord(points: &[IntPoint]) -> BigInt {
    let mut best = BigInt::zero();
    for p in points {
        for c in p.coords() {
            let a = c.abs();
            if a > best {
                best = a;
            }
        }
    }
    best
}

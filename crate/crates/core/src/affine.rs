//! Integer affine maps between lattice ambient spaces.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::matrix::IntMat;
use crate::point::IntPoint;

/// An affine map `x -> matrix * x + offset` with integer entries, so lattice
/// points always map to lattice points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    matrix: IntMat,
    offset: Vec<BigInt>,
}

impl AffineMap {
    pub fn new(matrix: IntMat, offset: Vec<BigInt>) -> Result<Self> {
        if matrix.nrows() != offset.len() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                got: offset.len(),
            });
        }
        Ok(AffineMap { matrix, offset })
    }

    /// The projection `R^d -> R^k` keeping the first `k` coordinates.
    pub fn projection(domain_dim: usize, keep: usize) -> Self {
        assert!(keep <= domain_dim);
        let mut m = IntMat::zero(keep, domain_dim);
        for i in 0..keep {
            m.rows[i][i] = BigInt::from(1);
        }
        AffineMap {
            matrix: m,
            offset: vec![BigInt::from(0); keep],
        }
    }

    pub fn identity(dim: usize) -> Self {
        AffineMap {
            matrix: IntMat::identity(dim),
            offset: vec![BigInt::from(0); dim],
        }
    }

    pub fn domain_dim(&self) -> usize {
        self.matrix.cols
    }

    pub fn codomain_dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &IntMat {
        &self.matrix
    }

    pub fn offset(&self) -> &[BigInt] {
        &self.offset
    }

    pub fn apply(&self, p: &IntPoint) -> Result<IntPoint> {
        if p.dim() != self.domain_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.domain_dim(),
                got: p.dim(),
            });
        }
        let mut out = self.matrix.mul_vec(p.coords());
        for (o, c) in out.iter_mut().zip(&self.offset) {
            *o += c;
        }
        Ok(IntPoint::new(out))
    }

    /// Applies the linear part only (differences transform this way).
    pub fn apply_linear(&self, v: &IntPoint) -> Result<IntPoint> {
        if v.dim() != self.domain_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.domain_dim(),
                got: v.dim(),
            });
        }
        Ok(IntPoint::new(self.matrix.mul_vec(v.coords())))
    }

    /// Evaluates on an exact rational point.
    pub fn apply_rational(&self, p: &[BigRational]) -> Vec<BigRational> {
        debug_assert_eq!(p.len(), self.domain_dim());
        self.matrix
            .rows
            .iter()
            .zip(&self.offset)
            .map(|(row, off)| {
                let mut acc = BigRational::from_integer(off.clone());
                for (a, b) in row.iter().zip(p) {
                    acc += BigRational::from_integer(a.clone()) * b;
                }
                acc
            })
            .collect()
    }
}

/// An integer affine form `x -> coeffs . x + constant`, the one-dimensional
/// special case used for step-by-step fibered constructions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineForm {
    pub coeffs: Vec<BigInt>,
    pub constant: BigInt,
}

impl AffineForm {
    pub fn new(coeffs: Vec<BigInt>, constant: BigInt) -> Self {
        AffineForm { coeffs, constant }
    }

    pub fn constant_form(dim: usize, constant: BigInt) -> Self {
        AffineForm {
            coeffs: vec![BigInt::from(0); dim],
            constant,
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, p: &IntPoint) -> Result<BigInt> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: p.dim(),
            });
        }
        Ok(p.dot(&self.coeffs) + &self.constant)
    }
}

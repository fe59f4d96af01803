//! Ehrhart polynomials by exact interpolation.
//!
//! The lattice-point count of the dilations `j * P` for `j = 0..=d` pins
//! down a unique degree-`d` polynomial with rational coefficients. Since an
//! enumeration or hull bug would silently corrupt the counts, the
//! interpolant is re-checked against two further direct counts before it is
//! returned.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::enumerate::dilated_lattice_points;
use crate::error::{Error, Result};
use crate::hull::LatticePolytope;
use crate::matrix::{rat_solve_square, RatRow};

/// A polynomial with exact rational coefficients, stored from the constant
/// term upward, that counts lattice points of integer dilations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EhrhartPolynomial {
    coefficients: Vec<BigRational>,
}

impl EhrhartPolynomial {
    /// Coefficients in ascending degree order; the length is `dim + 1`.
    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    /// Evaluates by Horner's rule.
    pub fn evaluate(&self, at: &BigInt) -> BigRational {
        let x = BigRational::from_integer(at.clone());
        let mut value = BigRational::zero();
        for c in self.coefficients.iter().rev() {
            value = value * &x + c;
        }
        value
    }
}

/// Interpolates the lattice-point counting polynomial of a full-dimensional
/// polytope through the counts at dilations `0..=d`, then confirms it
/// against direct counts at `d+1` and `d+2`.
///
/// # Errors
///
/// [`Error::EhrhartMismatch`] when a confirmation count disagrees with the
/// interpolant, which indicates an enumeration defect rather than bad input.
pub fn ehrhart_polynomial(poly: &LatticePolytope) -> Result<EhrhartPolynomial> {
    let dim = poly.dim();
    let counts: Vec<BigInt> = (0..=dim as u32 + 2)
        .map(|j| BigInt::from(dilated_lattice_points(poly, &BigInt::from(j)).len()))
        .collect();
    let rows: Vec<RatRow> = (0..=dim)
        .map(|j| {
            let x = BigRational::from_integer(BigInt::from(j));
            let mut row = Vec::with_capacity(dim + 1);
            let mut power = BigRational::one();
            for _ in 0..=dim {
                row.push(power.clone());
                power *= &x;
            }
            row
        })
        .collect();
    let rhs: Vec<BigRational> = counts[..=dim]
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    let coefficients =
        rat_solve_square(&rows, &rhs).expect("distinct interpolation nodes are nonsingular");
    let candidate = EhrhartPolynomial { coefficients };
    for extra in [dim + 1, dim + 2] {
        let predicted = candidate.evaluate(&BigInt::from(extra));
        let counted = counts[extra].clone();
        if predicted != BigRational::from_integer(counted.clone()) {
            return Err(Error::EhrhartMismatch {
                dilation: extra as u32,
                expected: predicted.to_string(),
                counted,
            });
        }
    }
    Ok(candidate)
}

//! Regularity of triangulations, certified in both directions.
//!
//! A triangulation is regular when some lift of its vertices makes every
//! cell a domain of linearity of the lower convex envelope. For a
//! triangulation of a convex polytope this is equivalent to a local
//! condition: across every interior ridge the lifted fold must be strictly
//! convex. One direction is immediate; for the other, a piecewise-linear
//! function on a convex domain that folds convexly across every interior
//! ridge is convex, and strict folds keep adjacent cells in distinct
//! domains of linearity, so the lifted vertex set's lower hull reproduces
//! the cells. The fold conditions form a linear program whose two outcomes
//! are both certificates: explicit heights, or Farkas multipliers proving
//! no heights exist.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpOutcome};
use crate::matrix::affine_coordinates;

use super::complex::TriangulationComplex;

/// One strict-fold requirement: the apex vertex of `neighbor` opposite the
/// shared ridge must lift strictly above the affine span of `cell`'s lift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldConstraint {
    /// Index of the cell whose lifted affine span is the reference.
    pub cell: usize,
    /// Index of the adjacent cell across the shared ridge.
    pub neighbor: usize,
    /// Pool index of the vertex of `neighbor` not on the ridge.
    pub apex: usize,
}

/// Proof that no height vector satisfies the fold constraints: nonnegative
/// multipliers, not all zero, combining the constraints into `0 >= 1`.
#[derive(Clone, Debug)]
pub struct RegularityRefutation {
    /// The fold constraints with nonzero multipliers, in construction order.
    pub folds: Vec<(FoldConstraint, BigRational)>,
}

/// Outcome of [`is_regular`]: a certificate either way.
#[derive(Clone, Debug)]
pub enum RegularityOutcome {
    /// Heights, one per pool vertex, lifting the cells onto a strictly
    /// convex surface.
    Regular { heights: Vec<BigRational> },
    /// A Farkas combination of fold constraints with no solution.
    NotRegular { refutation: RegularityRefutation },
}

impl RegularityOutcome {
    pub fn is_regular(&self) -> bool {
        matches!(self, RegularityOutcome::Regular { .. })
    }
}

/// Decides regularity of a triangulation of a convex polytope.
///
/// The input must triangulate the convex hull of its used vertices (as
/// [`verify_complex`](super::verify_complex) checks); on such input the
/// local fold conditions characterize regularity exactly.
///
/// # Errors
///
/// [`Error::Malformed`] when some cell is affinely degenerate, which makes
/// the fold conditions meaningless.
pub fn is_regular(t: &TriangulationComplex) -> Result<RegularityOutcome> {
    let n = t.vertex_pool().len();
    let cells = t.maximal_cells();

    // Group cells by ridge: each cell with one vertex dropped.
    let mut ridges: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
    for (ci, cell) in cells.iter().enumerate() {
        if cell.len() < 2 {
            continue;
        }
        for drop in 0..cell.len() {
            let mut ridge = cell.clone();
            let apex = ridge.remove(drop);
            ridges.entry(ridge).or_default().push((ci, apex));
        }
    }

    let mut lp = LinearProgram::new(n);
    let mut folds = Vec::new();
    for incident in ridges.values() {
        for (k, &(cell_a, _)) in incident.iter().enumerate() {
            for &(cell_b, apex_b) in &incident[k + 1..] {
                // The fold is symmetric, so one side of each pair suffices.
                let base = t.cell_points(cell_a);
                let target: Vec<BigRational> = t.vertex_pool()[apex_b]
                    .coords()
                    .iter()
                    .map(|c| BigRational::from_integer(c.clone()))
                    .collect();
                let weights = affine_coordinates(&base, &target).ok_or_else(|| {
                    Error::malformed("affinely degenerate cell in a regularity check")
                })?;
                let mut row = vec![BigRational::zero(); n];
                row[apex_b] += BigRational::one();
                for (&vi, w) in cells[cell_a].iter().zip(&weights) {
                    row[vi] -= w.clone();
                }
                lp.add_ge(row, BigRational::one());
                folds.push(FoldConstraint {
                    cell: cell_a,
                    neighbor: cell_b,
                    apex: apex_b,
                });
            }
        }
    }

    if folds.is_empty() {
        // No interior ridge: any lift works, e.g. the zero lift.
        return Ok(RegularityOutcome::Regular {
            heights: vec![BigRational::zero(); n],
        });
    }

    match lp.solve() {
        LpOutcome::Optimal { point, .. } => Ok(RegularityOutcome::Regular { heights: point }),
        LpOutcome::Infeasible { multipliers } => {
            let nonzero = folds
                .into_iter()
                .zip(multipliers)
                .filter(|(_, m)| !m.is_zero())
                .collect();
            Ok(RegularityOutcome::NotRegular {
                refutation: RegularityRefutation { folds: nonzero },
            })
        }
        LpOutcome::Unbounded { .. } => {
            unreachable!("feasibility problem with a zero objective")
        }
    }
}

/// Checks a height vector against the fold conditions of a triangulation.
///
/// Used by tests and by consumers replaying a stored certificate.
pub fn heights_certify(t: &TriangulationComplex, heights: &[BigRational]) -> bool {
    if heights.len() != t.vertex_pool().len() {
        return false;
    }
    let cells = t.maximal_cells();
    let mut ridges: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
    for (ci, cell) in cells.iter().enumerate() {
        if cell.len() < 2 {
            continue;
        }
        for drop in 0..cell.len() {
            let mut ridge = cell.clone();
            let apex = ridge.remove(drop);
            ridges.entry(ridge).or_default().push((ci, apex));
        }
    }
    for incident in ridges.values() {
        for (k, &(cell_a, _)) in incident.iter().enumerate() {
            for &(_, apex_b) in &incident[k + 1..] {
                let base = t.cell_points(cell_a);
                let target: Vec<BigRational> = t.vertex_pool()[apex_b]
                    .coords()
                    .iter()
                    .map(|c| BigRational::from_integer(c.clone()))
                    .collect();
                let Some(weights) = affine_coordinates(&base, &target) else {
                    return false;
                };
                let interpolated: BigRational = t.maximal_cells()[cell_a]
                    .iter()
                    .zip(&weights)
                    .map(|(&vi, w)| w * &heights[vi])
                    .sum();
                if heights[apex_b] <= interpolated {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::IntPoint;
    use crate::triangulation::complex::SquareDiagonal;

    fn pts(coords: &[&[i64]]) -> Vec<IntPoint> {
        coords.iter().map(|c| IntPoint::from_i64(c)).collect()
    }

    #[test]
    fn test_square_diagonal_triangulations_are_regular() {
        for diagonal in [SquareDiagonal::Main, SquareDiagonal::Anti] {
            let t = TriangulationComplex::unit_square(diagonal);
            let outcome = is_regular(&t).unwrap();
            let RegularityOutcome::Regular { heights } = outcome else {
                panic!("a two-cell triangulation of the square must be regular");
            };
            assert!(heights_certify(&t, &heights));
        }
    }

    #[test]
    fn test_single_cell_is_regular_with_zero_heights() {
        let pool = pts(&[&[0, 0], &[1, 0], &[0, 1]]);
        let t = TriangulationComplex::new(pool, vec![vec![0, 1, 2]]).unwrap();
        match is_regular(&t).unwrap() {
            RegularityOutcome::Regular { heights } => {
                assert!(heights.iter().all(|h| h.is_zero()));
            }
            RegularityOutcome::NotRegular { .. } => panic!("single cell must be regular"),
        }
    }

    #[test]
    fn test_point_complex_is_regular() {
        let t = TriangulationComplex::point_complex();
        assert!(is_regular(&t).unwrap().is_regular());
    }

    #[test]
    fn test_path_triangulation_of_a_segment_is_regular() {
        let pool = pts(&[&[0], &[1], &[2], &[3]]);
        let t =
            TriangulationComplex::new(pool, vec![vec![0, 1], vec![1, 2], vec![2, 3]]).unwrap();
        match is_regular(&t).unwrap() {
            RegularityOutcome::Regular { heights } => assert!(heights_certify(&t, &heights)),
            RegularityOutcome::NotRegular { .. } => panic!("a path lift always exists"),
        }
    }

    #[test]
    fn test_fan_of_a_hexagon_is_regular() {
        let pool = pts(&[
            &[0, 0],
            &[1, 0],
            &[2, 1],
            &[2, 2],
            &[1, 2],
            &[0, 1],
            &[1, 1],
        ]);
        let cells = (0..6)
            .map(|k| vec![k, (k + 1) % 6, 6])
            .collect::<Vec<_>>();
        let t = TriangulationComplex::new(pool, cells).unwrap();
        match is_regular(&t).unwrap() {
            RegularityOutcome::Regular { heights } => assert!(heights_certify(&t, &heights)),
            RegularityOutcome::NotRegular { .. } => panic!("a star fan is regular"),
        }
    }

    #[test]
    fn test_degenerate_cell_is_reported_as_malformed() {
        let pool = pts(&[&[0, 0], &[1, 1], &[2, 2], &[3, 3]]);
        let t = TriangulationComplex::new(pool, vec![vec![0, 1, 2], vec![1, 2, 3]]).unwrap();
        assert!(matches!(is_regular(&t), Err(Error::Malformed { .. })));
    }
}

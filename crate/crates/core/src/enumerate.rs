//! Lattice point enumeration inside polyhedra given by inequalities.
//!
//! Coordinates are fixed one at a time, left to right; the admissible range
//! of the next coordinate is computed exactly by minimizing and maximizing it
//! over the remaining polyhedron with the LP solver, so the search tree never
//! visits an infeasible prefix. On the last coordinate the bounds come
//! straight from the single-variable inequalities. Points are produced in
//! lexicographic order.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::hull::{HRepresentation, LatticePolytope};
use crate::lp::{LinearProgram, LpOutcome};
use crate::matrix::clear_denominators;
use crate::point::IntPoint;

/// All lattice points satisfying the inequalities, in lex order.
///
/// # Errors
///
/// Returns [`Error::Unbounded`] with a primitive recession direction when the
/// region contains a ray.
pub fn lattice_points_in_hrep(hrep: &HRepresentation) -> Result<Vec<IntPoint>> {
    let dim = hrep.dim;
    if dim == 0 {
        // The only candidate is the empty tuple.
        return Ok(if hrep.facets.iter().all(|f| !f.offset.is_positive()) {
            vec![IntPoint::origin(0)]
        } else {
            vec![]
        });
    }
    let mut out = Vec::new();
    let mut prefix: Vec<BigInt> = Vec::with_capacity(dim);
    descend(hrep, &mut prefix, &mut out)?;
    Ok(out)
}

/// All lattice points of the polytope, in lex order.
pub fn lattice_points(poly: &LatticePolytope) -> Vec<IntPoint> {
    lattice_points_in_hrep(poly.hrep()).expect("polytopes are bounded")
}

/// Lattice points of the dilation `factor * P`, in lex order.
pub fn dilated_lattice_points(poly: &LatticePolytope, factor: &BigInt) -> Vec<IntPoint> {
    if poly.dim() == 0 {
        return vec![IntPoint::origin(0)];
    }
    lattice_points_in_hrep(&poly.hrep().dilate(factor)).expect("dilated polytopes are bounded")
}

fn descend(hrep: &HRepresentation, prefix: &mut Vec<BigInt>, out: &mut Vec<IntPoint>) -> Result<()> {
    let dim = hrep.dim;
    let k = prefix.len();
    let (lo, hi) = if k + 1 == dim {
        match last_coordinate_range(hrep, prefix)? {
            Some(range) => range,
            None => return Ok(()),
        }
    } else {
        match coordinate_range(hrep, prefix)? {
            Some(range) => range,
            None => return Ok(()),
        }
    };
    let mut v = lo;
    while v <= hi {
        prefix.push(v.clone());
        if prefix.len() == dim {
            let p = IntPoint::new(prefix.clone());
            debug_assert!(hrep.contains(&p));
            out.push(p);
        } else {
            descend(hrep, prefix, out)?;
        }
        prefix.pop();
        v += 1;
    }
    Ok(())
}

/// Exact `[min, max]` of coordinate `k` over the region with the prefix
/// substituted, via two LPs on the remaining coordinates.
fn coordinate_range(
    hrep: &HRepresentation,
    prefix: &[BigInt],
) -> Result<Option<(BigInt, BigInt)>> {
    let dim = hrep.dim;
    let k = prefix.len();
    let rest = dim - k;
    let mut lp = LinearProgram::new(rest);
    for facet in &hrep.facets {
        let coeffs: Vec<BigInt> = facet.normal.coords()[k..].to_vec();
        let mut rhs = facet.offset.clone();
        for (c, v) in facet.normal.coords()[..k].iter().zip(prefix) {
            rhs -= c * v;
        }
        lp.add_int_constraint(&coeffs, crate::lp::Relation::Ge, rhs);
    }

    let mut objective = vec![BigRational::zero(); rest];
    objective[0] = BigRational::from_integer(BigInt::from(-1));
    lp.set_objective(objective.clone());
    let lo = match lp.solve() {
        LpOutcome::Optimal { value, .. } => ceil_rational(&-value),
        LpOutcome::Infeasible { .. } => return Ok(None),
        LpOutcome::Unbounded { ray } => return Err(unbounded_error(&ray, prefix)),
    };

    objective[0] = BigRational::from_integer(BigInt::from(1));
    lp.set_objective(objective);
    let hi = match lp.solve() {
        LpOutcome::Optimal { value, .. } => floor_rational(&value),
        LpOutcome::Infeasible { .. } => return Ok(None),
        LpOutcome::Unbounded { ray } => return Err(unbounded_error(&ray, prefix)),
    };

    Ok(if lo <= hi { Some((lo, hi)) } else { None })
}

/// Direct interval for the final coordinate: every facet constrains it with
/// a single coefficient once the prefix is substituted.
fn last_coordinate_range(
    hrep: &HRepresentation,
    prefix: &[BigInt],
) -> Result<Option<(BigInt, BigInt)>> {
    let k = prefix.len();
    let mut lo: Option<BigInt> = None;
    let mut hi: Option<BigInt> = None;
    for facet in &hrep.facets {
        let coeff = &facet.normal.coords()[k];
        let mut rhs = facet.offset.clone();
        for (c, v) in facet.normal.coords()[..k].iter().zip(prefix) {
            rhs -= c * v;
        }
        let bound = BigRational::new(rhs.clone(), BigInt::from(1));
        if coeff.is_zero() {
            if rhs.is_positive() {
                return Ok(None);
            }
        } else {
            let ratio = bound / BigRational::from_integer(coeff.clone());
            if coeff.is_positive() {
                let b = ceil_rational(&ratio);
                lo = Some(lo.map_or(b.clone(), |cur: BigInt| cur.max(b)));
            } else {
                let b = floor_rational(&ratio);
                hi = Some(hi.map_or(b.clone(), |cur: BigInt| cur.min(b)));
            }
        }
    }
    match (lo, hi) {
        (Some(lo), Some(hi)) if lo <= hi => Ok(Some((lo, hi))),
        (Some(_), Some(_)) => Ok(None),
        (lo, _) => {
            // A missing bound means the last coordinate recedes to infinity;
            // the sign of every facet coefficient makes it a genuine
            // recession direction of the whole region.
            let mut direction = vec![BigInt::zero(); hrep.dim];
            direction[hrep.dim - 1] = if lo.is_none() {
                BigInt::from(-1)
            } else {
                BigInt::from(1)
            };
            Err(Error::Unbounded { direction })
        }
    }
}

fn unbounded_error(ray: &[BigRational], prefix: &[BigInt]) -> Error {
    let primitive = clear_denominators(ray);
    let mut direction = vec![BigInt::zero(); prefix.len()];
    direction.extend(primitive.into_coords());
    Error::Unbounded { direction }
}

fn ceil_rational(v: &BigRational) -> BigInt {
    v.ceil().to_integer()
}

fn floor_rational(v: &BigRational) -> BigInt {
    v.floor().to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hull::convex_hull;

    fn pts(coords: &[&[i64]]) -> Vec<IntPoint> {
        coords.iter().map(|c| IntPoint::from_i64(c)).collect()
    }

    #[test]
    fn test_unit_square_has_four_points() {
        let poly = convex_hull(&pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]), 2).unwrap();
        let points = lattice_points(&poly);
        assert_eq!(points, pts(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]));
    }

    #[test]
    fn test_dilated_triangle_counts() {
        let poly = convex_hull(&pts(&[&[0, 0], &[1, 0], &[0, 1]]), 2).unwrap();
        assert_eq!(lattice_points(&poly).len(), 3);
        assert_eq!(dilated_lattice_points(&poly, &BigInt::from(2)).len(), 6);
        assert_eq!(dilated_lattice_points(&poly, &BigInt::from(3)).len(), 10);
    }

    #[test]
    fn test_twisted_prism_points_sit_over_corners() {
        let poly = convex_hull(
            &pts(&[
                &[0, 0, 0],
                &[0, 0, 1],
                &[1, 0, 0],
                &[1, 0, 1],
                &[0, 1, 0],
                &[0, 1, 1],
                &[1, 1, 1],
                &[1, 1, 2],
            ]),
            3,
        )
        .unwrap();
        let points = lattice_points(&poly);
        assert_eq!(points.len(), 8);
        assert!(points
            .iter()
            .all(|p| !p.coords()[0].is_positive() || p.coords()[0] == BigInt::from(1)));
    }

    #[test]
    fn test_unbounded_region_reports_direction() {
        use crate::hull::Facet;
        let hrep = HRepresentation {
            dim: 2,
            facets: vec![
                Facet {
                    normal: IntPoint::from_i64(&[1, 0]),
                    offset: BigInt::zero(),
                },
                Facet {
                    normal: IntPoint::from_i64(&[0, 1]),
                    offset: BigInt::zero(),
                },
            ],
        };
        match lattice_points_in_hrep(&hrep) {
            Err(Error::Unbounded { direction }) => {
                assert_eq!(direction.len(), 2);
            }
            other => panic!("expected unbounded, got {other:?}"),
        }
    }

    #[test]
    fn test_empty_region_yields_no_points() {
        use crate::hull::Facet;
        let hrep = HRepresentation {
            dim: 1,
            facets: vec![
                Facet {
                    normal: IntPoint::from_i64(&[1]),
                    offset: BigInt::from(1),
                },
                Facet {
                    normal: IntPoint::from_i64(&[-1]),
                    offset: BigInt::zero(),
                },
            ],
        };
        assert_eq!(lattice_points_in_hrep(&hrep).unwrap(), vec![]);
    }
}

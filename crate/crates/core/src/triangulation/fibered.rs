//! Subdivision of a fibered polytope into chunks over base cells.
//!
//! Given a polytope fibered in lattice segments over a base and a
//! triangulation of the base, each maximal base cell determines a chunk:
//! the convex hull of the lattice points lying over it. For the chunks to
//! tile the polytope the triangulation must be compatible with the facet
//! shadows: the image of every facet must be a union of faces of the base
//! triangulation. [`face_compatibility`] decides that condition exactly.
//! Since the image of a facet is convex and any union of simplex faces
//! that is convex is a single face, the condition reduces, cell by cell,
//! to: the part of the image inside a maximal cell is spanned by the
//! cell's vertices that lie in the image. The latter is a pair of small
//! linear programs per facet and cell.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::affine::AffineMap;
use crate::enumerate::lattice_points;
use crate::error::{Error, Result};
use crate::families::{check_fibration, FibrationReport};
use crate::hull::{convex_hull, LatticePolytope};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::point::{sort_dedup, IntPoint};

use super::complex::{intersection_supported_on, verify_complex, TriangulationComplex};

/// A polytope cut into chunks over the maximal cells of a base
/// triangulation, one chunk per cell in the same order.
#[derive(Clone, Debug)]
pub struct FiberedSubdivision {
    base: TriangulationComplex,
    chunks: Vec<LatticePolytope>,
}

impl FiberedSubdivision {
    pub fn base(&self) -> &TriangulationComplex {
        &self.base
    }

    /// The chunks, indexed like the maximal cells of the base.
    pub fn chunks(&self) -> &[LatticePolytope] {
        &self.chunks
    }
}

/// Checks the preconditions shared by the subdivision and sweep
/// constructions and returns the base polytope with the fiber report.
pub(crate) fn fibration_over_complex(
    map: &AffineMap,
    total: &LatticePolytope,
    delta: &TriangulationComplex,
) -> Result<(LatticePolytope, FibrationReport)> {
    let base_dim = delta.ambient_dim();
    if total.dim() != base_dim + 1 {
        return Err(Error::DimensionMismatch {
            expected: base_dim + 1,
            got: total.dim(),
        });
    }
    let base = convex_hull(delta.vertex_pool(), base_dim)?;
    if !verify_complex(delta, &base) {
        return Err(Error::construction(
            "the base complex does not triangulate the convex hull of its vertex pool",
        ));
    }
    let report = check_fibration(map, total, &base)?;
    if let Some(violation) = &report.violation {
        return Err(Error::FibrationInvalid {
            reason: violation.to_string(),
        });
    }
    Ok((base, report))
}

/// Decides whether the image of every facet of `total` under `map` is a
/// union of faces of `delta`, reporting the first offending pair.
///
/// # Errors
///
/// [`Error::FaceCompatibility`] with the facet's vertices and the image
/// points witnessing the failure; propagated arithmetic errors otherwise.
pub fn face_compatibility(
    map: &AffineMap,
    total: &LatticePolytope,
    delta: &TriangulationComplex,
) -> Result<()> {
    for facet in &total.hrep().facets {
        let incidence = total.facet_incidence(facet);
        let facet_vertices: Vec<IntPoint> = incidence
            .iter()
            .map(|&i| total.vertices()[i].clone())
            .collect();
        let mut shadow = Vec::with_capacity(facet_vertices.len());
        for v in &facet_vertices {
            shadow.push(map.apply(v)?);
        }
        let shadow = sort_dedup(shadow);

        // Which pool vertices lie in the shadow: membership in a convex
        // hull given by generators is one feasibility program per vertex.
        let in_shadow: Vec<bool> = delta
            .vertex_pool()
            .iter()
            .map(|v| point_in_hull(v, &shadow))
            .collect();

        for cell in delta.maximal_cells() {
            let cell_points: Vec<IntPoint> = cell
                .iter()
                .map(|&i| delta.vertex_pool()[i].clone())
                .collect();
            let allowed = cell
                .iter()
                .zip(&cell_points)
                .filter(|(&i, _)| in_shadow[i])
                .map(|(_, p)| p)
                .collect();
            if !intersection_supported_on(&cell_points, &shadow, &allowed) {
                return Err(Error::FaceCompatibility {
                    face: facet_vertices
                        .iter()
                        .map(|p| p.coords().to_vec())
                        .collect(),
                    image: shadow.iter().map(|p| p.coords().to_vec()).collect(),
                });
            }
        }
    }
    Ok(())
}

/// Whether `point` lies in the convex hull of `generators`.
fn point_in_hull(point: &IntPoint, generators: &[IntPoint]) -> bool {
    let dim = point.dim();
    let n = generators.len();
    let mut lp = LinearProgram::new(n);
    for v in 0..n {
        lp.require_nonnegative(v);
    }
    for coord in 0..dim {
        let row: Vec<BigInt> = generators
            .iter()
            .map(|g| g.coords()[coord].clone())
            .collect();
        lp.add_int_constraint(&row, Relation::Eq, point.coords()[coord].clone());
    }
    lp.add_int_constraint(&vec![BigInt::one(); n], Relation::Eq, BigInt::one());
    lp.solve().is_feasible()
}

/// Cuts `total` into chunks over the maximal cells of `delta`.
///
/// Each chunk is the convex hull of the lattice points over its cell. The
/// construction re-derives everything it relies on: the fibration report,
/// face compatibility, the equality of each chunk with the full preimage
/// of its cell, and the volume tiling identity.
///
/// # Errors
///
/// Dimension mismatches, [`Error::FibrationInvalid`],
/// [`Error::FaceCompatibility`], or [`Error::InvalidComplex`] when the
/// verified chunks fail to tile (which a valid fibration cannot reach).
pub fn fibered_subdivision(
    map: &AffineMap,
    total: &LatticePolytope,
    delta: &TriangulationComplex,
) -> Result<FiberedSubdivision> {
    let (_, _report) = fibration_over_complex(map, total, delta)?;
    face_compatibility(map, total, delta)?;

    let base_dim = delta.ambient_dim();
    let points = lattice_points(total);
    let mut images = Vec::with_capacity(points.len());
    for p in &points {
        images.push(map.apply(p)?);
    }

    let mut chunks = Vec::with_capacity(delta.maximal_cells().len());
    let mut volume = BigInt::zero();
    for cell in 0..delta.maximal_cells().len() {
        let cell_points = delta.cell_points(cell);
        let cell_hull = convex_hull(&cell_points, base_dim)?;
        let members: Vec<IntPoint> = points
            .iter()
            .zip(&images)
            .filter(|(_, image)| cell_hull.contains(image))
            .map(|(p, _)| p.clone())
            .collect();
        let chunk = convex_hull(&members, base_dim + 1)?;
        if !chunk_is_full_preimage(&chunk, total, &cell_hull) {
            return Err(Error::invalid_complex(
                "a chunk is smaller than the preimage of its cell",
            ));
        }
        volume += chunk.normalized_volume();
        chunks.push(chunk);
    }
    if volume != total.normalized_volume() {
        return Err(Error::invalid_complex(
            "chunk volumes do not add up to the polytope",
        ));
    }
    Ok(FiberedSubdivision {
        base: delta.clone(),
        chunks,
    })
}

/// Verifies that `chunk` equals the region of `total` lying over
/// `cell_hull`: the region satisfies every facet of the chunk, hence the
/// two convex bodies coincide.
fn chunk_is_full_preimage(
    chunk: &LatticePolytope,
    total: &LatticePolytope,
    cell_hull: &LatticePolytope,
) -> bool {
    let dim = total.dim();
    for facet in &chunk.hrep().facets {
        let mut lp = LinearProgram::new(dim);
        for region_facet in &total.hrep().facets {
            lp.add_int_constraint(
                region_facet.normal.coords(),
                Relation::Ge,
                region_facet.offset.clone(),
            );
        }
        for base_facet in &cell_hull.hrep().facets {
            let mut lifted = base_facet.normal.coords().to_vec();
            lifted.push(BigInt::zero());
            lp.add_int_constraint(&lifted, Relation::Ge, base_facet.offset.clone());
        }
        let objective: Vec<BigRational> = facet
            .normal
            .coords()
            .iter()
            .map(|c| BigRational::from_integer(-c.clone()))
            .collect();
        lp.set_objective(objective);
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => {
                if -value < BigRational::from_integer(facet.offset.clone()) {
                    return false;
                }
            }
            // The region is a subset of a polytope, so it is bounded, and
            // it contains the chunk, so it is nonempty.
            LpOutcome::Unbounded { .. } | LpOutcome::Infeasible { .. } => return false,
        }
    }
    true
}

/// Whether every maximal cell of `t` lies inside some chunk of `sub`.
pub fn refines(t: &TriangulationComplex, sub: &FiberedSubdivision) -> bool {
    t.maximal_cells().iter().enumerate().all(|(ci, _)| {
        let points = t.cell_points(ci);
        sub.chunks()
            .iter()
            .any(|chunk| points.iter().all(|p| chunk.contains(p)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_twisted_prism, product_with_segment};
    use crate::triangulation::complex::SquareDiagonal;

    fn pts(coords: &[&[i64]]) -> Vec<IntPoint> {
        coords.iter().map(|c| IntPoint::from_i64(c)).collect()
    }

    fn square_projection() -> AffineMap {
        AffineMap::projection(3, 2)
    }

    #[test]
    fn test_cube_over_either_diagonal_gives_two_prisms() {
        let cube = make_twisted_prism(0);
        for diagonal in [SquareDiagonal::Main, SquareDiagonal::Anti] {
            let delta = TriangulationComplex::unit_square(diagonal);
            let sub = fibered_subdivision(&square_projection(), &cube, &delta).unwrap();
            assert_eq!(sub.chunks().len(), 2);
            for chunk in sub.chunks() {
                assert_eq!(chunk.vertices().len(), 6);
                assert_eq!(chunk.normalized_volume(), BigInt::from(3));
            }
        }
    }

    #[test]
    fn test_twisted_prisms_reject_both_diagonals() {
        for twist in [1u64, 2, 5] {
            let prism = make_twisted_prism(twist);
            for diagonal in [SquareDiagonal::Main, SquareDiagonal::Anti] {
                let delta = TriangulationComplex::unit_square(diagonal);
                let result = fibered_subdivision(&square_projection(), &prism, &delta);
                assert!(
                    matches!(result, Err(Error::FaceCompatibility { .. })),
                    "twist {twist} must fail face compatibility"
                );
            }
        }
    }

    #[test]
    fn test_corner_pyramid_is_compatible_with_exactly_one_diagonal() {
        // Square pyramid whose apex sits above the corner (0, 1): the two
        // upper facets crease along the diagonal through (1, 0) and (0, 1),
        // so only that diagonal's triangulation is compatible.
        let pyramid = convex_hull(
            &pts(&[
                &[0, 0, 0],
                &[1, 0, 0],
                &[0, 1, 0],
                &[1, 1, 0],
                &[0, 1, 1],
            ]),
            3,
        )
        .unwrap();
        let anti = TriangulationComplex::unit_square(SquareDiagonal::Anti);
        let sub = fibered_subdivision(&square_projection(), &pyramid, &anti).unwrap();
        assert_eq!(sub.chunks().len(), 2);
        let volumes: Vec<BigInt> = sub
            .chunks()
            .iter()
            .map(|c| c.normalized_volume())
            .collect();
        assert_eq!(volumes, vec![BigInt::from(1), BigInt::from(1)]);

        let main = TriangulationComplex::unit_square(SquareDiagonal::Main);
        assert!(matches!(
            fibered_subdivision(&square_projection(), &pyramid, &main),
            Err(Error::FaceCompatibility { .. })
        ));
    }

    #[test]
    fn test_prism_chunks_refine_check() {
        let cube = make_twisted_prism(0);
        let delta = TriangulationComplex::unit_square(SquareDiagonal::Main);
        let sub = fibered_subdivision(&square_projection(), &cube, &delta).unwrap();

        // The standard six-tetrahedron triangulation along the main
        // diagonal refines the two main-diagonal prisms...
        let t = TriangulationComplex::from_cells(&[
            pts(&[&[0, 0, 0], &[1, 0, 0], &[1, 1, 0], &[1, 1, 1]]),
            pts(&[&[0, 0, 0], &[1, 0, 0], &[1, 0, 1], &[1, 1, 1]]),
            pts(&[&[0, 0, 0], &[0, 1, 0], &[1, 1, 0], &[1, 1, 1]]),
            pts(&[&[0, 0, 0], &[0, 1, 0], &[0, 1, 1], &[1, 1, 1]]),
            pts(&[&[0, 0, 0], &[0, 0, 1], &[1, 0, 1], &[1, 1, 1]]),
            pts(&[&[0, 0, 0], &[0, 0, 1], &[0, 1, 1], &[1, 1, 1]]),
        ])
        .unwrap();
        assert!(refines(&t, &sub));

        // ...but not the two anti-diagonal prisms.
        let anti = TriangulationComplex::unit_square(SquareDiagonal::Anti);
        let sub_anti = fibered_subdivision(&square_projection(), &cube, &anti).unwrap();
        assert!(!refines(&t, &sub_anti));
    }

    #[test]
    fn test_prism_over_a_triangle_base_complex() {
        // A prism over the standard triangle, subdivided over the one-cell
        // triangulation of the triangle: a single chunk, the prism itself.
        let triangle = convex_hull(&pts(&[&[0, 0], &[1, 0], &[0, 1]]), 2).unwrap();
        let prism = product_with_segment(&triangle);
        let delta = TriangulationComplex::from_cells(&[pts(&[&[0, 0], &[1, 0], &[0, 1]])])
            .unwrap();
        let sub = fibered_subdivision(&square_projection(), &prism, &delta).unwrap();
        assert_eq!(sub.chunks().len(), 1);
        assert_eq!(sub.chunks()[0].normalized_volume(), prism.normalized_volume());
    }

    #[test]
    fn test_dimension_mismatch_is_rejected() {
        let cube = make_twisted_prism(0);
        let delta = TriangulationComplex::point_complex();
        assert!(matches!(
            fibered_subdivision(&AffineMap::projection(3, 0), &cube, &delta),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn test_non_triangulation_base_is_rejected() {
        // Two overlapping triangles over the square are not a triangulation
        // of the square, so the construction refuses to start.
        let cube = make_twisted_prism(0);
        let pool = pts(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
        let delta =
            TriangulationComplex::new(pool, vec![vec![0, 1, 2], vec![0, 2, 3]]).unwrap();
        assert!(matches!(
            fibered_subdivision(&square_projection(), &cube, &delta),
            Err(Error::ConstructionFailure { .. })
        ));
    }
}

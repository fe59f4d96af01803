//! Exact convex hulls of full-dimensional lattice point sets.
//!
//! The hull is built incrementally (beneath-beyond) over simplicial facet
//! pieces with exact rational orientation tests, then coplanar pieces are
//! merged into the final irredundant facet list. Strict visibility tests keep
//! the algorithm correct on degenerate inputs: a point exactly on a facet
//! plane never counts as "beyond" it, and new cone facets are provably
//! disjoint from the coplanar facets they extend.
//!
//! Ambient dimension is capped at [`MAX_HULL_DIM`]; the incremental scheme is
//! meant for desk-scale instances, not high-dimensional production hulls.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{clear_denominators, rat_from_int_row, rat_rref, rat_solve_general, IntMat};
use crate::point::{check_dims, sort_dedup, IntPoint};

/// Largest ambient dimension accepted by [`convex_hull`].
pub const MAX_HULL_DIM: usize = 6;

/// One inequality `<normal, x> >= offset` with a primitive inward normal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Facet {
    pub normal: IntPoint,
    pub offset: BigInt,
}

impl Facet {
    pub fn eval(&self, p: &IntPoint) -> BigInt {
        p.dot(self.normal.coords()) - &self.offset
    }

    pub fn eval_rational(&self, p: &[BigRational]) -> BigRational {
        let mut acc = -BigRational::from_integer(self.offset.clone());
        for (n, x) in self.normal.coords().iter().zip(p) {
            acc += BigRational::from_integer(n.clone()) * x;
        }
        acc
    }
}

/// Irredundant inequality description of a full-dimensional polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRepresentation {
    pub dim: usize,
    pub facets: Vec<Facet>,
}

impl HRepresentation {
    pub fn contains(&self, p: &IntPoint) -> bool {
        p.dim() == self.dim && self.facets.iter().all(|f| !f.eval(p).is_negative())
    }

    pub fn contains_rational(&self, p: &[BigRational]) -> bool {
        p.len() == self.dim
            && self
                .facets
                .iter()
                .all(|f| !f.eval_rational(p).is_negative())
    }

    /// The dilation `factor * P` keeps the normals and scales the offsets.
    pub fn dilate(&self, factor: &BigInt) -> HRepresentation {
        HRepresentation {
            dim: self.dim,
            facets: self
                .facets
                .iter()
                .map(|f| Facet {
                    normal: f.normal.clone(),
                    offset: &f.offset * factor,
                })
                .collect(),
        }
    }
}

/// A full-dimensional lattice polytope: lex-sorted vertex list plus the
/// matching irredundant H-representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<IntPoint>,
    hrep: HRepresentation,
}

impl LatticePolytope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[IntPoint] {
        &self.vertices
    }

    pub fn hrep(&self) -> &HRepresentation {
        &self.hrep
    }

    pub fn contains(&self, p: &IntPoint) -> bool {
        if self.dim == 0 {
            return p.dim() == 0;
        }
        self.hrep.contains(p)
    }

    pub fn contains_rational(&self, p: &[BigRational]) -> bool {
        if self.dim == 0 {
            return p.is_empty();
        }
        self.hrep.contains_rational(p)
    }

    /// Assembles a polytope from parts already known to be consistent; the
    /// claimed structure is re-checked in debug builds.
    pub fn from_parts(dim: usize, vertices: Vec<IntPoint>, facets: Vec<Facet>) -> Self {
        let vertices = sort_dedup(vertices);
        let mut facets = facets;
        facets.sort();
        facets.dedup();
        let poly = LatticePolytope {
            dim,
            vertices,
            hrep: HRepresentation { dim, facets },
        };
        debug_assert!(
            poly.vertices.iter().all(|v| poly.contains(v)),
            "from_parts vertices must satisfy the facets"
        );
        poly
    }

    /// Vertex indices incident to the given facet.
    pub fn facet_incidence(&self, facet: &Facet) -> Vec<usize> {
        self.vertices
            .iter()
            .enumerate()
            .filter(|(_, v)| facet.eval(v).is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// All nonempty faces as sorted vertex index sets (the full polytope
    /// included), generated by closing the facet incidence sets under
    /// intersection.
    pub fn all_faces(&self) -> Vec<Vec<usize>> {
        let full: Vec<usize> = (0..self.vertices.len()).collect();
        let facet_sets: Vec<BTreeSet<usize>> = self
            .hrep
            .facets
            .iter()
            .map(|f| self.facet_incidence(f).into_iter().collect())
            .collect();
        let mut known: BTreeSet<Vec<usize>> = BTreeSet::new();
        known.insert(full);
        let mut queue: Vec<BTreeSet<usize>> = facet_sets.clone();
        while let Some(face) = queue.pop() {
            if face.is_empty() {
                continue;
            }
            let as_vec: Vec<usize> = face.iter().copied().collect();
            if !known.insert(as_vec) {
                continue;
            }
            for fs in &facet_sets {
                let inter: BTreeSet<usize> = face.intersection(fs).copied().collect();
                if !inter.is_empty() && inter.len() < face.len() {
                    queue.push(inter);
                }
            }
        }
        known.into_iter().collect()
    }

    /// Edges as pairs of vertex indices: exactly the two-element faces.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.all_faces()
            .into_iter()
            .filter(|f| f.len() == 2)
            .map(|f| (f[0], f[1]))
            .collect()
    }

    /// A triangulation of the polytope by coning the lex-least vertex over
    /// recursively triangulated facets. Returns vertex index sets; the union
    /// of the simplices is the polytope and interiors are disjoint.
    pub fn fan_triangulation(&self) -> Vec<Vec<usize>> {
        if self.dim == 0 || self.vertices.len() == self.dim + 1 {
            return vec![(0..self.vertices.len()).collect()];
        }
        if self.dim == 1 {
            return vec![vec![0, self.vertices.len() - 1]];
        }
        let apex = 0usize;
        let mut simplices = Vec::new();
        for facet in &self.hrep.facets {
            if facet.eval(&self.vertices[apex]).is_zero() {
                continue;
            }
            let incidence = self.facet_incidence(facet);
            for sub in triangulate_facet(self, facet, &incidence) {
                let mut simplex = vec![apex];
                simplex.extend(sub);
                simplex.sort_unstable();
                simplices.push(simplex);
            }
        }
        simplices.sort();
        simplices
    }

    /// Normalized volume: `dim! *` Euclidean volume, always an integer.
    pub fn normalized_volume(&self) -> BigInt {
        if self.dim == 0 {
            return BigInt::from(1);
        }
        let mut total = BigInt::zero();
        for simplex in self.fan_triangulation() {
            total += simplex_normalized_volume(&self.vertices, &simplex);
        }
        total
    }
}

/// `|det|` of the difference vectors of a full-dimensional simplex given by
/// vertex indices into `points`.
pub fn simplex_normalized_volume(points: &[IntPoint], simplex: &[usize]) -> BigInt {
    let base = &points[simplex[0]];
    let rows: Vec<Vec<BigInt>> = simplex[1..]
        .iter()
        .map(|&i| points[i].sub(base).into_coords())
        .collect();
    let dim = base.dim();
    IntMat::new(rows, dim).determinant().abs()
}

fn triangulate_facet(
    poly: &LatticePolytope,
    facet: &Facet,
    incidence: &[usize],
) -> Vec<Vec<usize>> {
    // Project the facet into d-1 coordinates by dropping one where the
    // normal is nonzero; this is injective on the facet's hyperplane.
    let drop = facet
        .normal
        .coords()
        .iter()
        .position(|c| !c.is_zero())
        .expect("facet normal cannot be zero");
    let projected: Vec<IntPoint> = incidence
        .iter()
        .map(|&i| {
            let coords: Vec<BigInt> = poly.vertices[i]
                .coords()
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != drop)
                .map(|(_, c)| c.clone())
                .collect();
            IntPoint::new(coords)
        })
        .collect();
    let sub = convex_hull(&projected, poly.dim - 1)
        .expect("facet points are full-dimensional in the projection");
    // Map projected points back to original vertex indices.
    let lookup: BTreeMap<IntPoint, usize> = projected
        .iter()
        .cloned()
        .zip(incidence.iter().copied())
        .collect();
    sub.fan_triangulation()
        .into_iter()
        .map(|simplex| {
            simplex
                .into_iter()
                .map(|k| lookup[&sub.vertices[k]])
                .collect()
        })
        .collect()
}

/// Exact convex hull of a full-dimensional point set in `Z^dim`.
///
/// # Errors
///
/// Fails when the set is empty, mixes dimensions, spans less than the
/// ambient dimension, or the dimension exceeds [`MAX_HULL_DIM`].
pub fn convex_hull(points: &[IntPoint], dim: usize) -> Result<LatticePolytope> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    check_dims(points, dim)?;
    if dim > MAX_HULL_DIM {
        return Err(Error::DimensionTooLarge {
            dim,
            max: MAX_HULL_DIM,
        });
    }
    let points = sort_dedup(points.to_vec());

    if dim == 0 {
        return Ok(LatticePolytope {
            dim,
            vertices: points,
            hrep: HRepresentation { dim, facets: vec![] },
        });
    }

    let simplex = affinely_independent_subset(&points, dim)?;
    if dim == 1 {
        let lo = points.first().unwrap().clone();
        let hi = points.last().unwrap().clone();
        let facets = vec![
            Facet {
                normal: IntPoint::from_i64(&[1]),
                offset: lo.coords()[0].clone(),
            },
            Facet {
                normal: IntPoint::from_i64(&[-1]),
                offset: -hi.coords()[0].clone(),
            },
        ];
        return Ok(LatticePolytope {
            dim,
            vertices: vec![lo, hi],
            hrep: HRepresentation { dim, facets },
        });
    }

    let mut pieces: Vec<Piece> = Vec::new();
    for skip in 0..=dim {
        let verts: Vec<usize> = (0..=dim).filter(|&k| k != skip).map(|k| simplex[k]).collect();
        let (normal, offset) = hyperplane_through(&points, &verts, dim);
        let apex = &points[simplex[skip]];
        let piece = if (apex.dot(normal.coords()) - &offset).is_negative() {
            Piece {
                verts,
                offset: -&offset,
                normal: normal.scale(&BigInt::from(-1)),
            }
        } else {
            Piece {
                verts,
                normal,
                offset,
            }
        };
        pieces.push(piece);
    }

    let in_simplex: BTreeSet<usize> = simplex.iter().copied().collect();
    for idx in 0..points.len() {
        if in_simplex.contains(&idx) {
            continue;
        }
        insert_point(&mut pieces, &points, idx);
    }

    // Merge coplanar pieces into the final irredundant facet list.
    let mut facets: Vec<Facet> = pieces
        .iter()
        .map(|p| Facet {
            normal: p.normal.clone(),
            offset: p.offset.clone(),
        })
        .collect();
    facets.sort();
    facets.dedup();

    // A point is a vertex exactly when its active normals span the space.
    let mut vertices = Vec::new();
    for p in &points {
        let active: Vec<&Facet> = facets.iter().filter(|f| f.eval(p).is_zero()).collect();
        if active.len() < dim {
            continue;
        }
        let mut rows: Vec<Vec<BigRational>> = active
            .iter()
            .map(|f| rat_from_int_row(f.normal.coords()))
            .collect();
        if rat_rref(&mut rows).len() == dim {
            vertices.push(p.clone());
        }
    }

    debug_assert!(
        points.iter().all(|p| facets.iter().all(|f| !f.eval(p).is_negative())),
        "hull must contain every input point"
    );

    Ok(LatticePolytope {
        dim,
        vertices,
        hrep: HRepresentation { dim, facets },
    })
}

/// Simplicial facet piece used during construction.
struct Piece {
    verts: Vec<usize>,
    normal: IntPoint,
    offset: BigInt,
}

fn insert_point(pieces: &mut Vec<Piece>, points: &[IntPoint], idx: usize) {
    let p = &points[idx];
    let visible: Vec<usize> = pieces
        .iter()
        .enumerate()
        .filter(|(_, piece)| (p.dot(piece.normal.coords()) - &piece.offset).is_negative())
        .map(|(i, _)| i)
        .collect();
    if visible.is_empty() {
        return; // Inside or on the boundary of the current hull.
    }

    // Horizon ridges appear in exactly one visible piece.
    let mut ridge_count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for &pi in &visible {
        let verts = &pieces[pi].verts;
        for skip in 0..verts.len() {
            let mut ridge: Vec<usize> = verts
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != skip)
                .map(|(_, &v)| v)
                .collect();
            ridge.sort_unstable();
            *ridge_count.entry(ridge).or_insert(0) += 1;
        }
    }

    let dim = p.dim();
    let mut new_pieces = Vec::new();
    for (ridge, count) in ridge_count {
        if count != 1 {
            continue;
        }
        let mut verts = ridge;
        verts.push(idx);
        verts.sort_unstable();
        let (normal, offset) = hyperplane_through(points, &verts, dim);
        // Orient inward using any current hull point strictly off the plane.
        let reference = pieces
            .iter()
            .flat_map(|piece| piece.verts.iter())
            .map(|&v| &points[v])
            .find(|q| !(q.dot(normal.coords()) - &offset).is_zero())
            .expect("full-dimensional hull has points off every facet plane");
        if (reference.dot(normal.coords()) - &offset).is_negative() {
            new_pieces.push(Piece {
                verts,
                offset: -&offset,
                normal: normal.scale(&BigInt::from(-1)),
            });
        } else {
            new_pieces.push(Piece {
                verts,
                normal,
                offset,
            });
        }
    }

    let visible_set: BTreeSet<usize> = visible.into_iter().collect();
    let mut kept = Vec::new();
    for (i, piece) in pieces.drain(..).enumerate() {
        if !visible_set.contains(&i) {
            kept.push(piece);
        }
    }
    kept.extend(new_pieces);
    *pieces = kept;
}

/// Primitive integer hyperplane through `dim` affinely independent points.
fn hyperplane_through(points: &[IntPoint], verts: &[usize], dim: usize) -> (IntPoint, BigInt) {
    debug_assert_eq!(verts.len(), dim);
    let base = &points[verts[0]];
    let rows: Vec<Vec<BigRational>> = verts[1..]
        .iter()
        .map(|&v| rat_from_int_row(points[v].sub(base).coords()))
        .collect();
    let rhs = vec![BigRational::zero(); rows.len()];
    let (_, nullspace) =
        rat_solve_general(&rows, &rhs).expect("homogeneous system is always consistent");
    assert_eq!(
        nullspace.len(),
        1,
        "facet points must be affinely independent"
    );
    let normal = clear_denominators(&nullspace[0]);
    let offset = base.dot(normal.coords());
    (normal, offset)
}

fn affinely_independent_subset(points: &[IntPoint], dim: usize) -> Result<Vec<usize>> {
    let mut chosen = vec![0usize];
    let mut diffs: Vec<Vec<BigRational>> = Vec::new();
    for (i, p) in points.iter().enumerate().skip(1) {
        if chosen.len() == dim + 1 {
            break;
        }
        let mut candidate = diffs.clone();
        candidate.push(rat_from_int_row(p.sub(&points[0]).coords()));
        let mut work = candidate.clone();
        if rat_rref(&mut work).len() == candidate.len() {
            diffs = candidate;
            chosen.push(i);
        }
    }
    if chosen.len() < dim + 1 {
        return Err(Error::NotFullDimensional {
            spanned: chosen.len() - 1,
            ambient: dim,
        });
    }
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn pts(coords: &[&[i64]]) -> Vec<IntPoint> {
        coords.iter().map(|c| IntPoint::from_i64(c)).collect()
    }

    fn hull(coords: &[&[i64]], dim: usize) -> LatticePolytope {
        convex_hull(&pts(coords), dim).unwrap()
    }

    /// Brute-force facet oracle: every d-subset of points spanning a valid
    /// supporting hyperplane, deduplicated. Exponential, test-only.
    fn oracle_facets(points: &[IntPoint], dim: usize) -> BTreeSet<(IntPoint, BigInt)> {
        let mut found = BTreeSet::new();
        let mut subset = vec![0usize; dim];
        fn rec(
            points: &[IntPoint],
            dim: usize,
            start: usize,
            depth: usize,
            subset: &mut Vec<usize>,
            found: &mut BTreeSet<(IntPoint, BigInt)>,
        ) {
            if depth == dim {
                let base = &points[subset[0]];
                let rows: Vec<Vec<BigRational>> = subset[1..]
                    .iter()
                    .map(|&v| rat_from_int_row(points[v].sub(base).coords()))
                    .collect();
                let rhs = vec![BigRational::zero(); rows.len()];
                let (_, nullspace) = rat_solve_general(&rows, &rhs).unwrap();
                if nullspace.len() != 1 {
                    return;
                }
                let normal = clear_denominators(&nullspace[0]);
                let offset = base.dot(normal.coords());
                let mut pos = false;
                let mut neg = false;
                for p in points {
                    let v = p.dot(normal.coords()) - &offset;
                    if v.is_positive() {
                        pos = true;
                    } else if v.is_negative() {
                        neg = true;
                    }
                }
                if pos && !neg {
                    found.insert((normal, offset));
                } else if neg && !pos {
                    found.insert((normal.scale(&BigInt::from(-1)), -offset));
                }
                return;
            }
            for i in start..points.len() {
                subset[depth] = i;
                rec(points, dim, i + 1, depth + 1, subset, found);
            }
        }
        rec(points, dim, 0, 0, &mut subset, &mut found);
        found
    }

    #[test]
    fn test_square_with_interior_point() {
        // Doubled unit square plus its center: the center must not be a vertex.
        let h = hull(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2], &[1, 1]], 2);
        assert_eq!(h.vertices().len(), 4);
        assert_eq!(h.hrep().facets.len(), 4);
        assert!(h.contains(&IntPoint::from_i64(&[1, 1])));
        assert!(!h.contains(&IntPoint::from_i64(&[3, 0])));
    }

    #[test]
    fn test_collinear_points_on_boundary_are_not_vertices() {
        let h = hull(&[&[0, 0], &[1, 0], &[2, 0], &[0, 1]], 2);
        assert_eq!(
            h.vertices(),
            &pts(&[&[0, 0], &[0, 1], &[2, 0]])[..]
        );
    }

    #[test]
    fn test_cube_has_six_facets() {
        let cube: Vec<IntPoint> = (0..8)
            .map(|k| IntPoint::from_i64(&[k & 1, (k >> 1) & 1, (k >> 2) & 1]))
            .collect();
        let h = convex_hull(&cube, 3).unwrap();
        assert_eq!(h.vertices().len(), 8);
        assert_eq!(h.hrep().facets.len(), 6);
        assert_eq!(h.normalized_volume(), BigInt::from(6));
    }

    #[test]
    fn test_low_dimensional_input_is_rejected() {
        let err = convex_hull(&pts(&[&[0, 0], &[1, 1], &[2, 2]]), 2).unwrap_err();
        assert!(matches!(err, Error::NotFullDimensional { spanned: 1, ambient: 2 }));
    }

    #[test]
    fn test_segment_hull() {
        let h = hull(&[&[3], &[0], &[1]], 1);
        assert_eq!(h.vertices(), &pts(&[&[0], &[3]])[..]);
        assert_eq!(h.normalized_volume(), BigInt::from(3));
    }

    #[test]
    fn test_twisted_prism_facet_count() {
        // Height-twisted prism over the unit square: 4 triangles + 4 quads.
        let h = hull(
            &[
                &[0, 0, 0],
                &[0, 0, 1],
                &[1, 0, 0],
                &[1, 0, 1],
                &[0, 1, 0],
                &[0, 1, 1],
                &[1, 1, 5],
                &[1, 1, 6],
            ],
            3,
        );
        assert_eq!(h.vertices().len(), 8);
        assert_eq!(h.hrep().facets.len(), 8);
        let triangles = h
            .hrep()
            .facets
            .iter()
            .filter(|f| h.facet_incidence(f).len() == 3)
            .count();
        assert_eq!(triangles, 4);
    }

    #[test]
    fn test_matches_brute_force_oracle_on_random_sets() {
        let mut rng = StdRng::seed_from_u64(20240811);
        for dim in 2..=3usize {
            for _ in 0..30 {
                let n = rng.gen_range(dim + 1..dim + 7);
                let points: Vec<IntPoint> = (0..n)
                    .map(|_| {
                        IntPoint::new(
                            (0..dim).map(|_| BigInt::from(rng.gen_range(-3..=3i64))).collect(),
                        )
                    })
                    .collect();
                let hull = match convex_hull(&points, dim) {
                    Ok(h) => h,
                    Err(_) => continue, // Degenerate sample; oracle not applicable.
                };
                let expected = oracle_facets(&sort_dedup(points), dim);
                let got: BTreeSet<(IntPoint, BigInt)> = hull
                    .hrep()
                    .facets
                    .iter()
                    .map(|f| (f.normal.clone(), f.offset.clone()))
                    .collect();
                assert_eq!(got, expected, "facet sets must agree with brute force");
            }
        }
    }

    #[test]
    fn test_fan_triangulation_volume_of_octahedron() {
        let h = hull(
            &[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0], &[0, 0, 1], &[0, 0, -1]],
            3,
        );
        assert_eq!(h.hrep().facets.len(), 8);
        // Euclidean volume 4/3, normalized 3! * 4/3 = 8.
        assert_eq!(h.normalized_volume(), BigInt::from(8));
        // Simplices are disjoint-interior and cover: their volumes sum up.
        let total: BigInt = h
            .fan_triangulation()
            .iter()
            .map(|s| simplex_normalized_volume(h.vertices(), s))
            .sum();
        assert_eq!(total, BigInt::from(8));
    }

    #[test]
    fn test_all_faces_of_square() {
        let h = hull(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]], 2);
        let faces = h.all_faces();
        // 4 vertices + 4 edges + the square itself.
        assert_eq!(faces.len(), 9);
        assert_eq!(h.edges().len(), 4);
    }

    #[test]
    fn test_dimension_cap() {
        let err = convex_hull(&pts(&[&[0; 7]]), 7).unwrap_err();
        assert!(matches!(err, Error::DimensionTooLarge { dim: 7, max: 6 }));
    }
}

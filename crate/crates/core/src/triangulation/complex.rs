//! Geometric simplicial complexes over an explicit vertex pool.
//!
//! A complex stores its maximal cells as sorted index sets into a
//! lexicographically sorted pool, so equal complexes have equal
//! representations. The certificates here never trust combinatorics:
//! [`verify_complex`] decides "these cells tile that polytope face to face"
//! with exact linear programs, and [`is_flag`] enumerates maximal cliques of
//! the edge graph rather than testing a sample of minimal non-faces.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hull::{simplex_normalized_volume, LatticePolytope};
use crate::lp::{LinearProgram, LpOutcome};
use crate::point::{check_dims, IntPoint};

/// Which diagonal splits the unit square into two triangles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SquareDiagonal {
    /// The diagonal through `(0, 0)` and `(1, 1)`.
    Main,
    /// The diagonal through `(0, 1)` and `(1, 0)`.
    Anti,
}

/// A finite geometric simplicial complex, stored by its maximal cells.
///
/// The vertex pool is lexicographically sorted and duplicate-free, each cell
/// is a strictly increasing index vector, and the cell list itself is sorted
/// and free of duplicates and of cells contained in other cells. Optional
/// per-vertex heights record a certified regular lift when one is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangulationComplex {
    vertex_pool: Vec<IntPoint>,
    simplices: Vec<Vec<usize>>,
    heights: Option<Vec<BigRational>>,
}

impl TriangulationComplex {
    /// Builds a complex from a pool and maximal cells, canonicalizing the
    /// representation: the pool is sorted and deduplicated (indices are
    /// remapped accordingly) and the cell list is sorted.
    ///
    /// # Errors
    ///
    /// [`Error::EmptyInput`] when there are no cells, and
    /// [`Error::Malformed`] for out-of-range indices, an index repeated
    /// within a cell, mismatched coordinate dimensions, duplicate cells, or
    /// a cell contained in another one.
    pub fn new(vertex_pool: Vec<IntPoint>, simplices: Vec<Vec<usize>>) -> Result<Self> {
        if simplices.is_empty() || vertex_pool.is_empty() {
            return Err(Error::EmptyInput);
        }
        let dim = vertex_pool[0].dim();
        check_dims(&vertex_pool, dim)?;

        let mut sorted = vertex_pool.clone();
        sorted.sort();
        sorted.dedup();
        let position: BTreeMap<&IntPoint, usize> = sorted
            .iter()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();

        let mut cells = Vec::with_capacity(simplices.len());
        for cell in &simplices {
            let mut mapped = Vec::with_capacity(cell.len());
            for &i in cell {
                let point = vertex_pool.get(i).ok_or_else(|| {
                    Error::malformed(format!("cell index {i} is out of range"))
                })?;
                mapped.push(position[point]);
            }
            mapped.sort_unstable();
            let before = mapped.len();
            mapped.dedup();
            if mapped.len() != before {
                return Err(Error::malformed("cell repeats a vertex"));
            }
            cells.push(mapped);
        }
        cells.sort();
        let before = cells.len();
        cells.dedup();
        if cells.len() != before {
            return Err(Error::malformed("duplicate maximal cell"));
        }
        for a in &cells {
            for b in &cells {
                if a.len() < b.len() && a.iter().all(|i| b.binary_search(i).is_ok()) {
                    return Err(Error::malformed(
                        "a maximal cell is contained in another cell",
                    ));
                }
            }
        }
        Ok(TriangulationComplex {
            vertex_pool: sorted,
            simplices: cells,
            heights: None,
        })
    }

    /// Builds a complex from explicit point cells, pooling the points.
    pub fn from_cells(cells: &[Vec<IntPoint>]) -> Result<Self> {
        let mut pool: Vec<IntPoint> = cells.iter().flatten().cloned().collect();
        pool.sort();
        pool.dedup();
        let position: BTreeMap<&IntPoint, usize> = pool
            .iter()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        let mut index_cells = Vec::with_capacity(cells.len());
        for cell in cells {
            let mut mapped = Vec::with_capacity(cell.len());
            for p in cell {
                let &i = position
                    .get(p)
                    .ok_or_else(|| Error::malformed("cell point missing from pool"))?;
                mapped.push(i);
            }
            index_cells.push(mapped);
        }
        TriangulationComplex::new(pool, index_cells)
    }

    /// The one-cell complex whose only vertex is the origin of `Z^0`.
    ///
    /// This is the canonical base for towers of fibrations: a
    /// zero-dimensional polytope has exactly one triangulation.
    pub fn point_complex() -> Self {
        TriangulationComplex {
            vertex_pool: vec![IntPoint::origin(0)],
            simplices: vec![vec![0]],
            heights: None,
        }
    }

    /// One of the two triangulations of the unit square into two triangles.
    pub fn unit_square(diagonal: SquareDiagonal) -> Self {
        let pool = vec![
            IntPoint::from_i64(&[0, 0]),
            IntPoint::from_i64(&[0, 1]),
            IntPoint::from_i64(&[1, 0]),
            IntPoint::from_i64(&[1, 1]),
        ];
        let simplices = match diagonal {
            SquareDiagonal::Main => vec![vec![0, 1, 3], vec![0, 2, 3]],
            SquareDiagonal::Anti => vec![vec![0, 1, 2], vec![1, 2, 3]],
        };
        TriangulationComplex {
            vertex_pool: pool,
            simplices,
            heights: None,
        }
    }

    /// Ambient coordinate dimension of the pool.
    pub fn ambient_dim(&self) -> usize {
        self.vertex_pool[0].dim()
    }

    pub fn vertex_pool(&self) -> &[IntPoint] {
        &self.vertex_pool
    }

    /// Maximal cells as sorted index vectors into the pool.
    pub fn maximal_cells(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    /// The points of one maximal cell.
    pub fn cell_points(&self, cell: usize) -> Vec<IntPoint> {
        self.simplices[cell]
            .iter()
            .map(|&i| self.vertex_pool[i].clone())
            .collect()
    }

    /// Certified lifting heights, when regularity has been established.
    pub fn heights(&self) -> Option<&[BigRational]> {
        self.heights.as_deref()
    }

    /// Attaches one lifting height per pool vertex.
    ///
    /// # Errors
    ///
    /// [`Error::DimensionMismatch`] when the count differs from the pool.
    pub fn with_heights(mut self, heights: Vec<BigRational>) -> Result<Self> {
        if heights.len() != self.vertex_pool.len() {
            return Err(Error::DimensionMismatch {
                expected: self.vertex_pool.len(),
                got: heights.len(),
            });
        }
        self.heights = Some(heights);
        Ok(self)
    }

    /// Edges of the complex: index pairs that share a cell.
    pub fn edges(&self) -> BTreeSet<(usize, usize)> {
        let mut edges = BTreeSet::new();
        for cell in &self.simplices {
            for (k, &a) in cell.iter().enumerate() {
                for &b in &cell[k + 1..] {
                    edges.insert((a, b));
                }
            }
        }
        edges
    }
}

/// Whether every maximal cell is a unimodular full-dimensional simplex.
///
/// Cells with the wrong vertex count, affinely dependent vertices, or a
/// fundamental parallelepiped of volume greater than one all make the
/// answer `false`.
pub fn is_unimodular_triangulation(t: &TriangulationComplex) -> bool {
    let dim = t.ambient_dim();
    t.maximal_cells().iter().all(|cell| {
        cell.len() == dim + 1
            && simplex_normalized_volume(t.vertex_pool(), cell) == BigInt::one()
    })
}

/// Whether the complex is flag: every clique of its edge graph spans a cell.
///
/// Maximal cliques are enumerated exactly (Bron–Kerbosch with pivoting), so
/// a `true` answer certifies that minimal non-faces all have two vertices.
pub fn is_flag(t: &TriangulationComplex) -> bool {
    let n = t.vertex_pool().len();
    let mut neighbors: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (a, b) in t.edges() {
        neighbors[a].insert(b);
        neighbors[b].insert(a);
    }
    let cells: Vec<BTreeSet<usize>> = t
        .maximal_cells()
        .iter()
        .map(|c| c.iter().copied().collect())
        .collect();

    let mut all: BTreeSet<usize> = (0..n).collect();
    let mut stack = vec![(BTreeSet::new(), std::mem::take(&mut all), BTreeSet::new())];
    while let Some((clique, mut candidates, mut excluded)) = stack.pop() {
        if candidates.is_empty() && excluded.is_empty() {
            if !cells.iter().any(|cell| clique.is_subset(cell)) {
                return false;
            }
            continue;
        }
        // Pivot on the vertex dominating the most candidates.
        let pivot = candidates
            .iter()
            .chain(excluded.iter())
            .copied()
            .max_by_key(|&u| candidates.intersection(&neighbors[u]).count())
            .expect("nonempty candidate or excluded set");
        let branches: Vec<usize> = candidates
            .difference(&neighbors[pivot])
            .copied()
            .collect();
        for v in branches {
            let mut next_clique = clique.clone();
            next_clique.insert(v);
            let next_candidates: BTreeSet<usize> =
                candidates.intersection(&neighbors[v]).copied().collect();
            let next_excluded: BTreeSet<usize> =
                excluded.intersection(&neighbors[v]).copied().collect();
            stack.push((next_clique, next_candidates, next_excluded));
            candidates.remove(&v);
            excluded.insert(v);
        }
        // Branches taken through the pivot's neighbors are handled by the
        // pushed subproblems; nothing more to do at this node.
    }
    true
}

/// The first reason a complex fails to triangulate a polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComplexDefect {
    /// Pool coordinates do not live in the polytope's ambient space.
    AmbientDimMismatch { expected: usize, got: usize },
    /// A pool vertex lies outside the polytope.
    VertexOutside { vertex: usize },
    /// A maximal cell does not have dimension-plus-one vertices.
    WrongCellSize { cell: usize },
    /// A maximal cell is affinely degenerate.
    DegenerateCell { cell: usize },
    /// Cell volumes do not add up to the polytope's.
    VolumeMismatch { total: BigInt, expected: BigInt },
    /// Two cells intersect in something other than a common face.
    CellsOverlap { first: usize, second: usize },
}

impl fmt::Display for ComplexDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexDefect::AmbientDimMismatch { expected, got } => {
                write!(f, "pool dimension {got} does not match the polytope's {expected}")
            }
            ComplexDefect::VertexOutside { vertex } => {
                write!(f, "pool vertex {vertex} lies outside the polytope")
            }
            ComplexDefect::WrongCellSize { cell } => {
                write!(f, "cell {cell} is not a full-dimensional simplex")
            }
            ComplexDefect::DegenerateCell { cell } => {
                write!(f, "cell {cell} is affinely degenerate")
            }
            ComplexDefect::VolumeMismatch { total, expected } => {
                write!(f, "cell volumes sum to {total}, the polytope has {expected}")
            }
            ComplexDefect::CellsOverlap { first, second } => {
                write!(f, "cells {first} and {second} do not meet in a common face")
            }
        }
    }
}

/// Finds the first reason `t` is not a triangulation of `p`: a cell that
/// is not a full-dimensional simplex, a vertex outside `p`, mismatched
/// volume totals, or a pair of cells not meeting face to face.
pub fn find_complex_defect(t: &TriangulationComplex, p: &LatticePolytope) -> Option<ComplexDefect> {
    let dim = p.dim();
    if t.ambient_dim() != dim {
        return Some(ComplexDefect::AmbientDimMismatch {
            expected: dim,
            got: t.ambient_dim(),
        });
    }
    for (i, v) in t.vertex_pool().iter().enumerate() {
        if !p.contains(v) {
            return Some(ComplexDefect::VertexOutside { vertex: i });
        }
    }
    let mut total = BigInt::zero();
    for (ci, cell) in t.maximal_cells().iter().enumerate() {
        if cell.len() != dim + 1 {
            return Some(ComplexDefect::WrongCellSize { cell: ci });
        }
        let volume = simplex_normalized_volume(t.vertex_pool(), cell);
        if !volume.is_positive() {
            return Some(ComplexDefect::DegenerateCell { cell: ci });
        }
        total += volume;
    }
    let expected = p.normalized_volume();
    if total != expected {
        return Some(ComplexDefect::VolumeMismatch { total, expected });
    }
    let cells = t.maximal_cells();
    for i in 0..cells.len() {
        for j in i + 1..cells.len() {
            let a = t.cell_points(i);
            let b = t.cell_points(j);
            if !simplices_meet_face_to_face(&a, &b) {
                return Some(ComplexDefect::CellsOverlap { first: i, second: j });
            }
        }
    }
    None
}

/// Whether `t` is a triangulation of `p`: full-dimensional simplex cells
/// with vertices in `p`, meeting pairwise in common faces, with normalized
/// volumes summing to the normalized volume of `p`.
///
/// Together those facts force the cells to cover `p` exactly, so a `true`
/// answer is a complete certificate. [`find_complex_defect`] names the
/// first failing check when the answer is `false`.
pub fn verify_complex(t: &TriangulationComplex, p: &LatticePolytope) -> bool {
    find_complex_defect(t, p).is_none()
}

/// Whether two simplices intersect exactly in the face of each spanned by
/// their shared vertices (possibly the empty face).
///
/// Any vertex subset of a simplex spans a face, so the test reduces to: no
/// point of the intersection puts positive barycentric weight on a
/// non-shared vertex of either simplex.
pub(crate) fn simplices_meet_face_to_face(a: &[IntPoint], b: &[IntPoint]) -> bool {
    let shared: BTreeSet<&IntPoint> = a
        .iter()
        .filter(|p| b.contains(p))
        .collect();
    intersection_supported_on(a, b, &shared) && intersection_supported_on(b, a, &shared)
}

/// Decides whether every point of `conv(simplex) ∩ conv(other)` has zero
/// barycentric weight on the simplex vertices outside `allowed`, by
/// maximizing the total weight of those vertices over the intersection.
///
/// An empty intersection passes vacuously.
pub(crate) fn intersection_supported_on(
    simplex: &[IntPoint],
    other: &[IntPoint],
    allowed: &BTreeSet<&IntPoint>,
) -> bool {
    let dim = simplex[0].dim();
    let nl = simplex.len();
    let nm = other.len();
    let mut lp = LinearProgram::new(nl + nm);
    for v in 0..nl + nm {
        lp.require_nonnegative(v);
    }
    // Same ambient point from both sides, coordinate by coordinate.
    for coord in 0..dim {
        let mut row = Vec::with_capacity(nl + nm);
        for p in simplex {
            row.push(BigRational::from_integer(p.coords()[coord].clone()));
        }
        for p in other {
            row.push(BigRational::from_integer(-p.coords()[coord].clone()));
        }
        lp.add_eq(row, BigRational::zero());
    }
    let mut convex_l = vec![BigRational::zero(); nl + nm];
    for c in convex_l.iter_mut().take(nl) {
        *c = BigRational::one();
    }
    lp.add_eq(convex_l, BigRational::one());
    let mut convex_m = vec![BigRational::zero(); nl + nm];
    for c in convex_m.iter_mut().skip(nl) {
        *c = BigRational::one();
    }
    lp.add_eq(convex_m, BigRational::one());

    let mut objective = vec![BigRational::zero(); nl + nm];
    for (i, p) in simplex.iter().enumerate() {
        if !allowed.contains(p) {
            objective[i] = BigRational::one();
        }
    }
    lp.set_objective(objective);
    match lp.solve() {
        LpOutcome::Optimal { value, .. } => value.is_zero(),
        LpOutcome::Infeasible { .. } => true,
        LpOutcome::Unbounded { .. } => {
            unreachable!("objective bounded by a convexity constraint")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hull::convex_hull;

    fn pts(coords: &[&[i64]]) -> Vec<IntPoint> {
        coords.iter().map(|c| IntPoint::from_i64(c)).collect()
    }

    #[test]
    fn test_new_canonicalizes_pool_order_and_cell_order() {
        let pool = pts(&[&[1, 1], &[0, 0], &[1, 0], &[0, 1]]);
        let t = TriangulationComplex::new(pool, vec![vec![3, 2, 0], vec![1, 3, 2]]).unwrap();
        assert_eq!(
            t.vertex_pool(),
            pts(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]).as_slice()
        );
        assert_eq!(t.maximal_cells(), &[vec![0, 1, 2], vec![1, 2, 3]]);
        let again =
            TriangulationComplex::from_cells(&[t.cell_points(1), t.cell_points(0)]).unwrap();
        assert_eq!(t, again);
    }

    #[test]
    fn test_new_rejects_contained_and_degenerate_cells() {
        let pool = pts(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert!(matches!(
            TriangulationComplex::new(pool.clone(), vec![vec![0, 1, 2], vec![0, 1]]),
            Err(Error::Malformed { .. })
        ));
        assert!(matches!(
            TriangulationComplex::new(pool.clone(), vec![vec![0, 0, 1]]),
            Err(Error::Malformed { .. })
        ));
        assert!(matches!(
            TriangulationComplex::new(pool, vec![vec![0, 3]]),
            Err(Error::Malformed { .. })
        ));
        assert!(matches!(
            TriangulationComplex::new(vec![], vec![]),
            Err(Error::EmptyInput)
        ));
    }

    #[test]
    fn test_both_square_triangulations_verify_against_the_square() {
        let square = convex_hull(&pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]), 2).unwrap();
        for diagonal in [SquareDiagonal::Main, SquareDiagonal::Anti] {
            let t = TriangulationComplex::unit_square(diagonal);
            assert!(verify_complex(&t, &square));
            assert!(is_unimodular_triangulation(&t));
            assert!(is_flag(&t));
        }
    }

    #[test]
    fn test_overlapping_cells_fail_verification() {
        // Two triangles filling the square plus the other diagonal's
        // triangle: volumes exceed the square and faces cross.
        let pool = pts(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
        let square = convex_hull(&pool, 2).unwrap();
        let t = TriangulationComplex::new(
            pool,
            vec![vec![0, 1, 2], vec![1, 2, 3], vec![0, 1, 3]],
        )
        .unwrap();
        assert!(!verify_complex(&t, &square));
    }

    #[test]
    fn test_volume_matches_but_overlap_is_caught_by_the_face_test() {
        // Two triangles below the two diagonals of the square: volumes sum
        // to the square's, every vertex lies in the square, but the cells
        // overlap in a fat region, which only the face condition notices.
        let pool = pts(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
        let square = convex_hull(&pool, 2).unwrap();
        let t = TriangulationComplex::new(pool, vec![vec![0, 1, 2], vec![0, 2, 3]]).unwrap();
        assert!(!verify_complex(&t, &square));
    }

    #[test]
    fn test_unimodular_triangulation_rejects_a_volume_two_cell() {
        let pool = pts(&[&[0, 0], &[1, 0], &[1, 2]]);
        let t = TriangulationComplex::new(pool, vec![vec![0, 1, 2]]).unwrap();
        assert!(!is_unimodular_triangulation(&t));

        let pool = pts(&[&[0, 0], &[1, 0], &[0, 1]]);
        let t = TriangulationComplex::new(pool, vec![vec![0, 1, 2]]).unwrap();
        assert!(is_unimodular_triangulation(&t));
    }

    #[test]
    fn test_boundary_of_a_triangle_is_not_flag() {
        // Three edges forming a hollow triangle: the vertex set is a clique
        // of the edge graph but spans no cell.
        let pool = pts(&[&[0, 0], &[1, 0], &[0, 1]]);
        let t =
            TriangulationComplex::new(pool, vec![vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap();
        assert!(!is_flag(&t));
    }

    #[test]
    fn test_single_cell_and_point_complexes_are_flag() {
        let t = TriangulationComplex::point_complex();
        assert!(is_flag(&t));
        assert_eq!(t.ambient_dim(), 0);

        let pool = pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let t = TriangulationComplex::new(pool, vec![vec![0, 1, 2, 3]]).unwrap();
        assert!(is_flag(&t));
    }

    #[test]
    fn test_point_complex_verifies_against_the_point_polytope() {
        let point = convex_hull(&[IntPoint::origin(0)], 0).unwrap();
        let t = TriangulationComplex::point_complex();
        assert!(verify_complex(&t, &point));
        assert!(is_unimodular_triangulation(&t));
    }

    #[test]
    fn test_face_to_face_helper_sees_a_vertex_inside_an_edge() {
        // Triangles sharing the midpoint of an edge with a vertex: their
        // intersection is a genuine segment, not a common face.
        let a = pts(&[&[0, 0], &[2, 0], &[0, 1]]);
        let b = pts(&[&[1, 0], &[2, -1], &[3, 0]]);
        assert!(!simplices_meet_face_to_face(&a, &b));

        let c = pts(&[&[0, 0], &[2, 0], &[1, -1]]);
        // Shares the full edge [(0,0), (2,0)] as vertex sets.
        assert!(simplices_meet_face_to_face(&a, &c));

        let far = pts(&[&[5, 5], &[6, 5], &[5, 6]]);
        assert!(simplices_meet_face_to_face(&a, &far));
    }

    #[test]
    fn test_heights_length_is_checked() {
        let t = TriangulationComplex::unit_square(SquareDiagonal::Main);
        assert!(t.clone().with_heights(vec![BigRational::zero(); 3]).is_err());
        let lifted = t
            .with_heights(vec![BigRational::zero(); 4])
            .unwrap();
        assert_eq!(lifted.heights().unwrap().len(), 4);
    }
}

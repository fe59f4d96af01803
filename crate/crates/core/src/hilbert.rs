//! Hilbert bases of pointed full-dimensional rational cones.
//!
//! Candidates are collected from the simplicial subcones spanned by linearly
//! independent subsets of the extreme rays: the lattice points of each
//! half-open fundamental parallelepiped, enumerated exactly as the coset
//! representatives of the spanning sublattice (one candidate per unit of
//! determinant). Any irreducible cone point lies in one of those
//! parallelepipeds or is a primitive generator, so the candidate pool is
//! complete; a sieve in increasing order of a strictly positive grading
//! keeps exactly the irreducible elements.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hull::{convex_hull, Facet};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::matrix::{adjugate, rat_from_int_row, rat_rref, IntMat};
use crate::point::{check_dims, sort_dedup, IntPoint};

/// The unique minimal generating set of the cone's lattice points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertBasis {
    pub generators: Vec<IntPoint>,
}

/// A strictly positive integer grading on the cone: a functional with value
/// at least 1 on every generator. Exists exactly when the cone is pointed.
///
/// # Errors
///
/// [`Error::NonPointedCone`] when the generators span a line.
pub fn pointed_grading(generators: &[IntPoint], dim: usize) -> Result<Vec<BigInt>> {
    check_dims(generators, dim)?;
    let mut lp = LinearProgram::new(dim);
    for g in generators {
        if g.is_zero() {
            continue;
        }
        lp.add_int_constraint(g.coords(), Relation::Ge, BigInt::one());
    }
    match lp.solve() {
        LpOutcome::Optimal { point, .. } => {
            let mut lcm = BigInt::one();
            for c in &point {
                lcm = num_integer::lcm(lcm, c.denom().clone());
            }
            Ok(point
                .iter()
                .map(|c| c.numer() * (&lcm / c.denom()))
                .collect())
        }
        _ => Err(Error::NonPointedCone),
    }
}

/// Inward facet normals of the cone, read off as the offset-zero facets of
/// the hull of the generators together with the apex.
pub fn cone_facets(generators: &[IntPoint], dim: usize) -> Result<Vec<Facet>> {
    Ok(cone_hull(generators, dim)?
        .hrep()
        .facets
        .iter()
        .filter(|f| f.offset.is_zero())
        .cloned()
        .collect())
}

/// Hull of the primitivized generators together with the apex; its
/// offset-zero facets cut out the cone and its nonzero vertices are the
/// extreme rays.
fn cone_hull(generators: &[IntPoint], dim: usize) -> Result<crate::hull::LatticePolytope> {
    let mut points = vec![IntPoint::origin(dim)];
    points.extend(generators.iter().map(|g| g.primitive()));
    convex_hull(&points, dim)
}

/// Membership of a lattice point in the cone cut out by [`cone_facets`].
pub fn in_cone(facets: &[Facet], point: &IntPoint) -> bool {
    facets.iter().all(|f| !f.eval(point).is_negative())
}

/// A pointed full-dimensional rational cone with its derived data: primitive
/// generators, facet inequalities, extreme rays, and a strictly positive
/// grading. Built once, shared by the basis computation and membership
/// searches.
#[derive(Clone, Debug)]
pub struct PointedCone {
    dim: usize,
    generators: Vec<IntPoint>,
    facets: Vec<Facet>,
    extreme: Vec<IntPoint>,
    grading: Vec<BigInt>,
}

impl PointedCone {
    /// # Errors
    ///
    /// [`Error::NonPointedCone`] when the cone contains a line, and
    /// [`Error::NotFullDimensional`] when the generators do not span.
    pub fn new(generators: &[IntPoint], dim: usize) -> Result<Self> {
        check_dims(generators, dim)?;
        let gens: Vec<IntPoint> = sort_dedup(
            generators
                .iter()
                .filter(|g| !g.is_zero())
                .map(|g| g.primitive())
                .collect(),
        );
        if gens.is_empty() {
            return Err(Error::EmptyInput);
        }
        let rank = crate::matrix::rat_rank(&IntMat::from_points(&gens, dim));
        if rank < dim {
            return Err(Error::NotFullDimensional {
                spanned: rank,
                ambient: dim,
            });
        }
        let grading = pointed_grading(&gens, dim)?;
        let hull = cone_hull(&gens, dim)?;
        let facets: Vec<Facet> = hull
            .hrep()
            .facets
            .iter()
            .filter(|f| f.offset.is_zero())
            .cloned()
            .collect();
        let extreme: Vec<IntPoint> = hull
            .vertices()
            .iter()
            .filter(|v| !v.is_zero())
            .cloned()
            .collect();
        Ok(PointedCone {
            dim,
            generators: gens,
            facets,
            extreme,
            grading,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Primitive, deduplicated generators.
    pub fn generators(&self) -> &[IntPoint] {
        &self.generators
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// An integer functional with value >= 1 on every generator.
    pub fn grading(&self) -> &[BigInt] {
        &self.grading
    }

    pub fn contains(&self, point: &IntPoint) -> bool {
        in_cone(&self.facets, point)
    }

    /// The unique minimal generating set of the cone's lattice points.
    pub fn hilbert_basis(&self) -> HilbertBasis {
        // The extreme rays alone span the cone, so simplicial subcones over
        // them already cover it; interior generators only join the pool.
        let mut candidates: BTreeSet<IntPoint> = self.generators.iter().cloned().collect();
        for subset in independent_subsets(&self.extreme, self.dim) {
            for p in parallelepiped_points(&subset) {
                if !p.is_zero() {
                    candidates.insert(p);
                }
            }
        }

        // Sieve in increasing (grading, lex) order: a candidate is
        // irreducible exactly when no strictly lower accepted element stays
        // inside the cone after subtraction.
        let mut ordered: Vec<(BigInt, IntPoint)> = candidates
            .into_iter()
            .map(|p| (p.dot(&self.grading), p))
            .collect();
        ordered.sort();
        let mut basis: Vec<(BigInt, IntPoint)> = Vec::new();
        for (value, candidate) in ordered {
            let reducible = basis
                .iter()
                .take_while(|(v, _)| v < &value)
                .any(|(_, h)| self.contains(&candidate.sub(h)));
            if !reducible {
                basis.push((value, candidate));
            }
        }
        let mut generators: Vec<IntPoint> = basis.into_iter().map(|(_, p)| p).collect();
        generators.sort();
        HilbertBasis { generators }
    }
}

/// Hilbert basis of the pointed full-dimensional cone spanned by the
/// generators.
///
/// # Errors
///
/// [`Error::NonPointedCone`] when the cone contains a line, and
/// [`Error::NotFullDimensional`] when the generators do not span.
pub fn hilbert_basis(generators: &[IntPoint], dim: usize) -> Result<HilbertBasis> {
    Ok(PointedCone::new(generators, dim)?.hilbert_basis())
}

/// All linearly independent `dim`-subsets of the generators; the union of
/// their simplicial cones covers the whole cone.
fn independent_subsets(gens: &[IntPoint], dim: usize) -> Vec<Vec<IntPoint>> {
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::with_capacity(dim);
    fn rec(
        gens: &[IntPoint],
        dim: usize,
        start: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<IntPoint>>,
    ) {
        if stack.len() == dim {
            let rows: Vec<Vec<BigRational>> = stack
                .iter()
                .map(|&i| rat_from_int_row(gens[i].coords()))
                .collect();
            let mut work = rows;
            if rat_rref(&mut work).len() == dim {
                out.push(stack.iter().map(|&i| gens[i].clone()).collect());
            }
            return;
        }
        for i in start..gens.len() {
            stack.push(i);
            rec(gens, dim, i + 1, stack, out);
            stack.pop();
        }
    }
    rec(gens, dim, 0, &mut stack, &mut out);
    out
}

/// Lattice points of the half-open parallelepiped spanned by a linearly
/// independent family: points `sum t_i v_i` with `0 <= t_i < 1`.
///
/// Each residue class of `Z^dim` modulo the spanned sublattice meets the
/// parallelepiped exactly once, so the points are found by walking the
/// `|det|` coset representatives read off the Hermite form and folding each
/// into the box: `p = r - V * floor(V^{-1} r)`.
fn parallelepiped_points(basis: &[IntPoint]) -> Vec<IntPoint> {
    let dim = basis.len();
    debug_assert!(basis.iter().all(|v| v.dim() == dim));
    let mat = IntMat::new(
        (0..dim)
            .map(|j| (0..dim).map(|i| basis[i].coords()[j].clone()).collect())
            .collect(),
        dim,
    );
    let det = mat.determinant();
    debug_assert!(!det.is_zero());
    if det.abs() == BigInt::one() {
        return vec![IntPoint::origin(dim)];
    }
    let adj = adjugate(&mat);

    // Row-Hermite form of the transpose is a column form of the span: a
    // triangular basis whose diagonal yields box-shaped coset reps.
    let hermite = crate::matrix::hermite_normal_form(&IntMat::from_points(basis, dim));
    let hnf = &hermite.hnf;
    debug_assert_eq!(hermite.rank, dim);
    let diag: Vec<BigInt> = (0..dim).map(|i| hnf.rows[i][i].clone()).collect();

    let mut out = Vec::new();
    let mut rep = Vec::with_capacity(dim);
    walk_reps(&diag, 0, &mut rep, &mut |r: &[BigInt]| {
        let scaled = adj.mul_vec(r);
        let fold: Vec<BigInt> = scaled
            .iter()
            .map(|w| BigRational::new(w.clone(), det.clone()).floor().to_integer())
            .collect();
        let point: Vec<BigInt> = r
            .iter()
            .zip(mat.mul_vec(&fold))
            .map(|(ri, vi)| ri - vi)
            .collect();
        out.push(IntPoint::new(point));
    });
    sort_dedup(out)
}

fn walk_reps(
    diag: &[BigInt],
    depth: usize,
    rep: &mut Vec<BigInt>,
    visit: &mut impl FnMut(&[BigInt]),
) {
    if depth == diag.len() {
        visit(rep);
        return;
    }
    let mut v = BigInt::zero();
    while v < diag[depth] {
        rep.push(v.clone());
        walk_reps(diag, depth + 1, rep, visit);
        rep.pop();
        v += 1;
    }
}

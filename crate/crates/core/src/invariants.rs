//! Configuration and polytope invariants with checkable certificates.
//!
//! Very-ampleness is certified per vertex: the Hilbert basis of the corner
//! cone plus, for each basis element, an explicit decomposition into
//! configuration differences (or its absence, which refutes the property).
//! Integral closedness combines a gap-free monoid with the lattice being a
//! direct summand; smoothness and unimodularity are exact determinant
//! conditions.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::config::PointConfig;
use crate::error::{Error, Result};
use crate::hilbert::PointedCone;
use crate::hull::{convex_hull, LatticePolytope};
use crate::matrix::{rat_rank, smith_divisors, IntMat};
use crate::monoid;
use crate::point::{check_dims, IntPoint};

/// A multiset of monoid generators summing to a target: pairs of a
/// generator and its multiplicity.
pub type GeneratorCombination = Vec<(IntPoint, u64)>;

/// Corner-cone evidence at one vertex: the Hilbert basis and, aligned with
/// it, a decomposition of each basis element over the shifted configuration
/// (`None` marks an element outside the monoid, refuting very-ampleness).
#[derive(Clone, Debug)]
pub struct VertexCertificate {
    pub vertex: IntPoint,
    pub hilbert_basis: Vec<IntPoint>,
    pub decompositions: Vec<Option<GeneratorCombination>>,
}

impl VertexCertificate {
    pub fn holds(&self) -> bool {
        self.decompositions.iter().all(|d| d.is_some())
    }
}

/// Per-vertex certificates for the very-ampleness verdict.
#[derive(Clone, Debug)]
pub struct VeryAmpleCertificate {
    pub vertices: Vec<VertexCertificate>,
}

/// Very-ampleness of a normalized configuration: at every vertex of the
/// hull, the corner cone's Hilbert basis must lie in the monoid generated by
/// the shifted configuration.
///
/// # Errors
///
/// [`Error::NotNormalized`] unless the configuration spans the full ambient
/// lattice; hull errors propagate.
pub fn is_very_ample(config: &PointConfig) -> Result<(bool, VeryAmpleCertificate)> {
    if !config.is_normalized() {
        return Err(Error::NotNormalized);
    }
    let dim = config.dim();
    let hull = convex_hull(config.points(), dim)?;
    let mut vertices = Vec::new();
    let mut verdict = true;
    for v in hull.vertices() {
        let shifted: Vec<IntPoint> = config
            .points()
            .iter()
            .filter(|a| *a != v)
            .map(|a| a.sub(v))
            .collect();
        let cone = PointedCone::new(&shifted, dim)?;
        let basis = cone.hilbert_basis();
        let decompositions: Vec<Option<GeneratorCombination>> = basis
            .generators
            .iter()
            .map(|h| decompose_in_monoid(h, &shifted, &cone))
            .collect();
        verdict &= decompositions.iter().all(|d| d.is_some());
        vertices.push(VertexCertificate {
            vertex: v.clone(),
            hilbert_basis: basis.generators,
            decompositions,
        });
    }
    Ok((verdict, VeryAmpleCertificate { vertices }))
}

/// Expresses `target` as a nonnegative integral combination of `generators`
/// if possible. Depth-first over nondecreasing generator indices with
/// memoized dead ends; the cone's grading bounds the depth, so the search
/// always terminates.
pub fn decompose_in_monoid(
    target: &IntPoint,
    generators: &[IntPoint],
    cone: &PointedCone,
) -> Option<GeneratorCombination> {
    let gens: Vec<&IntPoint> = {
        let mut seen = BTreeSet::new();
        generators
            .iter()
            .filter(|g| !g.is_zero() && seen.insert(*g))
            .collect()
    };
    let mut failed: BTreeSet<(IntPoint, usize)> = BTreeSet::new();
    let mut counts = vec![0u64; gens.len()];
    if !search(target, &gens, cone, 0, &mut counts, &mut failed) {
        return None;
    }
    Some(
        gens.iter()
            .zip(counts)
            .filter(|(_, c)| *c > 0)
            .map(|(g, c)| ((*g).clone(), c))
            .collect(),
    )
}

fn search(
    residual: &IntPoint,
    gens: &[&IntPoint],
    cone: &PointedCone,
    from: usize,
    counts: &mut Vec<u64>,
    failed: &mut BTreeSet<(IntPoint, usize)>,
) -> bool {
    if residual.is_zero() {
        return true;
    }
    if from == gens.len() || failed.contains(&(residual.clone(), from)) {
        return false;
    }
    // Use the current generator once more, or move past it for good.
    let next = residual.sub(gens[from]);
    if cone.contains(&next) {
        counts[from] += 1;
        if search(&next, gens, cone, from, counts, failed) {
            return true;
        }
        counts[from] -= 1;
    }
    if search(residual, gens, cone, from + 1, counts, failed) {
        return true;
    }
    failed.insert((residual.clone(), from));
    false
}

/// Integral closedness: a gap-free monoid over a lattice that is a direct
/// summand. Non-normalized configurations are assessed in their own affine
/// lattice chart. Returns the verdict and the first gapped height, if any.
pub fn is_integrally_closed(config: &PointConfig) -> Result<(bool, Option<usize>)> {
    let (chart_config, _) = config.normalize();
    let report = monoid::gap_vector(&chart_config)?;
    let summand = config.span().is_direct_summand();
    let gap_free = report.gamma == 0 && !report.capped;
    let first_failure = report.witnesses.first().map(|w| w.height);
    Ok((gap_free && summand, first_failure))
}

/// Smoothness: at every vertex the primitive edge directions number exactly
/// the dimension and form a lattice basis.
pub fn is_smooth(poly: &LatticePolytope) -> bool {
    let dim = poly.dim();
    if dim == 0 {
        return true;
    }
    let edges = poly.edges();
    for (i, v) in poly.vertices().iter().enumerate() {
        let dirs: Vec<IntPoint> = edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == i {
                    Some(poly.vertices()[b].sub(v).primitive())
                } else if b == i {
                    Some(poly.vertices()[a].sub(v).primitive())
                } else {
                    None
                }
            })
            .collect();
        if dirs.len() != dim {
            return false;
        }
        if IntMat::from_points(&dirs, dim).determinant().abs() != BigInt::one() {
            return false;
        }
    }
    true
}

/// Whether the simplex spanned by the vertices is unimodular: its edge
/// vectors at the first vertex extend to a basis of the ambient lattice.
///
/// # Errors
///
/// Affinely dependent input is rejected.
pub fn is_unimodular_simplex(vertices: &[IntPoint]) -> Result<bool> {
    let first = vertices.first().ok_or(Error::EmptyInput)?;
    let dim = first.dim();
    check_dims(vertices, dim)?;
    let diffs: Vec<IntPoint> = vertices[1..].iter().map(|v| v.sub(first)).collect();
    if diffs.is_empty() {
        return Ok(true);
    }
    let mat = IntMat::from_points(&diffs, dim);
    if rat_rank(&mat) < diffs.len() {
        return Err(Error::malformed("simplex vertices are affinely dependent"));
    }
    Ok(smith_divisors(&mat).iter().all(|d| d == &BigInt::one()))
}

/// The rarified configuration: the union of `(c-1)*v + A` over the hull
/// vertices `v`. Its hull is the dilation `c * conv(A)`.
///
/// # Errors
///
/// `c` must be at least 1; hull errors propagate.
pub fn rarify(config: &PointConfig, c: u64) -> Result<PointConfig> {
    if c == 0 {
        return Err(Error::malformed("rarification factor must be at least 1"));
    }
    if c == 1 {
        return Ok(config.clone());
    }
    let hull = convex_hull(config.points(), config.dim())?;
    let shift = BigInt::from(c - 1);
    let mut points = Vec::with_capacity(hull.vertices().len() * config.len());
    for v in hull.vertices() {
        let moved = v.scale(&shift);
        for a in config.points() {
            points.push(moved.add(a));
        }
    }
    let rarified = PointConfig::new(config.dim(), points)?;
    debug_assert_eq!(
        convex_hull(rarified.points(), rarified.dim())?.hrep(),
        &hull.hrep().dilate(&BigInt::from(c)),
        "rarified hull must be the dilated hull"
    );
    Ok(rarified)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(coords: &[&[i64]]) -> PointConfig {
        let points: Vec<IntPoint> = coords.iter().map(|c| IntPoint::from_i64(c)).collect();
        PointConfig::new(coords[0].len(), points).unwrap()
    }

    fn twisted_prism(m: i64) -> PointConfig {
        config(&[
            &[0, 0, 0],
            &[0, 0, 1],
            &[1, 0, 0],
            &[1, 0, 1],
            &[0, 1, 0],
            &[0, 1, 1],
            &[1, 1, m],
            &[1, 1, m + 1],
        ])
    }

    fn unit_cube() -> PointConfig {
        let coords: Vec<Vec<i64>> = (0..8)
            .map(|k| vec![k & 1, (k >> 1) & 1, (k >> 2) & 1])
            .collect();
        let views: Vec<&[i64]> = coords.iter().map(|c| c.as_slice()).collect();
        config(&views)
    }

    #[test]
    fn test_twisted_prism_is_very_ample_with_full_certificate() {
        let (ok, cert) = is_very_ample(&twisted_prism(5)).unwrap();
        assert!(ok);
        assert_eq!(cert.vertices.len(), 8);
        for vc in &cert.vertices {
            assert!(vc.holds());
            // Replay every decomposition exactly.
            for (h, d) in vc.hilbert_basis.iter().zip(&vc.decompositions) {
                let combo = d.as_ref().unwrap();
                let mut sum = IntPoint::origin(3);
                for (g, c) in combo {
                    sum = sum.add(&g.scale(&BigInt::from(*c)));
                }
                assert_eq!(&sum, h);
            }
        }
    }

    #[test]
    fn test_unit_cube_is_very_ample_and_integrally_closed() {
        let (ok, _) = is_very_ample(&unit_cube()).unwrap();
        assert!(ok);
        let (closed, failure) = is_integrally_closed(&unit_cube()).unwrap();
        assert!(closed);
        assert_eq!(failure, None);
    }

    #[test]
    fn test_twisted_prism_is_not_integrally_closed_first_failure_at_two() {
        let (closed, failure) = is_integrally_closed(&twisted_prism(5)).unwrap();
        assert!(!closed);
        assert_eq!(failure, Some(2));
    }

    #[test]
    fn test_doubled_square_fails_the_summand_check() {
        // Gap-free in its own chart, but the spanned lattice has index 4.
        let doubled = config(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2]]);
        let (closed, failure) = is_integrally_closed(&doubled).unwrap();
        assert!(!closed);
        assert_eq!(failure, None);
    }

    #[test]
    fn test_cube_is_smooth_and_twisted_prism_is_not() {
        let cube = convex_hull(unit_cube().points(), 3).unwrap();
        assert!(is_smooth(&cube));
        let prism = convex_hull(twisted_prism(5).points(), 3).unwrap();
        assert!(!is_smooth(&prism));
    }

    #[test]
    fn test_unimodular_simplex_checks() {
        let standard = [
            IntPoint::from_i64(&[0, 0]),
            IntPoint::from_i64(&[1, 0]),
            IntPoint::from_i64(&[0, 1]),
        ];
        assert!(is_unimodular_simplex(&standard).unwrap());
        let skewed = [
            IntPoint::from_i64(&[0, 0]),
            IntPoint::from_i64(&[2, 1]),
            IntPoint::from_i64(&[1, 2]),
        ];
        assert!(!is_unimodular_simplex(&skewed).unwrap());
        let edge = [IntPoint::from_i64(&[3, 4]), IntPoint::from_i64(&[5, 8])];
        assert!(!is_unimodular_simplex(&edge).unwrap());
        let primitive_edge = [IntPoint::from_i64(&[3, 4]), IntPoint::from_i64(&[4, 5])];
        assert!(is_unimodular_simplex(&primitive_edge).unwrap());
        let dependent = [
            IntPoint::from_i64(&[0, 0]),
            IntPoint::from_i64(&[1, 1]),
            IntPoint::from_i64(&[2, 2]),
        ];
        assert!(is_unimodular_simplex(&dependent).is_err());
    }

    #[test]
    fn test_rarify_square() {
        let square = config(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let identity = rarify(&square, 1).unwrap();
        assert_eq!(identity.points(), square.points());
        let doubled = rarify(&square, 2).unwrap();
        // v + A over the four vertices covers every lattice point of the
        // doubled square exactly once.
        assert_eq!(doubled.len(), 9);
        assert!(rarify(&square, 0).is_err());
    }

    #[test]
    fn test_rarified_square_stays_very_ample() {
        let square = config(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let tripled = rarify(&square, 3).unwrap();
        let (ok, _) = is_very_ample(&tripled).unwrap();
        assert!(ok);
    }
}

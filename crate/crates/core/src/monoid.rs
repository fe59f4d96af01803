//! Height-graded monoid slices and normality gaps.
//!
//! A point configuration `A` in `Z^d` generates a monoid from the lifted
//! points `(a, 1)`; the slice at height `k` is the set of degree-`k` sums.
//! Its normalization replaces each slice by every lattice point of the
//! dilation `k * conv(A)`. The gap vector counts the difference per height,
//! and the gap report certifies where the counts stabilize: once a height at
//! least `dim - 1` shows no gap, no later height can.

use num_bigint::BigInt;
use std::collections::BTreeSet;

use crate::config::PointConfig;
use crate::enumerate::dilated_lattice_points;
use crate::error::{Error, Result};
use crate::hull::{convex_hull, LatticePolytope};
use crate::point::IntPoint;

/// Which side of the normalization a slice table describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SliceKind {
    Generated,
    Normalized,
}

/// Sorted point sets per height, `height_slices[k]` being the slice at
/// height `k` (points keep only the spatial coordinates; the height is the
/// index).
#[derive(Clone, Debug)]
pub struct GradedMonoidSlices {
    pub kind: SliceKind,
    pub height_slices: Vec<Vec<IntPoint>>,
}

/// Limits for [`gap_vector_with`]; the hard cap guards against inputs whose
/// gaps never stop.
#[derive(Clone, Debug)]
pub struct GapOptions {
    pub max_height: usize,
}

impl Default for GapOptions {
    fn default() -> Self {
        GapOptions { max_height: 64 }
    }
}

/// The lexicographically smallest point missing from the generated slice at
/// one gapped height.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapWitness {
    pub height: usize,
    pub point: IntPoint,
}

/// Gap profile of a configuration's monoid.
///
/// `gap_vector[k-1]` is the number of gaps at height `k`, recorded exactly up
/// to the last positive entry (`gamma`). `stop_height` is the height at which
/// the stabilization rule fired; when the hard cap was hit first, it is
/// `None` and `capped` is set, meaning `gamma` is only a lower bound.
#[derive(Clone, Debug)]
pub struct GapReport {
    pub gap_vector: Vec<u64>,
    pub gamma: usize,
    pub witnesses: Vec<GapWitness>,
    pub stop_height: Option<usize>,
    pub capped: bool,
}

/// Slices of the generated monoid for heights `0..=k_max`, by iterated
/// Minkowski sums with the configuration.
pub fn generated_slices(config: &PointConfig, k_max: usize) -> GradedMonoidSlices {
    let mut height_slices = Vec::with_capacity(k_max + 1);
    height_slices.push(vec![IntPoint::origin(config.dim())]);
    for k in 1..=k_max {
        let next = minkowski_step(&height_slices[k - 1], config.points());
        height_slices.push(next);
    }
    GradedMonoidSlices {
        kind: SliceKind::Generated,
        height_slices,
    }
}

/// Slices of the normalized monoid: all lattice points of `k * conv(A)`.
///
/// # Errors
///
/// The configuration must be normalized so that lattice points of the
/// dilations are exactly the normalization's slices.
pub fn normalized_slices(config: &PointConfig, k_max: usize) -> Result<GradedMonoidSlices> {
    let hull = normalized_hull(config)?;
    let mut height_slices = Vec::with_capacity(k_max + 1);
    height_slices.push(vec![IntPoint::origin(config.dim())]);
    for k in 1..=k_max {
        height_slices.push(dilated_lattice_points(&hull, &BigInt::from(k)));
    }
    Ok(GradedMonoidSlices {
        kind: SliceKind::Normalized,
        height_slices,
    })
}

/// Gap profile with default limits.
pub fn gap_vector(config: &PointConfig) -> Result<GapReport> {
    gap_vector_with(config, &GapOptions::default())
}

/// Walks the heights upward, comparing generated and normalized slices, and
/// stops at the first gap-free height at least `dim - 1`.
pub fn gap_vector_with(config: &PointConfig, options: &GapOptions) -> Result<GapReport> {
    let hull = normalized_hull(config)?;
    let dim = config.dim();
    let stabilization_floor = std::cmp::max(1, dim.saturating_sub(1));

    let mut gaps: Vec<u64> = Vec::new();
    let mut witnesses = Vec::new();
    let mut generated = vec![IntPoint::origin(dim)];
    let mut stop_height = None;

    for k in 1..=options.max_height {
        generated = minkowski_step(&generated, config.points());
        let normalized = dilated_lattice_points(&hull, &BigInt::from(k));
        let missing = sorted_difference(&normalized, &generated);
        debug_assert_eq!(
            normalized.len() - missing.len(),
            generated.len(),
            "generated slices embed into normalized slices"
        );
        gaps.push(missing.len() as u64);
        if let Some(first) = missing.first() {
            witnesses.push(GapWitness {
                height: k,
                point: first.clone(),
            });
        } else if k >= stabilization_floor {
            stop_height = Some(k);
            break;
        }
    }

    let gamma = gaps.iter().rposition(|&g| g > 0).map_or(0, |i| i + 1);
    gaps.truncate(gamma);
    Ok(GapReport {
        gap_vector: gaps,
        gamma,
        witnesses,
        stop_height,
        capped: stop_height.is_none(),
    })
}

fn normalized_hull(config: &PointConfig) -> Result<LatticePolytope> {
    if !config.is_normalized() {
        return Err(Error::NotNormalized);
    }
    convex_hull(config.points(), config.dim())
}

fn minkowski_step(slice: &[IntPoint], points: &[IntPoint]) -> Vec<IntPoint> {
    let mut sums = BTreeSet::new();
    for s in slice {
        for p in points {
            sums.insert(s.add(p));
        }
    }
    sums.into_iter().collect()
}

/// Elements of sorted `a` missing from sorted `b`, by a linear merge.
fn sorted_difference(a: &[IntPoint], b: &[IntPoint]) -> Vec<IntPoint> {
    let mut out = Vec::new();
    let mut i = 0;
    let mut j = 0;
    while i < a.len() {
        if j >= b.len() || a[i] < b[j] {
            out.push(a[i].clone());
            i += 1;
        } else if a[i] == b[j] {
            i += 1;
            j += 1;
        } else {
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(coords: &[&[i64]]) -> PointConfig {
        let points: Vec<IntPoint> = coords.iter().map(|c| IntPoint::from_i64(c)).collect();
        PointConfig::new(coords[0].len(), points).unwrap()
    }

    fn unit_square() -> PointConfig {
        config(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])
    }

    /// Twisted prism over the unit square with top shift `m`.
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

    #[test]
    fn test_unit_square_slices_are_full() {
        let slices = generated_slices(&unit_square(), 3);
        assert_eq!(slices.height_slices[0].len(), 1);
        assert_eq!(slices.height_slices[1].len(), 4);
        assert_eq!(slices.height_slices[2].len(), 9);
        assert_eq!(slices.height_slices[3].len(), 16);
        let normalized = normalized_slices(&unit_square(), 3).unwrap();
        assert_eq!(slices.height_slices, normalized.height_slices);
    }

    #[test]
    fn test_twisted_prism_slice_counts() {
        let cfg = twisted_prism(5);
        let gen = generated_slices(&cfg, 3);
        assert_eq!(gen.height_slices[2].len(), 30);
        assert_eq!(gen.height_slices[3].len(), 80);
        let norm = normalized_slices(&cfg, 3).unwrap();
        assert_eq!(norm.height_slices[2].len(), 32);
        assert_eq!(norm.height_slices[3].len(), 84);
    }

    #[test]
    fn test_gap_report_of_twisted_prism() {
        let report = gap_vector(&twisted_prism(5)).unwrap();
        assert_eq!(report.gap_vector, vec![0, 2, 4]);
        assert_eq!(report.gamma, 3);
        assert_eq!(report.stop_height, Some(4));
        assert!(!report.capped);
        assert_eq!(report.witnesses.len(), 2);
        for witness in &report.witnesses {
            let norm = normalized_slices(&twisted_prism(5), witness.height).unwrap();
            let gen = generated_slices(&twisted_prism(5), witness.height);
            assert!(norm.height_slices[witness.height].contains(&witness.point));
            assert!(!gen.height_slices[witness.height].contains(&witness.point));
        }
    }

    #[test]
    fn test_gap_report_of_square_is_empty() {
        let report = gap_vector(&unit_square()).unwrap();
        assert_eq!(report.gap_vector, Vec::<u64>::new());
        assert_eq!(report.gamma, 0);
        assert_eq!(report.stop_height, Some(1));
        assert!(report.witnesses.is_empty());
    }

    #[test]
    fn test_normalized_slices_require_normalized_config() {
        let doubled = config(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2]]);
        assert!(matches!(
            normalized_slices(&doubled, 2),
            Err(Error::NotNormalized)
        ));
    }

    #[test]
    fn test_cap_reported_when_stabilization_never_fires() {
        // With a cap below the stabilization height the report must say so.
        let report =
            gap_vector_with(&twisted_prism(5), &GapOptions { max_height: 2 }).unwrap();
        assert!(report.capped);
        assert_eq!(report.stop_height, None);
        assert_eq!(report.gamma, 2);
        assert_eq!(report.gap_vector, vec![0, 2]);
    }
}

//! Sweep triangulations of fibered polytopes.
//!
//! The construction lifts a unimodular triangulation of the base into the
//! total polytope along its fiber segments: start from the copy of the
//! base triangulation at the fiber minima, then visit the remaining
//! lattice points fiber by fiber in ascending height, coning each visited
//! point over the part of the current upper boundary it sees — one new
//! full-dimensional simplex per base cell around the point's shadow. Face
//! compatibility makes the fiber minima affine over each base cell, so the
//! starting copy is simplicial; unimodularity is preserved because a lift
//! appends one integer row to a unimodular system. The sweep touches every
//! lattice point exactly once, so the result is a triangulation using all
//! lattice points of the polytope, and its regularity is decided (not
//! assumed) afterwards.
//!
//! All of this happens in sweep coordinates where the fibration is the
//! drop-the-last-coordinate projection; a unimodular change of coordinates
//! built from a Hermite form of the fibration puts any valid input into
//! that shape and is undone at the end.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::affine::AffineMap;
use crate::enumerate::lattice_points;
use crate::error::{Error, Result};
use crate::families::LiftStage;
use crate::hull::LatticePolytope;
use crate::matrix::{adjugate, hermite_normal_form, primitive_kernel_vector, IntMat};
use crate::point::IntPoint;

use super::complex::{is_unimodular_triangulation, TriangulationComplex};
use super::fibered::{face_compatibility, fibration_over_complex};
use super::regular::{is_regular, RegularityOutcome};

/// The order in which the sweep visits lattice points above the bottom
/// copy of the base triangulation.
#[derive(Clone, Debug, Default)]
pub enum EnumerationOrder {
    /// Fiber by fiber in base-lexicographic order, each fiber bottom-up.
    #[default]
    BaseThenHeight,
    /// Level by level: all points at each height before the next one.
    HeightThenBase,
    /// An explicit list of the lattice points strictly above the fiber
    /// minima, in original coordinates. It must contain each such point
    /// exactly once and visit every fiber bottom-up.
    Custom(Vec<IntPoint>),
}

/// Options for [`build_pi_triangulation_with`].
#[derive(Clone, Debug, Default)]
pub struct PiOptions {
    pub order: EnumerationOrder,
}

/// A unimodular affine change of coordinates turning a fibration into the
/// projection that drops the last coordinate, with its inverse.
struct SweepCoordinates {
    forward: IntMat,
    inverse: IntMat,
    shift: Vec<BigInt>,
}

impl SweepCoordinates {
    fn apply(&self, p: &IntPoint) -> IntPoint {
        let mut out = mat_vec(&self.forward, p.coords());
        for (o, s) in out.iter_mut().zip(&self.shift) {
            *o += s;
        }
        IntPoint::new(out)
    }

    fn unapply(&self, p: &IntPoint) -> IntPoint {
        let moved: Vec<BigInt> = p
            .coords()
            .iter()
            .zip(&self.shift)
            .map(|(c, s)| c - s)
            .collect();
        IntPoint::new(mat_vec(&self.inverse, &moved))
    }
}

fn mat_vec(m: &IntMat, v: &[BigInt]) -> Vec<BigInt> {
    m.rows
        .iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn transpose(m: &IntMat) -> IntMat {
    let rows = (0..m.cols)
        .map(|j| m.rows.iter().map(|row| row[j].clone()).collect())
        .collect();
    IntMat::new(rows, m.nrows())
}

/// Builds the coordinate change for a fibration `map` from dimension
/// `d + 1` onto dimension `d`: the first `d` output coordinates reproduce
/// the map, the last one is a height increasing along the fibers.
///
/// A Hermite form of the transposed linear part yields a unimodular `V`
/// with `M V = [I | 0]`; the rows of `V^{-1}` are then the map's rows plus
/// one integer height row, normalized to evaluate to `+1` on the
/// primitive fiber direction.
fn sweep_coordinates(map: &AffineMap) -> Result<SweepCoordinates> {
    let d = map.codomain_dim();
    let linear = map.matrix();
    let hf = hermite_normal_form(&transpose(linear));
    let onto = hf.rank == d
        && (0..d).all(|i| {
            (0..d).all(|j| {
                let expected = if i == j { BigInt::one() } else { BigInt::zero() };
                hf.hnf.rows[i][j] == expected
            })
        });
    if !onto {
        return Err(Error::FibrationInvalid {
            reason: "the projection does not map the point lattice onto the base lattice"
                .to_string(),
        });
    }
    let v = transpose(&hf.transform);
    let det = v.determinant();
    debug_assert!(det.clone().abs() == BigInt::one());
    let mut v_inverse = adjugate(&v);
    if det.is_negative() {
        for row in &mut v_inverse.rows {
            for entry in row.iter_mut() {
                *entry = -std::mem::take(entry);
            }
        }
    }

    let direction = primitive_kernel_vector(linear).ok_or_else(|| {
        Error::construction("the fibration's linear part has no one-dimensional kernel")
    })?;
    let height_on_fiber: BigInt = v_inverse.rows[d]
        .iter()
        .zip(direction.coords())
        .map(|(a, b)| a * b)
        .sum();
    debug_assert!(height_on_fiber.clone().abs() == BigInt::one());
    let mut forward = v_inverse;
    let mut inverse = v;
    if height_on_fiber.is_negative() {
        for entry in forward.rows[d].iter_mut() {
            *entry = -std::mem::take(entry);
        }
        for row in &mut inverse.rows {
            row[d] = -std::mem::take(&mut row[d]);
        }
    }
    debug_assert_eq!(&forward.rows[..d], &linear.rows[..]);

    let mut shift = map.offset().to_vec();
    shift.push(BigInt::zero());
    Ok(SweepCoordinates {
        forward,
        inverse,
        shift,
    })
}

/// Builds the sweep triangulation with the default bottom-up order.
///
/// See [`build_pi_triangulation_with`].
pub fn build_pi_triangulation(
    map: &AffineMap,
    total: &LatticePolytope,
    delta: &TriangulationComplex,
) -> Result<TriangulationComplex> {
    build_pi_triangulation_with(map, total, delta, &PiOptions::default())
}

/// Builds a triangulation of `total` by sweeping the fibers of `map` over
/// the base triangulation `delta`, visiting lattice points in the order
/// requested by `options`.
///
/// The result uses every lattice point of `total` as a vertex. When the
/// regularity program succeeds, the certified heights are attached to the
/// returned complex; when it fails the complex is returned without
/// heights, and [`is_regular`] can be replayed for the refutation.
///
/// # Errors
///
/// [`Error::DimensionMismatch`] for incompatible dimensions,
/// [`Error::ConstructionFailure`] when `delta` is not a triangulation of
/// its hull or the sweep's bookkeeping is violated,
/// [`Error::FibrationInvalid`] when the fibration conditions fail,
/// [`Error::FaceCompatibility`] when some facet shadow is not a union of
/// base faces, and [`Error::Malformed`] for an invalid custom order.
pub fn build_pi_triangulation_with(
    map: &AffineMap,
    total: &LatticePolytope,
    delta: &TriangulationComplex,
    options: &PiOptions,
) -> Result<TriangulationComplex> {
    let (_base, report) = fibration_over_complex(map, total, delta)?;
    if !is_unimodular_triangulation(delta) {
        return Err(Error::construction(
            "the base triangulation is not unimodular",
        ));
    }
    face_compatibility(map, total, delta)?;
    let coords = sweep_coordinates(map)?;

    // Fiber bounds in sweep heights, keyed by base point.
    let mut bottom: BTreeMap<IntPoint, BigInt> = BTreeMap::new();
    let mut goal: BTreeMap<IntPoint, BigInt> = BTreeMap::new();
    for fiber in &report.fibers {
        let (base_low, height_low) = coords.apply(&fiber.low).drop_last();
        let (base_high, height_high) = coords.apply(&fiber.high).drop_last();
        debug_assert_eq!(base_low, base_high);
        debug_assert_eq!(base_low, fiber.base_point);
        let (lo, hi) = if height_low <= height_high {
            (height_low, height_high)
        } else {
            (height_high, height_low)
        };
        bottom.insert(base_low.clone(), lo);
        goal.insert(base_low, hi);
    }

    // A unimodular triangulation covering the base uses every lattice
    // point of the base as a vertex, so the pools must agree exactly.
    let fiber_bases: Vec<IntPoint> = bottom.keys().cloned().collect();
    if delta.vertex_pool() != fiber_bases.as_slice() {
        return Err(Error::construction(
            "the base triangulation does not use exactly the lattice points of the base",
        ));
    }
    let position: BTreeMap<&IntPoint, usize> = delta
        .vertex_pool()
        .iter()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect();
    let mut star: Vec<Vec<usize>> = vec![Vec::new(); delta.vertex_pool().len()];
    for (ci, cell) in delta.maximal_cells().iter().enumerate() {
        for &vi in cell {
            star[vi].push(ci);
        }
    }

    let all_points = lattice_points(total);
    let mut above = Vec::new();
    for p in &all_points {
        let swept = coords.apply(p);
        let (base_point, height) = swept.drop_last();
        let lo = bottom.get(&base_point).ok_or_else(|| {
            Error::construction("a lattice point of the polytope lies over no fiber")
        })?;
        if height > *lo {
            above.push(swept);
        }
    }
    let enumeration = order_enumeration(above, &options.order, &coords, &bottom)?;

    let mut tops = bottom;
    let mut cells: Vec<Vec<IntPoint>> = Vec::new();
    for point in &enumeration {
        let (base_point, height) = point.drop_last();
        let current = tops.get(&base_point).ok_or_else(|| {
            Error::construction("the enumeration leaves the base lattice")
        })?;
        if *current != &height - BigInt::one() {
            return Err(Error::construction(
                "the enumeration skips a point of its fiber",
            ));
        }
        let vertex = position[&base_point];
        for &ci in &star[vertex] {
            let mut cell: Vec<IntPoint> = delta.maximal_cells()[ci]
                .iter()
                .map(|&vi| {
                    let shadow = &delta.vertex_pool()[vi];
                    shadow.with_coord(tops[shadow].clone())
                })
                .collect();
            cell.push(point.clone());
            cells.push(cell);
        }
        tops.insert(base_point, height);
    }
    if tops != goal {
        return Err(Error::construction(
            "the sweep terminated with unfilled fibers",
        ));
    }

    let original: Vec<Vec<IntPoint>> = cells
        .iter()
        .map(|cell| cell.iter().map(|p| coords.unapply(p)).collect())
        .collect();
    let complex = TriangulationComplex::from_cells(&original)?;
    if complex.vertex_pool() != all_points.as_slice() {
        return Err(Error::construction(
            "a lattice point of the polytope is not a vertex of the sweep",
        ));
    }
    match is_regular(&complex)? {
        RegularityOutcome::Regular { heights } => complex.with_heights(heights),
        RegularityOutcome::NotRegular { .. } => Ok(complex),
    }
}

/// Puts the swept points into the requested visiting order, validating a
/// custom order against the required fiber discipline.
fn order_enumeration(
    mut above: Vec<IntPoint>,
    order: &EnumerationOrder,
    coords: &SweepCoordinates,
    bottom: &BTreeMap<IntPoint, BigInt>,
) -> Result<Vec<IntPoint>> {
    match order {
        EnumerationOrder::BaseThenHeight => {
            above.sort();
            Ok(above)
        }
        EnumerationOrder::HeightThenBase => {
            above.sort_by(|a, b| {
                let ha = a.coords().last().expect("nonempty sweep point");
                let hb = b.coords().last().expect("nonempty sweep point");
                ha.cmp(hb).then_with(|| a.cmp(b))
            });
            Ok(above)
        }
        EnumerationOrder::Custom(list) => {
            let swept: Vec<IntPoint> = list.iter().map(|p| coords.apply(p)).collect();
            let mut sorted = swept.clone();
            sorted.sort();
            above.sort();
            if sorted != above {
                return Err(Error::malformed(
                    "the custom enumeration does not list exactly the points above the fiber minima",
                ));
            }
            let mut seen = bottom.clone();
            for point in &swept {
                let (base_point, height) = point.drop_last();
                let current = seen.get(&base_point).ok_or_else(|| {
                    Error::malformed("custom enumeration point over no fiber")
                })?;
                if *current != &height - BigInt::one() {
                    return Err(Error::malformed(
                        "the custom enumeration is not ascending along a fiber",
                    ));
                }
                seen.insert(base_point, height);
            }
            Ok(swept)
        }
    }
}

/// Runs the sweep up a tower of fibrations, starting from the one-point
/// triangulation of the zero-dimensional base and feeding each stage's
/// triangulation to the next stage as its base.
pub fn pi_tower(stages: &[LiftStage]) -> Result<Vec<TriangulationComplex>> {
    let mut delta = TriangulationComplex::point_complex();
    let mut out = Vec::with_capacity(stages.len());
    for stage in stages {
        let next = build_pi_triangulation(&stage.fibration, &stage.polytope, &delta)?;
        delta = next.clone();
        out.push(next);
    }
    Ok(out)
}

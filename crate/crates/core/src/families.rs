//! Constructors for the polytope families used throughout the crate, and
//! the checker for lattice segmental fibrations.
//!
//! Every family here is fibered over a lower-dimensional base by design:
//! segment polytopes over the unit square, graph-bounded lifts over an
//! arbitrary base, and prisms over anything. [`check_fibration`] verifies
//! the defining conditions of such a fibration from scratch, so the
//! constructors' outputs never need to be trusted.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::affine::{AffineForm, AffineMap};
use crate::enumerate::lattice_points;
use crate::error::{Error, Result};
use crate::hull::{convex_hull, Facet, LatticePolytope};
use crate::lattice::lattice_span;
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::matrix::{primitive_kernel_vector, rat_rank, IntMat};
use crate::point::{rational_to_int, IntPoint};

/// A lattice interval `[low, high]` with `low <= high`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeInterval {
    pub low: BigInt,
    pub high: BigInt,
}

impl LatticeInterval {
    pub fn new(low: BigInt, high: BigInt) -> Result<Self> {
        if low > high {
            return Err(Error::DegenerateInterval { lo: low, hi: high });
        }
        Ok(LatticeInterval { low, high })
    }

    pub fn from_i64(low: i64, high: i64) -> Result<Self> {
        Self::new(BigInt::from(low), BigInt::from(high))
    }

    pub fn is_point(&self) -> bool {
        self.low == self.high
    }
}

/// Four lattice intervals, one over each vertex of the unit square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalQuadruple {
    pub intervals: [LatticeInterval; 4],
}

impl IntervalQuadruple {
    pub fn new(intervals: [LatticeInterval; 4]) -> Self {
        IntervalQuadruple { intervals }
    }

    pub fn from_endpoints(endpoints: [(i64, i64); 4]) -> Result<Self> {
        let [a, b, c, d] = endpoints;
        Ok(IntervalQuadruple {
            intervals: [
                LatticeInterval::from_i64(a.0, a.1)?,
                LatticeInterval::from_i64(b.0, b.1)?,
                LatticeInterval::from_i64(c.0, c.1)?,
                LatticeInterval::from_i64(d.0, d.1)?,
            ],
        })
    }
}

/// The 3-polytope whose fiber over each vertex of the unit square is the
/// corresponding interval: the hull of `(0,0) x I1`, `(1,0) x I2`,
/// `(0,1) x I3`, and `(1,1) x I4`.
///
/// # Errors
///
/// Every interval must have positive length.
pub fn make_segment_polytope(quadruple: &IntervalQuadruple) -> Result<LatticePolytope> {
    if let Some(point) = quadruple.intervals.iter().find(|i| i.is_point()) {
        return Err(Error::DegenerateInterval {
            lo: point.low.clone(),
            hi: point.high.clone(),
        });
    }
    let corners = [(0i64, 0i64), (1, 0), (0, 1), (1, 1)];
    let mut points = Vec::with_capacity(8);
    for (corner, interval) in corners.iter().zip(&quadruple.intervals) {
        let base = IntPoint::from_i64(&[corner.0, corner.1]);
        points.push(base.with_coord(interval.low.clone()));
        points.push(base.with_coord(interval.high.clone()));
    }
    let hull = convex_hull(&points, 3)?;
    debug_assert_eq!(hull.vertices().len(), 8);
    Ok(hull)
}

/// The twisted prism over the unit square: fibers `[0,1]` over three
/// corners and `[twist, twist+1]` over the fourth.
pub fn make_twisted_prism(twist: u64) -> LatticePolytope {
    let m = twist as i64;
    let quadruple = IntervalQuadruple::from_endpoints([(0, 1), (0, 1), (0, 1), (m, m + 1)])
        .expect("unit-length intervals are never degenerate");
    make_segment_polytope(&quadruple).expect("unit-length intervals are never degenerate")
}

/// A base polytope with two affine forms bounding a lifted coordinate.
/// The forms take integer values everywhere by construction; the lower one
/// must not exceed the upper one anywhere on the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphBoundedLift {
    pub base: LatticePolytope,
    pub lower: AffineForm,
    pub upper: AffineForm,
}

/// Builds the polytope of points `(x, y)` with `x` in the base and
/// `lower(x) <= y <= upper(x)`, together with the projection back to the
/// base, which is a lattice segmental fibration whenever the two forms
/// differ somewhere.
///
/// # Errors
///
/// [`Error::AlphaExceedsBeta`] when the lower form exceeds the upper form
/// at some vertex of the base; [`Error::NotFullDimensional`] when the forms
/// agree everywhere (the lift is flat).
pub fn make_graph_bounded_lift(lift: &GraphBoundedLift) -> Result<(LatticePolytope, AffineMap)> {
    let dim = lift.base.dim();
    for form in [&lift.lower, &lift.upper] {
        if form.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: form.dim(),
            });
        }
    }
    // The difference of the forms is affine, so nonnegativity at the
    // vertices is nonnegativity on the whole base, lattice points included.
    let mut lifted = Vec::with_capacity(2 * lift.base.vertices().len());
    for v in lift.base.vertices() {
        let lo = lift.lower.eval(v)?;
        let hi = lift.upper.eval(v)?;
        if lo > hi {
            return Err(Error::AlphaExceedsBeta {
                point: v.coords().to_vec(),
            });
        }
        lifted.push(v.with_coord(lo));
        lifted.push(v.with_coord(hi));
    }
    let total = convex_hull(&lifted, dim + 1)?;
    Ok((total, AffineMap::projection(dim + 1, dim)))
}

/// One stage of an iterated graph-bounded construction: the two forms are
/// read over the coordinates of the stage below.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftStep {
    pub lower: AffineForm,
    pub upper: AffineForm,
}

impl LiftStep {
    pub fn new(lower: AffineForm, upper: AffineForm) -> Self {
        LiftStep { lower, upper }
    }

    /// The constant step `[low, high]`, a prism when `low < high`.
    pub fn constant(dim: usize, low: i64, high: i64) -> Self {
        LiftStep {
            lower: AffineForm::constant_form(dim, BigInt::from(low)),
            upper: AffineForm::constant_form(dim, BigInt::from(high)),
        }
    }
}

/// A polytope from an iterated lift together with the projection one
/// dimension down.
#[derive(Clone, Debug)]
pub struct LiftStage {
    pub polytope: LatticePolytope,
    pub fibration: AffineMap,
}

/// Folds lift steps starting from the single point in dimension zero; step
/// `k` must read `k` coordinates. Returns every intermediate stage, so the
/// final polytope and the whole chain of fibrations are available.
pub fn lift_tower(steps: &[LiftStep]) -> Result<Vec<LiftStage>> {
    let mut base = convex_hull(&[IntPoint::origin(0)], 0)?;
    let mut stages = Vec::with_capacity(steps.len());
    for step in steps {
        let lift = GraphBoundedLift {
            base,
            lower: step.lower.clone(),
            upper: step.upper.clone(),
        };
        let (polytope, fibration) = make_graph_bounded_lift(&lift)?;
        base = polytope.clone();
        stages.push(LiftStage {
            polytope,
            fibration,
        });
    }
    Ok(stages)
}

/// The prism `P x [0,1]`: vertices are duplicated at heights 0 and 1, and
/// the inequality description is the lifted one plus the two height bounds,
/// so no hull computation is needed.
pub fn product_with_segment(p: &LatticePolytope) -> LatticePolytope {
    let dim = p.dim();
    let mut vertices = Vec::with_capacity(2 * p.vertices().len());
    for v in p.vertices() {
        vertices.push(v.with_coord(BigInt::zero()));
        vertices.push(v.with_coord(BigInt::one()));
    }
    let mut facets: Vec<Facet> = p
        .hrep()
        .facets
        .iter()
        .map(|f| Facet {
            normal: f.normal.with_coord(BigInt::zero()),
            offset: f.offset.clone(),
        })
        .collect();
    let up = IntPoint::origin(dim).with_coord(BigInt::one());
    facets.push(Facet {
        normal: up.clone(),
        offset: BigInt::zero(),
    });
    facets.push(Facet {
        normal: IntPoint::origin(dim).with_coord(BigInt::from(-1)),
        offset: BigInt::from(-1),
    });
    LatticePolytope::from_parts(dim + 1, vertices, facets)
}

/// The segment endpoints of one fiber of a fibration, over one lattice
/// point of the base. Degenerate fibers have `low == high`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberSegment {
    pub base_point: IntPoint,
    pub low: IntPoint,
    pub high: IntPoint,
}

impl FiberSegment {
    pub fn is_degenerate(&self) -> bool {
        self.low == self.high
    }
}

/// The first condition of a lattice segmental fibration that fails, with a
/// witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FibrationViolation {
    /// A vertex of the total polytope maps outside the base.
    ImageEscapesBase { vertex: IntPoint },
    /// A lattice point of the base has no preimage.
    EmptyFiber { base_point: IntPoint },
    /// A fiber has dimension two or more.
    FiberNotSegment { base_point: IntPoint, dim: usize },
    /// A fiber is a segment or point with a non-lattice endpoint.
    NonLatticeEndpoint { base_point: IntPoint },
    /// Every fiber is a single point.
    NoOneDimensionalFiber,
    /// A lattice point of the total polytope misses every fiber.
    UncoveredLatticePoint { point: IntPoint },
    /// The point lattices do not split as base lattice plus one free rank.
    LatticeRankMismatch { total_rank: usize, base_rank: usize },
}

impl fmt::Display for FibrationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FibrationViolation::ImageEscapesBase { vertex } => {
                write!(f, "vertex {vertex:?} maps outside the base polytope")
            }
            FibrationViolation::EmptyFiber { base_point } => {
                write!(f, "base lattice point {base_point:?} has an empty fiber")
            }
            FibrationViolation::FiberNotSegment { base_point, dim } => {
                write!(
                    f,
                    "fiber over {base_point:?} has dimension {dim}, not a segment"
                )
            }
            FibrationViolation::NonLatticeEndpoint { base_point } => {
                write!(
                    f,
                    "fiber over {base_point:?} has a non-lattice endpoint"
                )
            }
            FibrationViolation::NoOneDimensionalFiber => {
                write!(f, "every fiber is a single point")
            }
            FibrationViolation::UncoveredLatticePoint { point } => {
                write!(
                    f,
                    "lattice point {point:?} lies over no base lattice point"
                )
            }
            FibrationViolation::LatticeRankMismatch {
                total_rank,
                base_rank,
            } => {
                write!(
                    f,
                    "point lattice ranks {total_rank} and {base_rank} do not split off one free rank"
                )
            }
        }
    }
}

/// Outcome of [`check_fibration`]: the fiber table for all base lattice
/// points processed before the first violation, if any.
#[derive(Clone, Debug)]
pub struct FibrationReport {
    pub fibers: Vec<FiberSegment>,
    pub violation: Option<FibrationViolation>,
}

impl FibrationReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

/// Decides whether `map` restricted to `total` is a lattice segmental
/// fibration over `base`: each fiber over a base lattice point must be a
/// lattice segment or lattice point, at least one fiber must be a genuine
/// segment, every lattice point upstairs must sit over a base lattice
/// point, and the point lattice upstairs must split off exactly one extra
/// rank. The first failed condition is reported with a witness.
///
/// # Errors
///
/// Only dimension mismatches between the map and the polytopes; geometric
/// failure is a verdict, not an error.
pub fn check_fibration(
    map: &AffineMap,
    total: &LatticePolytope,
    base: &LatticePolytope,
) -> Result<FibrationReport> {
    if map.domain_dim() != total.dim() {
        return Err(Error::DimensionMismatch {
            expected: total.dim(),
            got: map.domain_dim(),
        });
    }
    if map.codomain_dim() != base.dim() {
        return Err(Error::DimensionMismatch {
            expected: base.dim(),
            got: map.codomain_dim(),
        });
    }
    let report = |fibers, violation| {
        Ok(FibrationReport {
            fibers,
            violation: Some(violation),
        })
    };

    for v in total.vertices() {
        let image = map.apply(v)?;
        if !base.contains(&image) {
            return report(Vec::new(), FibrationViolation::ImageEscapesBase { vertex: v.clone() });
        }
    }

    let base_points = lattice_points(base);
    let mut fibers = Vec::with_capacity(base_points.len());
    for x in &base_points {
        match fiber_segment(map, total, x)? {
            FiberOutcome::Segment(segment) => fibers.push(segment),
            FiberOutcome::Empty => {
                return report(fibers, FibrationViolation::EmptyFiber {
                    base_point: x.clone(),
                })
            }
            FiberOutcome::TooWide { dim } => {
                return report(fibers, FibrationViolation::FiberNotSegment {
                    base_point: x.clone(),
                    dim,
                })
            }
            FiberOutcome::NonLattice => {
                return report(fibers, FibrationViolation::NonLatticeEndpoint {
                    base_point: x.clone(),
                })
            }
        }
    }

    if fibers.iter().all(|f| f.is_degenerate()) {
        return report(fibers, FibrationViolation::NoOneDimensionalFiber);
    }

    let total_points = lattice_points(total);
    for z in &total_points {
        let image = map.apply(z)?;
        if !base.contains(&image) {
            return report(fibers, FibrationViolation::UncoveredLatticePoint { point: z.clone() });
        }
    }

    let total_rank = lattice_span(&total_points, total.dim())?.rank();
    let base_rank = lattice_span(&base_points, base.dim())?.rank();
    if total_rank != base_rank + 1 {
        return report(fibers, FibrationViolation::LatticeRankMismatch {
            total_rank,
            base_rank,
        });
    }

    Ok(FibrationReport {
        fibers,
        violation: None,
    })
}

enum FiberOutcome {
    Segment(FiberSegment),
    Empty,
    TooWide { dim: usize },
    NonLattice,
}

/// Analyzes one fiber `map^{-1}(x) ∩ total` exactly: inequalities from the
/// total polytope plus the equalities pinning the image. The fiber's
/// dimension is the ambient dimension minus the rank of the equality system
/// (map rows plus inequalities that are implicitly tight).
fn fiber_segment(
    map: &AffineMap,
    total: &LatticePolytope,
    x: &IntPoint,
) -> Result<FiberOutcome> {
    let dim = total.dim();
    let base_lp = || {
        let mut lp = LinearProgram::new(dim);
        for facet in &total.hrep().facets {
            lp.add_int_constraint(facet.normal.coords(), Relation::Ge, facet.offset.clone());
        }
        for (row, (off, target)) in map
            .matrix()
            .rows
            .iter()
            .zip(map.offset().iter().zip(x.coords()))
        {
            lp.add_int_constraint(row, Relation::Eq, target - off);
        }
        lp
    };

    // Which facet inequalities are tight across the whole fiber?
    let mut equality_rows: Vec<Vec<BigInt>> = map.matrix().rows.clone();
    let mut sample: Option<Vec<BigRational>> = None;
    for facet in &total.hrep().facets {
        let mut lp = base_lp();
        let objective: Vec<BigRational> = facet
            .normal
            .coords()
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        lp.set_objective(objective);
        match lp.solve() {
            LpOutcome::Optimal { value, point } => {
                if value == BigRational::from_integer(facet.offset.clone()) {
                    equality_rows.push(facet.normal.coords().to_vec());
                }
                sample = Some(point);
            }
            LpOutcome::Infeasible { .. } => return Ok(FiberOutcome::Empty),
            LpOutcome::Unbounded { .. } => {
                unreachable!("fibers of a polytope are bounded")
            }
        }
    }
    let equalities = IntMat::new(equality_rows, dim);
    let fiber_dim = dim - rat_rank(&equalities);
    match fiber_dim {
        0 => {
            let point = sample.expect("a polytope has at least one facet");
            match rational_to_int(&point) {
                Some(p) => Ok(FiberOutcome::Segment(FiberSegment {
                    base_point: x.clone(),
                    low: p.clone(),
                    high: p,
                })),
                None => Ok(FiberOutcome::NonLattice),
            }
        }
        1 => {
            let direction = primitive_kernel_vector(&equalities)
                .expect("rank-deficient equality system has a kernel vector");
            let mut endpoints = Vec::with_capacity(2);
            for sign in [1i64, -1] {
                let mut lp = base_lp();
                let objective: Vec<BigRational> = direction
                    .coords()
                    .iter()
                    .map(|c| BigRational::from_integer(c * BigInt::from(sign)))
                    .collect();
                lp.set_objective(objective);
                match lp.solve() {
                    LpOutcome::Optimal { point, .. } => match rational_to_int(&point) {
                        Some(p) => endpoints.push(p),
                        None => return Ok(FiberOutcome::NonLattice),
                    },
                    _ => unreachable!("a nonempty fiber of a polytope is bounded"),
                }
            }
            endpoints.sort();
            let mut pair = endpoints.into_iter();
            Ok(FiberOutcome::Segment(FiberSegment {
                base_point: x.clone(),
                low: pair.next().expect("two endpoints collected"),
                high: pair.next().expect("two endpoints collected"),
            }))
        }
        wider => Ok(FiberOutcome::TooWide { dim: wider }),
    }
}

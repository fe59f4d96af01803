//! The `triangulate` subcommand: build the fiberwise sweep triangulation and
//! re-verify its certificates independently of the construction.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::json;

use polygap::enumerate::lattice_points;
use polygap::families::LiftStage;
use polygap::json::{JsonInt, TriangulationJson};
use polygap::triangulation::regular::heights_certify;
use polygap::triangulation::{
    build_pi_triangulation_with, fibered_subdivision, is_flag, is_regular,
    is_unimodular_triangulation, pi_tower, refines, verify_complex, EnumerationOrder, PiOptions,
    RegularityOutcome, SquareDiagonal, TriangulationComplex,
};
use polygap::{convex_hull, AffineMap, Error, IntPoint, LatticePolytope};

use crate::error::{CliError, CliResult};
use crate::instance::{load_instance, Instance};
use crate::io;

/// A pipeline failure, kept separate from [`CliError`] so the `analyze`
/// subcommand can embed it in a report instead of exiting.
pub enum PipelineError {
    Usage(String),
    Math {
        message: String,
        detail: serde_json::Value,
    },
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> CliError {
        match e {
            PipelineError::Usage(m) => CliError::usage(m),
            PipelineError::Math { message, detail } =>CliError::verification_with(message, detail),
        }
    }
}

fn math_error(e: Error) -> PipelineError {
    let detail = match &e {
        Error::FaceCompatibility { face, image } => json!({
            "error": "face_compatibility",
            "face": int_rows(face),
            "image": int_rows(image),
        }),
        Error::FibrationInvalid { reason } => json!({
            "error": "fibration_invalid",
            "reason": reason,
        }),
        other => json!({
            "error": "construction",
            "message": other.to_string(),
        }),
    };
    PipelineError::Math {
        message: e.to_string(),
        detail,
    }
}

fn int_rows(rows: &[Vec<BigInt>]) -> serde_json::Value {
    let rows: Vec<Vec<JsonInt>> = rows
        .iter()
        .map(|row| row.iter().cloned().map(JsonInt).collect())
        .collect();
    serde_json::to_value(rows).expect("integer rows serialize")
}

/// Independently re-checked properties of a built triangulation.
#[derive(Serialize)]
pub struct Certificates {
    pub tiles_polytope: bool,
    pub unimodular: bool,
    pub flag: bool,
    pub regular: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub heights_certified: Option<bool>,
    pub covers_all_lattice_points: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refines_fibered_subdivision: Option<bool>,
}

impl Certificates {
    pub fn first_failure(&self) -> Option<&'static str> {
        if !self.tiles_polytope {
            return Some("tiles_polytope");
        }
        if !self.unimodular {
            return Some("unimodular");
        }
        if !self.flag {
            return Some("flag");
        }
        if !self.regular {
            return Some("regular");
        }
        if self.heights_certified == Some(false) {
            return Some("heights_certified");
        }
        if !self.covers_all_lattice_points {
            return Some("covers_all_lattice_points");
        }
        if self.refines_fibered_subdivision == Some(false) {
            return Some("refines_fibered_subdivision");
        }
        None
    }
}

/// Re-verifies every certificate from scratch, trusting nothing about how
/// the triangulation was built.
pub fn compute_certificates(
    t: &TriangulationComplex,
    polytope: &LatticePolytope,
    fibration: Option<&AffineMap>,
    base: Option<&TriangulationComplex>,
) -> Certificates {
    let regular = matches!(is_regular(t), Ok(RegularityOutcome::Regular { .. }));
    let heights_certified = t.heights().map(|h| heights_certify(t, h));
    let mut expected = lattice_points(polytope);
    expected.sort();
    let covers_all_lattice_points = t.vertex_pool() == expected.as_slice();
    let refines_fibered_subdivision = match (fibration, base) {
        (Some(map), Some(delta)) => Some(
            fibered_subdivision(map, polytope, delta)
                .map(|sub| refines(t, &sub))
                .unwrap_or(false),
        ),
        _ => None,
    };
    Certificates {
        tiles_polytope: verify_complex(t, polytope),
        unimodular: is_unimodular_triangulation(t),
        flag: is_flag(t),
        regular,
        heights_certified,
        covers_all_lattice_points,
        refines_fibered_subdivision,
    }
}

/// The result of a successful triangulation pipeline run.
pub struct PipelineOutput {
    /// Which unit-square diagonal was synthesized, when the base was implied.
    pub diagonal: Option<&'static str>,
    /// Number of tower stages, when the instance was an iterated lift.
    pub stage_count: Option<usize>,
    pub triangulation: TriangulationComplex,
    pub certificates: Certificates,
}

/// Builds the sweep triangulation for an instance and re-verifies it.
///
/// Towers are swept stage by stage from a point. Flat instances need a
/// fibration plus a base triangulation; when none is given and the base is
/// the unit square, the requested diagonal (or both, in order) is tried.
pub fn run_pipeline(
    instance: &Instance,
    diagonal: Option<SquareDiagonal>,
    order: EnumerationOrder,
) -> Result<PipelineOutput, PipelineError> {
    if !instance.stages.is_empty() {
        return run_tower(&instance.stages);
    }
    let polytope = instance.polytope.as_ref().ok_or_else(|| {
        PipelineError::Usage("triangulation requires a full-dimensional polytope".to_string())
    })?;
    let fibration = instance.fibration.as_ref().ok_or_else(|| {
        PipelineError::Usage(
            "triangulation requires a fibration; provide one or name a family".to_string(),
        )
    })?;
    let options = PiOptions { order };

    if let Some(base) = &instance.base {
        let t = build_pi_triangulation_with(fibration, polytope, base, &options)
            .map_err(math_error)?;
        let certificates = compute_certificates(&t, polytope, Some(fibration), Some(base));
        return Ok(PipelineOutput {
            diagonal: None,
            stage_count: None,
            triangulation: t,
            certificates,
        });
    }

    let candidates = square_candidates(fibration, polytope, diagonal)?;
    let mut first_error = None;
    for (name, base) in candidates {
        match build_pi_triangulation_with(fibration, polytope, &base, &options) {
            Ok(t) => {
                let certificates = compute_certificates(&t, polytope, Some(fibration), Some(&base));
                return Ok(PipelineOutput {
                    diagonal: Some(name),
                    stage_count: None,
                    triangulation: t,
                    certificates,
                });
            }
            Err(e) => {
                if first_error.is_none() {
                    first_error = Some(math_error(e));
                }
            }
        }
    }
    Err(first_error.expect("at least one diagonal candidate is always tried"))
}

fn run_tower(stages: &[LiftStage]) -> Result<PipelineOutput, PipelineError> {
    let tower = pi_tower(stages).map_err(math_error)?;
    let t = tower
        .last()
        .expect("a nonempty tower yields a triangulation")
        .clone();
    let last = stages.last().expect("stages are nonempty");
    let base = if tower.len() >= 2 {
        tower[tower.len() - 2].clone()
    } else {
        TriangulationComplex::point_complex()
    };
    let certificates = compute_certificates(&t, &last.polytope, Some(&last.fibration), Some(&base));
    Ok(PipelineOutput {
        diagonal: None,
        stage_count: Some(stages.len()),
        triangulation: t,
        certificates,
    })
}

/// When the instance has no explicit base triangulation, the base must be
/// the unit square; returns the diagonal splittings to try.
fn square_candidates(
    fibration: &AffineMap,
    polytope: &LatticePolytope,
    diagonal: Option<SquareDiagonal>,
) -> Result<Vec<(&'static str, TriangulationComplex)>, PipelineError> {
    let images: Result<Vec<IntPoint>, Error> = polytope
        .vertices()
        .iter()
        .map(|v| fibration.apply(v))
        .collect();
    let images = images.map_err(|e| {
        PipelineError::Usage(format!("the fibration does not fit the polytope: {e}"))
    })?;
    let base_hull = convex_hull(&images, fibration.codomain_dim()).map_err(|e| {
        PipelineError::Usage(format!("the base of the fibration is degenerate: {e}"))
    })?;
    let zero = BigInt::zero();
    let one = BigInt::one();
    let mut square = vec![
        IntPoint::new(vec![zero.clone(), zero.clone()]),
        IntPoint::new(vec![zero.clone(), one.clone()]),
        IntPoint::new(vec![one.clone(), zero]),
        IntPoint::new(vec![one.clone(), one]),
    ];
    square.sort();
    if base_hull.vertices() != square.as_slice() {
        return Err(PipelineError::Usage(
            "no base triangulation provided and the base is not the unit square; \
             add a base_triangulation to the input document"
                .to_string(),
        ));
    }
    Ok(match diagonal {
        Some(SquareDiagonal::Main) => {
            vec![("main", TriangulationComplex::unit_square(SquareDiagonal::Main))]
        }
        Some(SquareDiagonal::Anti) => {
            vec![("anti", TriangulationComplex::unit_square(SquareDiagonal::Anti))]
        }
        None => vec![
            ("main", TriangulationComplex::unit_square(SquareDiagonal::Main)),
            ("anti", TriangulationComplex::unit_square(SquareDiagonal::Anti)),
        ],
    })
}

#[derive(Serialize)]
struct TriangulateReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    diagonal: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stage_count: Option<usize>,
    triangulation: TriangulationJson,
    certificates: Certificates,
}

pub fn parse_diagonal(flag: &Option<String>) -> CliResult<Option<SquareDiagonal>> {
    match flag.as_deref() {
        None => Ok(None),
        Some("main") => Ok(Some(SquareDiagonal::Main)),
        Some("anti") => Ok(Some(SquareDiagonal::Anti)),
        Some(other) => Err(CliError::usage(format!(
            "unknown diagonal {other:?}; expected \"main\" or \"anti\""
        ))),
    }
}

pub fn parse_order(flag: &str) -> CliResult<EnumerationOrder> {
    match flag {
        "base-then-height" => Ok(EnumerationOrder::BaseThenHeight),
        "height-then-base" => Ok(EnumerationOrder::HeightThenBase),
        other => Err(CliError::usage(format!(
            "unknown enumeration order {other:?}; expected \"base-then-height\" or \"height-then-base\""
        ))),
    }
}

pub fn run(
    input: &str,
    output: &Option<String>,
    diagonal: &Option<String>,
    order: &str,
    format: &str,
) -> CliResult<()> {
    io::check_format(format)?;
    let instance = load_instance(input)?;
    let diagonal = parse_diagonal(diagonal)?;
    let order = parse_order(order)?;
    let result = run_pipeline(&instance, diagonal, order).map_err(CliError::from)?;
    let report = TriangulateReport {
        diagonal: result.diagonal,
        stage_count: result.stage_count,
        triangulation: TriangulationJson::from(&result.triangulation),
        certificates: result.certificates,
    };
    io::write_report(output, &report)?;
    if let Some(name) = report.certificates.first_failure() {
        return Err(CliError::verification(format!(
            "certificate {name} failed for the built triangulation"
        )));
    }
    Ok(())
}

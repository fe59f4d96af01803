//! Input document resolution.
//!
//! Every subcommand that consumes geometry accepts the same shapes of input:
//! a family specification, a bare point set, a bare polytope, or a document
//! combining a polytope with a fibration, triangulations, and lift stages.
//! Resolution turns any of these into one [`Instance`] with the pieces the
//! subcommands need.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use polygap::enumerate::lattice_points;
use polygap::families::LiftStage;
use polygap::json::{FibrationJson, PointSetJson, PolytopeJson, TriangulationJson};
use polygap::{convex_hull, AffineMap, Error, LatticePolytope, PointConfig, TriangulationComplex};

use crate::error::{CliError, CliResult};
use crate::family::{build_family, FamilySpec};

/// One stage of a lift tower in document form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StageJson {
    pub polytope: PolytopeJson,
    pub fibration: FibrationJson,
}

/// The combined input document. All fields are optional; resolution checks
/// that the pieces a subcommand needs are present.
#[derive(Debug, Default, Deserialize)]
pub struct DocJson {
    #[serde(default)]
    pub family: Option<FamilySpec>,
    #[serde(default)]
    pub points: Option<PointSetJson>,
    #[serde(default)]
    pub polytope: Option<PolytopeJson>,
    #[serde(default)]
    pub fibration: Option<FibrationJson>,
    #[serde(default)]
    pub base_triangulation: Option<TriangulationJson>,
    #[serde(default)]
    pub triangulation: Option<TriangulationJson>,
    #[serde(default)]
    pub stages: Option<Vec<StageJson>>,
}

/// A resolved instance ready for analysis.
pub struct Instance {
    /// A small echo of where the instance came from, for report headers.
    pub echo: Value,
    /// The lattice point configuration the monoid invariants run on.
    pub config: PointConfig,
    /// The full-dimensional polytope, when one is available.
    pub polytope: Option<LatticePolytope>,
    /// The fibration onto the base, when one is available.
    pub fibration: Option<AffineMap>,
    /// An explicitly provided base triangulation.
    pub base: Option<TriangulationComplex>,
    /// An explicitly provided triangulation of the polytope itself.
    pub triangulation: Option<TriangulationComplex>,
    /// Lift tower stages, outermost last; empty when the instance is flat.
    pub stages: Vec<LiftStage>,
}

/// Classifies a top-level JSON input into a family specification or a
/// document, accepting the bare point-set and bare polytope shorthands.
pub fn parse_input(value: Value) -> CliResult<DocJson> {
    let object = value
        .as_object()
        .ok_or_else(|| CliError::usage("the input must be a JSON object"))?;
    if let Some(family) = object.get("family") {
        if family.is_string() {
            let spec: FamilySpec = serde_json::from_value(value.clone())
                .map_err(|e| CliError::usage(format!("invalid family specification: {e}")))?;
            return Ok(DocJson {
                family: Some(spec),
                ..DocJson::default()
            });
        }
        // Fall through: a document may embed a family specification object.
    }
    let is_document = object.contains_key("polytope")
        || object.contains_key("fibration")
        || object.contains_key("triangulation")
        || object.contains_key("base_triangulation")
        || object.contains_key("stages")
        || object.contains_key("family")
        || object.get("points").is_some_and(Value::is_object);
    if is_document {
        return serde_json::from_value(value)
            .map_err(|e| CliError::usage(format!("invalid input document: {e}")));
    }
    if object.contains_key("vertices") {
        let polytope: PolytopeJson = serde_json::from_value(value)
            .map_err(|e| CliError::usage(format!("invalid polytope: {e}")))?;
        return Ok(DocJson {
            polytope: Some(polytope),
            ..DocJson::default()
        });
    }
    if object.contains_key("points") && object.contains_key("dim") {
        let points: PointSetJson = serde_json::from_value(value)
            .map_err(|e| CliError::usage(format!("invalid point set: {e}")))?;
        return Ok(DocJson {
            points: Some(points),
            ..DocJson::default()
        });
    }
    Err(CliError::usage(
        "the input names neither a family, a point set, a polytope, nor a document",
    ))
}

fn parse_error(what: &str, e: Error) -> CliError {
    CliError::usage(format!("invalid {what}: {e}"))
}

/// Resolves a document into a computable instance. Explicitly listed pieces
/// win over family-derived ones, so a generated document round-trips as-is.
pub fn resolve(doc: DocJson) -> CliResult<Instance> {
    let built = match &doc.family {
        Some(spec) => Some(build_family(spec)?),
        None => None,
    };

    let mut polytope = match &doc.polytope {
        Some(p) => Some(LatticePolytope::try_from(p).map_err(|e| parse_error("polytope", e))?),
        None => built.as_ref().map(|b| b.polytope.clone()),
    };
    let fibration = match &doc.fibration {
        Some(f) => Some(AffineMap::try_from(f).map_err(|e| parse_error("fibration", e))?),
        None => built.as_ref().map(|b| b.fibration.clone()),
    };
    let base = match &doc.base_triangulation {
        Some(t) => {
            Some(TriangulationComplex::try_from(t).map_err(|e| parse_error("base triangulation", e))?)
        }
        None => None,
    };
    let triangulation = match &doc.triangulation {
        Some(t) => {
            Some(TriangulationComplex::try_from(t).map_err(|e| parse_error("triangulation", e))?)
        }
        None => None,
    };
    let stages = match &doc.stages {
        Some(stages) => {
            let mut rebuilt = Vec::with_capacity(stages.len());
            for (i, stage) in stages.iter().enumerate() {
                let polytope = LatticePolytope::try_from(&stage.polytope)
                    .map_err(|e| parse_error(&format!("stage {i} polytope"), e))?;
                let fibration = AffineMap::try_from(&stage.fibration)
                    .map_err(|e| parse_error(&format!("stage {i} fibration"), e))?;
                rebuilt.push(LiftStage {
                    polytope,
                    fibration,
                });
            }
            rebuilt
        }
        None => built.map(|b| b.stages).unwrap_or_default(),
    };

    let config = match &doc.points {
        Some(ps) => PointConfig::try_from(ps).map_err(|e| parse_error("point set", e))?,
        None => match &polytope {
            Some(p) => PointConfig::new(p.dim(), lattice_points(p))
                .map_err(|e| parse_error("polytope lattice points", e))?,
            None => {
                return Err(CliError::usage(
                    "the input provides no point set, polytope, or family to analyze",
                ))
            }
        },
    };

    // A bare point set still admits polytope-level questions when it is
    // full-dimensional; keep the hull around if it exists.
    if polytope.is_none() {
        polytope = convex_hull(config.points(), config.dim()).ok();
    }

    let mut echo = json!({
        "dim": config.dim(),
        "num_points": config.len(),
    });
    if let Some(spec) = &doc.family {
        echo["family"] = serde_json::to_value(spec)
            .map_err(|e| CliError::usage(format!("failed to echo the family: {e}")))?;
    }

    Ok(Instance {
        echo,
        config,
        polytope,
        fibration,
        base,
        triangulation,
        stages,
    })
}

/// Convenience: read, classify, and resolve an `--input` argument.
pub fn load_instance(input: &str) -> CliResult<Instance> {
    let text = crate::io::read_input_text(input)?;
    let value = crate::io::parse_input_json(&text)?;
    resolve(parse_input(value)?)
}

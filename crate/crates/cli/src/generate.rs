//! The `generate` subcommand: materialize a family instance as a document.

use serde::Serialize;

use polygap::json::{FibrationJson, PolytopeJson};

use crate::error::{CliError, CliResult};
use crate::family::{build_family, FamilySpec};
use crate::instance::StageJson;
use crate::io;

#[derive(Serialize)]
struct GenerateReport {
    family: FamilySpec,
    polytope: PolytopeJson,
    fibration: FibrationJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    stages: Option<Vec<StageJson>>,
}

pub fn run(input: &str, output: &Option<String>, format: &str) -> CliResult<()> {
    io::check_format(format)?;
    let text = io::read_input_text(input)?;
    let value = io::parse_input_json(&text)?;
    let spec: FamilySpec = serde_json::from_value(value)
        .map_err(|e| CliError::usage(format!("invalid family specification: {e}")))?;
    let built = build_family(&spec)?;

    let stages = if built.stages.is_empty() {
        None
    } else {
        Some(
            built
                .stages
                .iter()
                .map(|stage| StageJson {
                    polytope: PolytopeJson::from(&stage.polytope),
                    fibration: FibrationJson::from(&stage.fibration),
                })
                .collect(),
        )
    };
    let report = GenerateReport {
        family: spec,
        polytope: PolytopeJson::from(&built.polytope),
        fibration: FibrationJson::from(&built.fibration),
        stages,
    };
    io::write_report(output, &report)
}

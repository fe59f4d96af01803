//! Input and output plumbing shared by all subcommands.
//!
//! `--input` accepts an inline JSON object, a file path, or `-` for standard
//! input. Reports are rendered through the canonical serializer so that equal
//! requests produce byte-identical output.

use std::fs;
use std::io::Read;

use serde::Serialize;
use serde_json::Value;

use polygap::json::to_canonical_json;

use crate::error::{CliError, CliResult};

/// Reads the raw text behind an `--input` argument.
pub fn read_input_text(input: &str) -> CliResult<String> {
    if input.is_empty() {
        return Err(CliError::usage("--input must not be empty"));
    }
    if input == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::usage(format!("failed to read standard input: {e}")))?;
        return Ok(text);
    }
    if input.trim_start().starts_with('{') {
        return Ok(input.to_string());
    }
    fs::read_to_string(input)
        .map_err(|e| CliError::usage(format!("failed to read input file {input}: {e}")))
}

/// Parses the raw text of an input document into a JSON value.
pub fn parse_input_json(text: &str) -> CliResult<Value> {
    serde_json::from_str(text).map_err(|e| CliError::usage(format!("input is not valid JSON: {e}")))
}

/// Writes a report to `--output` (or standard output) in canonical form.
pub fn write_report<T: Serialize>(output: &Option<String>, report: &T) -> CliResult<()> {
    let text = to_canonical_json(report);
    match output {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::usage(format!("failed to write output file {path}: {e}"))),
    }
}

/// Rejects output formats other than JSON.
pub fn check_format(format: &str) -> CliResult<()> {
    if format == "json" {
        Ok(())
    } else {
        Err(CliError::usage(format!(
            "unsupported output format {format:?}; only \"json\" is available"
        )))
    }
}

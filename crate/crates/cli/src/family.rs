//! Parametric instance families addressable from the command line.
//!
//! A family specification is a small tagged JSON object, for example
//! `{"family": "pm", "m": 5}`. Building a specification yields the polytope,
//! the canonical fibration down to its base, and, for iterated lifts, the
//! whole tower of intermediate stages.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use polygap::families::{
    lift_tower, make_segment_polytope, make_twisted_prism, IntervalQuadruple, LiftStage, LiftStep,
};
use polygap::json::JsonInt;
use polygap::{AffineForm, AffineMap, LatticePolytope};

use crate::error::{CliError, CliResult};

/// An affine form `coeffs . x + constant` in family specifications.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FormJson {
    pub coeffs: Vec<JsonInt>,
    pub constant: JsonInt,
}

impl FormJson {
    fn to_form(&self) -> AffineForm {
        let coeffs: Vec<BigInt> = self.coeffs.iter().map(|c| c.0.clone()).collect();
        AffineForm::new(coeffs, self.constant.0.clone())
    }
}

/// One step of an iterated graph-bounded lift: the lower and upper bounding
/// forms over the polytope built so far.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LiftStepJson {
    pub alpha: FormJson,
    pub beta: FormJson,
}

/// A named instance family with its parameters.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    /// The twisted prism over the unit square with twist `m`.
    Pm { m: u64 },
    /// The polytope spanned by four vertical lattice segments over the unit
    /// square corners; `intervals` lists the four `[low, high]` endpoints.
    SegmentPolytope { intervals: [[i64; 2]; 4] },
    /// An iterated graph-bounded lift starting from a point; step `i` bounds
    /// the new coordinate by affine forms in the first `i` coordinates.
    Nakajima { steps: Vec<LiftStepJson> },
}

/// A built family instance: the polytope, the canonical fibration onto its
/// base, and the full lift tower when the family is an iterated lift.
pub struct BuiltFamily {
    pub polytope: LatticePolytope,
    pub fibration: AffineMap,
    pub stages: Vec<LiftStage>,
}

/// Materializes a family specification. Malformed parameters (reversed
/// intervals, inconsistent form dimensions, bounds that cross) are usage
/// errors: the specification itself is invalid.
pub fn build_family(spec: &FamilySpec) -> CliResult<BuiltFamily> {
    match spec {
        FamilySpec::Pm { m } => Ok(BuiltFamily {
            polytope: make_twisted_prism(*m),
            fibration: AffineMap::projection(3, 2),
            stages: Vec::new(),
        }),
        FamilySpec::SegmentPolytope { intervals } => {
            let endpoints = [
                (intervals[0][0], intervals[0][1]),
                (intervals[1][0], intervals[1][1]),
                (intervals[2][0], intervals[2][1]),
                (intervals[3][0], intervals[3][1]),
            ];
            let quadruple = IntervalQuadruple::from_endpoints(endpoints)
                .map_err(|e| CliError::usage(format!("invalid interval quadruple: {e}")))?;
            let polytope = make_segment_polytope(&quadruple)
                .map_err(|e| CliError::usage(format!("invalid segment polytope: {e}")))?;
            Ok(BuiltFamily {
                polytope,
                fibration: AffineMap::projection(3, 2),
                stages: Vec::new(),
            })
        }
        FamilySpec::Nakajima { steps } => {
            if steps.is_empty() {
                return Err(CliError::usage(
                    "a nakajima specification needs at least one lift step",
                ));
            }
            let mut lift_steps = Vec::with_capacity(steps.len());
            for (i, step) in steps.iter().enumerate() {
                if step.alpha.coeffs.len() != i || step.beta.coeffs.len() != i {
                    return Err(CliError::usage(format!(
                        "lift step {i} must bound the new coordinate by forms in {i} variables, \
                         got {} and {} coefficients",
                        step.alpha.coeffs.len(),
                        step.beta.coeffs.len()
                    )));
                }
                lift_steps.push(LiftStep::new(step.alpha.to_form(), step.beta.to_form()));
            }
            let stages = lift_tower(&lift_steps)
                .map_err(|e| CliError::usage(format!("invalid lift tower: {e}")))?;
            let last = stages.last().expect("nonempty steps build nonempty stages");
            Ok(BuiltFamily {
                polytope: last.polytope.clone(),
                fibration: last.fibration.clone(),
                stages,
            })
        }
    }
}

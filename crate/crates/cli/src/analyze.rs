//! The `analyze` subcommand: run a set of invariant computations on one
//! instance and report every outcome, successful or not, in one document.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::Value;

use polygap::ehrhart::ehrhart_polynomial;
use polygap::invariants::{is_integrally_closed, is_smooth, is_very_ample};
use polygap::json::{EhrhartJson, GapReportJson, TriangulationJson, VeryAmpleJson};
use polygap::monoid::{gap_vector_with, GapOptions};
use polygap::triangulation::EnumerationOrder;
use polygap::PointConfig;

use crate::error::CliResult;
use crate::instance::{load_instance, Instance};
use crate::io;
use crate::triangulate::{run_pipeline, Certificates, PipelineError};
use crate::verify::{applicable_certificates, run_certificates};
use crate::CliError;

/// The invariant computations `analyze` can run, in canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Task {
    Gaps,
    VeryAmple,
    Smooth,
    Ehrhart,
    IntegrallyClosed,
    Triangulate,
    Verify,
}

const CANONICAL_TASKS: [(Task, &str); 7] = [
    (Task::Gaps, "gaps"),
    (Task::VeryAmple, "very_ample"),
    (Task::Smooth, "smooth"),
    (Task::Ehrhart, "ehrhart"),
    (Task::IntegrallyClosed, "integrally_closed"),
    (Task::Triangulate, "triangulate"),
    (Task::Verify, "verify"),
];

const DEFAULT_TASKS: [Task; 5] = [
    Task::Gaps,
    Task::VeryAmple,
    Task::Smooth,
    Task::Ehrhart,
    Task::IntegrallyClosed,
];

/// Parses `--tasks` into a deduplicated list in canonical order.
pub fn parse_tasks(flag: &Option<String>) -> CliResult<Vec<Task>> {
    let Some(list) = flag else {
        return Ok(DEFAULT_TASKS.to_vec());
    };
    let mut chosen = Vec::new();
    for raw in list.split(',') {
        let name = raw.trim();
        if name.is_empty() {
            continue;
        }
        match CANONICAL_TASKS.iter().find(|(_, known)| *known == name) {
            Some((task, _)) => {
                if !chosen.contains(task) {
                    chosen.push(*task);
                }
            }
            None => {
                let known: Vec<&str> = CANONICAL_TASKS.iter().map(|(_, n)| *n).collect();
                return Err(CliError::usage(format!(
                    "unknown task {name:?}; expected a subset of {}",
                    known.join(", ")
                )));
            }
        }
    }
    if chosen.is_empty() {
        return Err(CliError::usage("--tasks names no task"));
    }
    let ordered: Vec<Task> = CANONICAL_TASKS
        .iter()
        .map(|(t, _)| *t)
        .filter(|t| chosen.contains(t))
        .collect();
    Ok(ordered)
}

/// One task's result: the payload is flattened in on success, errors and
/// skips carry a message instead.
#[derive(Serialize)]
pub struct TaskOutcome<T: Serialize> {
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<Value>,
    #[serde(flatten)]
    value: Option<T>,
}

impl<T: Serialize> TaskOutcome<T> {
    fn ok(value: T) -> Self {
        TaskOutcome {
            status: "ok",
            message: None,
            detail: None,
            value: Some(value),
        }
    }

    fn ok_with_note(value: T, message: String) -> Self {
        TaskOutcome {
            status: "ok",
            message: Some(message),
            detail: None,
            value: Some(value),
        }
    }

    fn error(message: String) -> Self {
        TaskOutcome {
            status: "error",
            message: Some(message),
            detail: None,
            value: None,
        }
    }

    fn error_with_detail(message: String, detail: Value) -> Self {
        TaskOutcome {
            status: "error",
            message: Some(message),
            detail: Some(detail),
            value: None,
        }
    }

    fn skipped(message: String) -> Self {
        TaskOutcome {
            status: "skipped",
            message: Some(message),
            detail: None,
            value: None,
        }
    }
}

#[derive(Serialize)]
struct SmoothJson {
    smooth: bool,
}

#[derive(Serialize)]
struct IntegrallyClosedJson {
    integrally_closed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    first_failure_height: Option<usize>,
}

#[derive(Serialize)]
struct TriangulateTaskJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    diagonal: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stage_count: Option<usize>,
    triangulation: TriangulationJson,
    certificates: Certificates,
}

#[derive(Serialize)]
struct VerifyTaskJson {
    certificates: BTreeMap<&'static str, bool>,
}

#[derive(Serialize)]
struct AnalyzeReport {
    input: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    gaps: Option<TaskOutcome<GapReportJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    very_ample: Option<TaskOutcome<VeryAmpleJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    smooth: Option<TaskOutcome<SmoothJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ehrhart: Option<TaskOutcome<EhrhartJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    integrally_closed: Option<TaskOutcome<IntegrallyClosedJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    triangulate: Option<TaskOutcome<TriangulateTaskJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verify: Option<TaskOutcome<VerifyTaskJson>>,
}

/// The configuration the monoid invariants run on: the input itself when its
/// differences already span the ambient lattice, otherwise its normalization.
fn monoid_view(config: &PointConfig) -> PointConfig {
    if config.is_normalized() {
        config.clone()
    } else {
        config.normalize().0
    }
}

fn run_gaps(config: &PointConfig, k_max: usize) -> TaskOutcome<GapReportJson> {
    let options = GapOptions { max_height: k_max };
    match gap_vector_with(config, &options) {
        Ok(report) => {
            let json = GapReportJson::from(&report);
            if report.capped {
                TaskOutcome::ok_with_note(
                    json,
                    format!("height cap {k_max} reached before stabilization"),
                )
            } else {
                TaskOutcome::ok(json)
            }
        }
        Err(e) => TaskOutcome::error(e.to_string()),
    }
}

fn run_triangulate_task(instance: &Instance) -> TaskOutcome<TriangulateTaskJson> {
    match run_pipeline(instance, None, EnumerationOrder::default()) {
        Ok(out) => TaskOutcome::ok(TriangulateTaskJson {
            diagonal: out.diagonal,
            stage_count: out.stage_count,
            triangulation: TriangulationJson::from(&out.triangulation),
            certificates: out.certificates,
        }),
        Err(PipelineError::Usage(m)) => TaskOutcome::error(m),
        Err(PipelineError::Math { message, detail }) => {
            TaskOutcome::error_with_detail(message, detail)
        }
    }
}

fn run_verify_task(instance: &Instance) -> TaskOutcome<VerifyTaskJson> {
    let Some(t) = &instance.triangulation else {
        return TaskOutcome::error(
            "the input provides no triangulation to verify".to_string(),
        );
    };
    let Some(polytope) = &instance.polytope else {
        return TaskOutcome::error(
            "verification requires a full-dimensional polytope".to_string(),
        );
    };
    let requested = applicable_certificates(instance, t);
    let outcome = run_certificates(
        t,
        polytope,
        instance.fibration.as_ref(),
        instance.base.as_ref(),
        &requested,
    );
    TaskOutcome::ok(VerifyTaskJson {
        certificates: outcome.results,
    })
}

pub fn run(
    input: &str,
    output: &Option<String>,
    tasks: &Option<String>,
    k_max: usize,
    time_budget: Option<u64>,
    format: &str,
) -> CliResult<()> {
    io::check_format(format)?;
    let tasks = parse_tasks(tasks)?;
    let instance = load_instance(input)?;
    let monoid_config = monoid_view(&instance.config);
    let start = Instant::now();
    let budget = time_budget.map(Duration::from_secs);

    let mut report = AnalyzeReport {
        input: instance.echo.clone(),
        gaps: None,
        very_ample: None,
        smooth: None,
        ehrhart: None,
        integrally_closed: None,
        triangulate: None,
        verify: None,
    };

    for task in tasks {
        let out_of_time = budget.is_some_and(|b| start.elapsed() >= b);
        let skip_note = "time budget exhausted before this task".to_string();
        match task {
            Task::Gaps => {
                report.gaps = Some(if out_of_time {
                    TaskOutcome::skipped(skip_note)
                } else {
                    run_gaps(&monoid_config, k_max)
                });
            }
            Task::VeryAmple => {
                report.very_ample = Some(if out_of_time {
                    TaskOutcome::skipped(skip_note)
                } else {
                    match is_very_ample(&monoid_config) {
                        Ok((verdict, certificate)) => {
                            TaskOutcome::ok(VeryAmpleJson::new(verdict, &certificate))
                        }
                        Err(e) => TaskOutcome::error(e.to_string()),
                    }
                });
            }
            Task::Smooth => {
                report.smooth = Some(if out_of_time {
                    TaskOutcome::skipped(skip_note)
                } else {
                    match &instance.polytope {
                        Some(p) => TaskOutcome::ok(SmoothJson {
                            smooth: is_smooth(p),
                        }),
                        None => TaskOutcome::error(
                            "smoothness requires a full-dimensional polytope".to_string(),
                        ),
                    }
                });
            }
            Task::Ehrhart => {
                report.ehrhart = Some(if out_of_time {
                    TaskOutcome::skipped(skip_note)
                } else {
                    match &instance.polytope {
                        Some(p) => match ehrhart_polynomial(p) {
                            Ok(poly) => TaskOutcome::ok(EhrhartJson::from(&poly)),
                            Err(e) => TaskOutcome::error(e.to_string()),
                        },
                        None => TaskOutcome::error(
                            "the Ehrhart polynomial requires a full-dimensional polytope"
                                .to_string(),
                        ),
                    }
                });
            }
            Task::IntegrallyClosed => {
                report.integrally_closed = Some(if out_of_time {
                    TaskOutcome::skipped(skip_note)
                } else {
                    match is_integrally_closed(&monoid_config) {
                        Ok((verdict, first_failure_height)) => {
                            TaskOutcome::ok(IntegrallyClosedJson {
                                integrally_closed: verdict,
                                first_failure_height,
                            })
                        }
                        Err(e) => TaskOutcome::error(e.to_string()),
                    }
                });
            }
            Task::Triangulate => {
                report.triangulate = Some(if out_of_time {
                    TaskOutcome::skipped(skip_note)
                } else {
                    run_triangulate_task(&instance)
                });
            }
            Task::Verify => {
                report.verify = Some(if out_of_time {
                    TaskOutcome::skipped(skip_note)
                } else {
                    run_verify_task(&instance)
                });
            }
        }
    }

    io::write_report(output, &report)
}

//! The `corpus` subcommand: sweep a family range, compute every gap profile,
//! and report unimodality verdicts with order-stable assembly.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use polygap::enumerate::lattice_points;
use polygap::json::GapReportJson;
use polygap::monoid::{gap_vector_with, GapOptions, GapReport};
use polygap::PointConfig;

use crate::error::{CliError, CliResult};
use crate::family::{build_family, FamilySpec};
use crate::io;

/// A family range to sweep.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum RangeSpec {
    /// Twisted prisms for every twist in `m_min..=m_max`.
    Pm { m_min: u64, m_max: u64 },
    /// Every quadruple of intervals with `0 <= low < high <= max_endpoint`.
    SegmentPolytope { max_endpoint: i64 },
}

/// Expands a range into keyed single-instance specifications. Keys are
/// chosen so that lexicographic order matches enumeration order.
fn enumerate_instances(spec: &RangeSpec) -> CliResult<Vec<(String, FamilySpec)>> {
    match spec {
        RangeSpec::Pm { m_min, m_max } => {
            if *m_max > 999 {
                return Err(CliError::usage("corpus twists above 999 are not supported"));
            }
            Ok((*m_min..=*m_max)
                .map(|m| (format!("pm_m{m:03}"), FamilySpec::Pm { m }))
                .collect())
        }
        RangeSpec::SegmentPolytope { max_endpoint } => {
            if *max_endpoint > 9 {
                return Err(CliError::usage(
                    "corpus endpoint sweeps above 9 are not supported",
                ));
            }
            let mut pairs = Vec::new();
            for low in 0..*max_endpoint {
                for high in (low + 1)..=*max_endpoint {
                    pairs.push([low, high]);
                }
            }
            let mut instances = Vec::new();
            for a in &pairs {
                for b in &pairs {
                    for c in &pairs {
                        for d in &pairs {
                            let key = format!(
                                "segment_{}-{}_{}-{}_{}-{}_{}-{}",
                                a[0], a[1], b[0], b[1], c[0], c[1], d[0], d[1]
                            );
                            instances.push((
                                key,
                                FamilySpec::SegmentPolytope {
                                    intervals: [*a, *b, *c, *d],
                                },
                            ));
                        }
                    }
                }
            }
            Ok(instances)
        }
    }
}

/// Whether the sequence rises (weakly) and then falls (weakly), along with
/// the 1-based index of its first maximum.
pub fn unimodality(values: &[u64]) -> (bool, Option<usize>) {
    if values.is_empty() {
        return (true, None);
    }
    let mut decreased = false;
    let mut unimodal = true;
    for pair in values.windows(2) {
        if pair[1] < pair[0] {
            decreased = true;
        } else if pair[1] > pair[0] && decreased {
            unimodal = false;
            break;
        }
    }
    let max = values.iter().max().expect("nonempty");
    let peak = values.iter().position(|v| v == max).map(|i| i + 1);
    (unimodal, peak)
}

#[derive(Serialize)]
struct InstanceReport {
    key: String,
    gap_report: GapReportJson,
    unimodal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    peak: Option<usize>,
}

#[derive(Serialize)]
struct WitnessReplay {
    key: String,
    gap_vector: Vec<u64>,
    replay_consistent: bool,
}

#[derive(Serialize)]
struct CorpusReport {
    total: usize,
    unimodal_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    non_unimodal_witness: Option<WitnessReplay>,
    instances: Vec<InstanceReport>,
}

fn instance_gap_report(spec: &FamilySpec, k_max: usize) -> CliResult<GapReport> {
    let built = build_family(spec)?;
    let points = lattice_points(&built.polytope);
    let config = PointConfig::new(built.polytope.dim(), points)
        .map_err(|e| CliError::verification(format!("family produced no lattice points: {e}")))?;
    let config = if config.is_normalized() {
        config
    } else {
        config.normalize().0
    };
    gap_vector_with(&config, &GapOptions { max_height: k_max })
        .map_err(|e| CliError::verification(format!("gap computation failed: {e}")))
}

fn compute_instance(key: &str, spec: &FamilySpec, k_max: usize) -> CliResult<InstanceReport> {
    let report = instance_gap_report(spec, k_max)?;
    let (unimodal, peak) = unimodality(&report.gap_vector);
    Ok(InstanceReport {
        key: key.to_string(),
        gap_report: GapReportJson::from(&report),
        unimodal,
        peak,
    })
}

/// Runs every instance on a small worker pool and assembles the results in
/// key order, so the report does not depend on scheduling.
fn run_pool(
    instances: &[(String, FamilySpec)],
    k_max: usize,
    jobs: usize,
) -> CliResult<Vec<InstanceReport>> {
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<CliResult<InstanceReport>>>> =
        Mutex::new((0..instances.len()).map(|_| None).collect());
    let workers = jobs.min(instances.len()).max(1);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= instances.len() {
                    break;
                }
                let (key, spec) = &instances[i];
                let result = compute_instance(key, spec, k_max);
                slots.lock().expect("report slots poisoned")[i] = Some(result);
            });
        }
    });
    let mut reports = Vec::with_capacity(instances.len());
    for slot in slots.into_inner().expect("report slots poisoned") {
        reports.push(slot.expect("every instance is computed exactly once")?);
    }
    reports.sort_by(|a, b| a.key.cmp(&b.key));
    Ok(reports)
}

pub fn run(
    input: &str,
    output: &Option<String>,
    k_max: usize,
    jobs: usize,
    format: &str,
) -> CliResult<()> {
    io::check_format(format)?;
    if jobs == 0 {
        return Err(CliError::usage("--jobs must be at least 1"));
    }
    let text = io::read_input_text(input)?;
    let value = io::parse_input_json(&text)?;
    let spec: RangeSpec = serde_json::from_value(value)
        .map_err(|e| CliError::usage(format!("invalid corpus range: {e}")))?;
    let instances = enumerate_instances(&spec)?;
    let reports = run_pool(&instances, k_max, jobs)?;

    let unimodal_count = reports.iter().filter(|r| r.unimodal).count();
    let witness = match reports.iter().find(|r| !r.unimodal) {
        None => None,
        Some(found) => {
            // Re-derive the witness once from scratch; a disagreement would
            // mean the sweep itself is not reproducible.
            let spec = &instances
                .iter()
                .find(|(key, _)| *key == found.key)
                .expect("witness key comes from the instance list")
                .1;
            let replay = instance_gap_report(spec, k_max)?;
            Some(WitnessReplay {
                key: found.key.clone(),
                gap_vector: replay.gap_vector.clone(),
                replay_consistent: replay.gap_vector == found.gap_report.gap_vector,
            })
        }
    };
    let replay_broken = witness
        .as_ref()
        .is_some_and(|w| !w.replay_consistent);

    let report = CorpusReport {
        total: reports.len(),
        unimodal_count,
        non_unimodal_witness: witness,
        instances: reports,
    };
    io::write_report(output, &report)?;
    if replay_broken {
        return Err(CliError::verification(
            "the non-unimodal witness did not reproduce on replay",
        ));
    }
    Ok(())
}

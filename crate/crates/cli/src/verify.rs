//! The `verify` subcommand: re-check certificates for a given triangulation
//! against a given polytope, naming the first failing cell or pair.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;
use serde::Serialize;

use polygap::enumerate::lattice_points;
use polygap::hull::simplex_normalized_volume;
use polygap::triangulation::regular::heights_certify;
use polygap::triangulation::{
    fibered_subdivision, find_complex_defect, is_flag, is_regular, is_unimodular_triangulation,
    refines, RegularityOutcome, TriangulationComplex,
};
use polygap::{AffineMap, LatticePolytope};

use crate::error::{CliError, CliResult};
use crate::instance::{load_instance, Instance};
use crate::io;

/// All certificate names, in the order they are checked and reported.
pub const CERTIFICATE_ORDER: [&str; 7] = [
    "tiles_polytope",
    "unimodular",
    "flag",
    "regular",
    "heights_certified",
    "covers_all_lattice_points",
    "refines_fibered_subdivision",
];

/// The outcome of running a set of certificates.
pub struct VerifyOutcome {
    /// Pass/fail per certificate, in [`CERTIFICATE_ORDER`].
    pub results: BTreeMap<&'static str, bool>,
    /// The first failing certificate with a human-readable diagnostic.
    pub first_failure: Option<(&'static str, String)>,
}

fn check_one(
    name: &'static str,
    t: &TriangulationComplex,
    polytope: &LatticePolytope,
    fibration: Option<&AffineMap>,
    base: Option<&TriangulationComplex>,
) -> (bool, String) {
    match name {
        "tiles_polytope" => match find_complex_defect(t, polytope) {
            None => (true, String::new()),
            Some(defect) => (false, defect.to_string()),
        },
        "unimodular" => {
            if is_unimodular_triangulation(t) {
                return (true, String::new());
            }
            for (ci, cell) in t.maximal_cells().iter().enumerate() {
                if cell.len() != t.ambient_dim() + 1
                    || !simplex_normalized_volume(t.vertex_pool(), cell).is_one()
                {
                    return (false, format!("cell {ci} is not a unimodular simplex"));
                }
            }
            (false, "no unimodular structure".to_string())
        }
        "flag" => {
            if is_flag(t) {
                return (true, String::new());
            }
            match non_face_triple(t) {
                Some([a, b, c]) => (
                    false,
                    format!(
                        "vertices {a}, {b}, {c} are pairwise joined by edges but span no cell"
                    ),
                ),
                None => (
                    false,
                    "a clique of the edge graph with more than three vertices is not a cell"
                        .to_string(),
                ),
            }
        }
        "regular" => match is_regular(t) {
            Ok(RegularityOutcome::Regular { .. }) => (true, String::new()),
            Ok(RegularityOutcome::NotRegular { refutation }) => {
                let diag = match refutation.folds.first() {
                    Some((fold, _)) => format!(
                        "no height function folds strictly across all interior ridges; \
                         the refutation involves cells {} and {}",
                        fold.cell, fold.neighbor
                    ),
                    None => "no strictly convex height function exists".to_string(),
                };
                (false, diag)
            }
            Err(e) => (false, format!("regularity check failed: {e}")),
        },
        "heights_certified" => match t.heights() {
            Some(heights) => {
                if heights_certify(t, heights) {
                    (true, String::new())
                } else {
                    (
                        false,
                        "the attached heights do not fold strictly across every interior ridge"
                            .to_string(),
                    )
                }
            }
            None => (false, "the triangulation carries no heights".to_string()),
        },
        "covers_all_lattice_points" => {
            let mut expected = lattice_points(polytope);
            expected.sort();
            if t.vertex_pool() == expected.as_slice() {
                return (true, String::new());
            }
            let pool: BTreeSet<_> = t.vertex_pool().iter().collect();
            let all: BTreeSet<_> = expected.iter().collect();
            if let Some(missing) = all.difference(&pool).next() {
                return (false, format!("lattice point {missing:?} is not in the vertex pool"));
            }
            match pool.difference(&all).next() {
                Some(extra) => (
                    false,
                    format!("pool vertex {extra:?} is not a lattice point of the polytope"),
                ),
                None => (true, String::new()),
            }
        }
        "refines_fibered_subdivision" => {
            let (map, delta) = match (fibration, base) {
                (Some(map), Some(delta)) => (map, delta),
                _ => {
                    return (
                        false,
                        "refinement needs both a fibration and a base triangulation".to_string(),
                    )
                }
            };
            match fibered_subdivision(map, polytope, delta) {
                Err(e) => (false, format!("the fibered subdivision does not exist: {e}")),
                Ok(sub) => {
                    if refines(t, &sub) {
                        return (true, String::new());
                    }
                    for (ci, cell) in t.maximal_cells().iter().enumerate() {
                        let points: Vec<_> =
                            cell.iter().map(|&i| t.vertex_pool()[i].clone()).collect();
                        let inside = sub
                            .chunks()
                            .iter()
                            .any(|chunk| points.iter().all(|p| chunk.contains(p)));
                        if !inside {
                            return (false, format!("cell {ci} crosses a chunk boundary"));
                        }
                    }
                    (false, "refinement failed".to_string())
                }
            }
        }
        other => (false, format!("unknown certificate {other}")),
    }
}

/// A pairwise-joined vertex triple spanning no cell, if one exists.
fn non_face_triple(t: &TriangulationComplex) -> Option<[usize; 3]> {
    let edges = t.edges();
    let cells: Vec<BTreeSet<usize>> = t
        .maximal_cells()
        .iter()
        .map(|c| c.iter().copied().collect())
        .collect();
    let n = t.vertex_pool().len();
    for &(a, b) in &edges {
        for c in (b + 1)..n {
            if edges.contains(&(a, c)) && edges.contains(&(b, c)) {
                let covered = cells
                    .iter()
                    .any(|cell| cell.contains(&a) && cell.contains(&b) && cell.contains(&c));
                if !covered {
                    return Some([a, b, c]);
                }
            }
        }
    }
    None
}

/// Runs the requested certificates in canonical order.
pub fn run_certificates(
    t: &TriangulationComplex,
    polytope: &LatticePolytope,
    fibration: Option<&AffineMap>,
    base: Option<&TriangulationComplex>,
    requested: &[&'static str],
) -> VerifyOutcome {
    let mut results = BTreeMap::new();
    let mut first_failure = None;
    for name in CERTIFICATE_ORDER {
        if !requested.contains(&name) {
            continue;
        }
        let (pass, diag) = check_one(name, t, polytope, fibration, base);
        results.insert(name, pass);
        if !pass && first_failure.is_none() {
            first_failure = Some((name, diag));
        }
    }
    VerifyOutcome {
        results,
        first_failure,
    }
}

/// The certificates that make sense for this instance without being asked:
/// heights only when attached, refinement only when the inputs exist.
pub fn applicable_certificates(instance: &Instance, t: &TriangulationComplex) -> Vec<&'static str> {
    let mut names = vec![
        "tiles_polytope",
        "unimodular",
        "flag",
        "regular",
        "covers_all_lattice_points",
    ];
    if t.heights().is_some() {
        names.insert(4, "heights_certified");
    }
    if instance.fibration.is_some() && instance.base.is_some() {
        names.push("refines_fibered_subdivision");
    }
    names
}

fn parse_requested(flag: &Option<String>) -> CliResult<Option<Vec<&'static str>>> {
    let Some(list) = flag else { return Ok(None) };
    let mut requested = Vec::new();
    for raw in list.split(',') {
        let name = raw.trim();
        if name.is_empty() {
            continue;
        }
        match CERTIFICATE_ORDER.iter().find(|&&known| known == name) {
            Some(&known) => {
                if !requested.contains(&known) {
                    requested.push(known);
                }
            }
            None => {
                return Err(CliError::usage(format!(
                    "unknown certificate {name:?}; expected a subset of {}",
                    CERTIFICATE_ORDER.join(", ")
                )))
            }
        }
    }
    if requested.is_empty() {
        return Err(CliError::usage("--certificates names no certificate"));
    }
    Ok(Some(requested))
}

#[derive(Serialize)]
struct VerifyReport {
    certificates: BTreeMap<&'static str, bool>,
}

pub fn run(
    input: &str,
    output: &Option<String>,
    certificates: &Option<String>,
    format: &str,
) -> CliResult<()> {
    io::check_format(format)?;
    let instance = load_instance(input)?;
    let t = instance.triangulation.as_ref().ok_or_else(|| {
        CliError::usage("verify requires a \"triangulation\" in the input document")
    })?;
    let polytope = instance.polytope.as_ref().ok_or_else(|| {
        CliError::usage("verify requires a polytope or a full-dimensional point set")
    })?;
    let requested = match parse_requested(certificates)? {
        Some(explicit) => {
            if explicit.contains(&"refines_fibered_subdivision")
                && (instance.fibration.is_none() || instance.base.is_none())
            {
                return Err(CliError::usage(
                    "refines_fibered_subdivision requires a fibration and a base_triangulation",
                ));
            }
            explicit
        }
        None => applicable_certificates(&instance, t),
    };
    let outcome = run_certificates(
        t,
        polytope,
        instance.fibration.as_ref(),
        instance.base.as_ref(),
        &requested,
    );
    io::write_report(output, &VerifyReport {
        certificates: outcome.results,
    })?;
    match outcome.first_failure {
        Some((name, diag)) => Err(CliError::verification(format!(
            "certificate {name} failed: {diag}"
        ))),
        None => Ok(()),
    }
}

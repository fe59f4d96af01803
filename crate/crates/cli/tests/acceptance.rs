//! Acceptance gate for the whole toolkit. Each test checks one criterion
//! end to end and prints a single `criterion N (...): PASS/FAIL` line, so the
//! test list doubles as the acceptance report.

use std::collections::{BTreeMap, BTreeSet};
use std::process::Command;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

use polygap::ehrhart::ehrhart_polynomial;
use polygap::enumerate::lattice_points;
use polygap::families::{
    check_fibration, lift_tower, make_segment_polytope, make_twisted_prism, IntervalQuadruple,
    LiftStep,
};
use polygap::hilbert::PointedCone;
use polygap::invariants::{is_smooth, is_very_ample};
use polygap::monoid::{gap_vector, generated_slices, normalized_slices};
use polygap::triangulation::{
    build_pi_triangulation, build_pi_triangulation_with, fibered_subdivision, is_flag, is_regular,
    is_unimodular_triangulation, pi_tower, refines, verify_complex, EnumerationOrder, PiOptions,
    RegularityOutcome, SquareDiagonal, TriangulationComplex,
};
use polygap::{
    convex_hull, AffineForm, AffineMap, IntPoint, LatticePolytope, PointConfig,
};

fn report_line(number: u32, label: &str, pass: bool) {
    println!(
        "criterion {number} ({label}): {}",
        if pass { "PASS" } else { "FAIL" }
    );
}

fn pm_config(m: u64) -> PointConfig {
    let polytope = make_twisted_prism(m);
    PointConfig::new(3, lattice_points(&polytope)).expect("twisted prisms have lattice points")
}

fn choose_three(n: u64) -> u64 {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

fn unit_vector(dim: usize, axis: usize) -> IntPoint {
    let mut coords = vec![BigInt::zero(); dim];
    coords[axis] = BigInt::one();
    IntPoint::new(coords)
}

/// Every certificate the sweep construction promises, re-checked from
/// scratch against the polytope, the fibration, and the base triangulation.
fn certify(
    t: &TriangulationComplex,
    polytope: &LatticePolytope,
    fibration: &AffineMap,
    base: &TriangulationComplex,
) -> bool {
    if !verify_complex(t, polytope) || !is_unimodular_triangulation(t) || !is_flag(t) {
        return false;
    }
    if !matches!(is_regular(t), Ok(RegularityOutcome::Regular { .. })) {
        return false;
    }
    let mut expected = lattice_points(polytope);
    expected.sort();
    if t.vertex_pool() != expected.as_slice() {
        return false;
    }
    match fibered_subdivision(fibration, polytope, base) {
        Ok(sub) => refines(t, &sub),
        Err(_) => false,
    }
}

#[test]
fn criterion_1_twisted_prism_gap_vectors() {
    let mut pass = true;
    for m in 4..=8u64 {
        let report = gap_vector(&pm_config(m)).expect("gap profile computes");
        let expected: Vec<u64> = (1..=(m - 2))
            .map(|k| choose_three(k + 1) * (m - k - 1))
            .collect();
        let ok = report.gap_vector == expected && report.gamma == (m - 2) as usize;
        if !ok {
            println!(
                "  m={m}: got {:?} gamma {}, expected {:?} gamma {}",
                report.gap_vector,
                report.gamma,
                expected,
                m - 2
            );
        }
        pass &= ok;
    }
    let boundary = gap_vector(&pm_config(3)).expect("gap profile computes");
    println!(
        "  note: m=3 reports gap vector {:?} with gamma {} (not asserted)",
        boundary.gap_vector, boundary.gamma
    );
    report_line(1, "twisted prism gap vectors", pass);
    assert!(pass, "criterion 1 failed");
}

#[test]
fn criterion_2_twisted_prism_ehrhart_polynomials() {
    let six = BigInt::from(6);
    let mut pass = true;
    for m in 3..=10u64 {
        let polytope = make_twisted_prism(m);
        let ehrhart = ehrhart_polynomial(&polytope).expect("Ehrhart interpolates");
        let m_int = BigInt::from(m);
        let expected = vec![
            BigRational::one(),
            BigRational::new(BigInt::from(18) - &m_int, six.clone()),
            BigRational::from_integer(BigInt::from(3)),
            BigRational::new(&m_int + BigInt::from(6), six.clone()),
        ];
        let ok = ehrhart.coefficients() == expected.as_slice();
        if !ok {
            println!("  m={m}: got {:?}", ehrhart.coefficients());
        }
        pass &= ok;
    }
    report_line(2, "twisted prism Ehrhart polynomials", pass);
    assert!(pass, "criterion 2 failed");
}

#[test]
fn criterion_3_generated_slice_sizes() {
    let mut pass = true;
    for m in 4..=8u64 {
        let config = pm_config(m);
        let slices = generated_slices(&config, (m - 1) as usize);
        for j in 1..=(m - 1) {
            let got = slices.height_slices[j as usize].len() as u64;
            let expected = (j + 1) * choose_three(j + 3);
            if got != expected {
                println!("  m={m}, height {j}: got {got}, expected {expected}");
                pass = false;
            }
        }
    }
    report_line(3, "generated slice sizes", pass);
    assert!(pass, "criterion 3 failed");
}

#[test]
fn criterion_4_segment_polytope_sweep() {
    let endpoints: Vec<(i64, i64)> = (0..=3)
        .flat_map(|low| ((low + 1)..=3).map(move |high| (low, high)))
        .collect();
    assert_eq!(endpoints.len(), 6);
    let mut pass = true;
    let mut count = 0usize;
    for &a in &endpoints {
        for &b in &endpoints {
            for &c in &endpoints {
                for &d in &endpoints {
                    count += 1;
                    let quadruple = IntervalQuadruple::from_endpoints([a, b, c, d])
                        .expect("nondegenerate intervals");
                    let polytope =
                        make_segment_polytope(&quadruple).expect("segment polytopes build");
                    let config = PointConfig::new(3, lattice_points(&polytope))
                        .expect("segment polytopes have lattice points");
                    let (very_ample, _) = is_very_ample(&config).expect("very ample decides");
                    let smooth = is_smooth(&polytope);
                    let expected_smooth =
                        a.0 + d.0 == b.0 + c.0 && a.1 + d.1 == b.1 + c.1;
                    if !very_ample || smooth != expected_smooth {
                        println!(
                            "  intervals {a:?} {b:?} {c:?} {d:?}: very_ample={very_ample}, \
                             smooth={smooth}, expected smooth={expected_smooth}"
                        );
                        pass = false;
                    }
                }
            }
        }
    }
    pass &= count == 1296;
    report_line(4, "segment polytope sweep", pass);
    assert!(pass, "criterion 4 failed");
}

/// Draws a lift tower over a point whose coordinates stay nonnegative, so
/// the sampled upper bound always dominates the lower bound. Rejected
/// samples (too large to certify quickly) are resampled deterministically.
fn sample_tower_steps(rng: &mut StdRng, dim: usize) -> Vec<LiftStep> {
    let mut steps = Vec::with_capacity(dim);
    for d in 0..dim {
        let mut alpha_coeffs = vec![BigInt::zero(); d];
        if d > 0 && rng.gen_bool(0.5) {
            let axis = rng.gen_range(0..d);
            alpha_coeffs[axis] = BigInt::one();
        }
        let alpha_const = BigInt::from(rng.gen_range(0..=1));
        let mut beta_coeffs = alpha_coeffs.clone();
        let mut span = 1i64;
        if d <= 1 {
            span = rng.gen_range(1..=2);
        }
        if d == 1 && rng.gen_bool(0.5) {
            beta_coeffs[0] += BigInt::one();
        }
        let beta_const = &alpha_const + BigInt::from(span);
        steps.push(LiftStep::new(
            AffineForm::new(alpha_coeffs, alpha_const),
            AffineForm::new(beta_coeffs, beta_const),
        ));
    }
    steps
}

#[test]
fn criterion_5_sweep_triangulations_certify_end_to_end() {
    let mut pass = true;

    // The untwisted prism over the unit square.
    let prism = make_twisted_prism(0);
    let projection = AffineMap::projection(3, 2);
    let square = TriangulationComplex::unit_square(SquareDiagonal::Main);
    match build_pi_triangulation(&projection, &prism, &square) {
        Ok(t) => {
            pass &= certify(&t, &prism, &projection, &square);
            let gaps = gap_vector(&pm_config(0)).expect("gap profile computes");
            pass &= gaps.gamma == 0 && gaps.gap_vector.is_empty();
        }
        Err(e) => {
            println!("  prism sweep failed: {e}");
            pass = false;
        }
    }

    // A deterministic sample of iterated lift towers in dimensions 2..=4.
    let mut rng = StdRng::seed_from_u64(415);
    let mut built = 0usize;
    while built < 24 {
        let dim = 2 + built % 3;
        let steps = sample_tower_steps(&mut rng, dim);
        let stages = match lift_tower(&steps) {
            Ok(stages) => stages,
            Err(e) => panic!("sampled tower is malformed: {e}"),
        };
        let last = stages.last().expect("towers are nonempty");
        if last.polytope.normalized_volume() > BigInt::from(60) {
            continue;
        }
        built += 1;
        let tower = match pi_tower(&stages) {
            Ok(tower) => tower,
            Err(e) => {
                println!("  tower {built} (dim {dim}) failed to sweep: {e}");
                pass = false;
                continue;
            }
        };
        let t = tower.last().expect("nonempty tower");
        let base = if tower.len() >= 2 {
            tower[tower.len() - 2].clone()
        } else {
            TriangulationComplex::point_complex()
        };
        if !certify(t, &last.polytope, &last.fibration, &base) {
            println!("  tower {built} (dim {dim}) failed a certificate");
            pass = false;
        }
        let config = PointConfig::new(dim, lattice_points(&last.polytope))
            .expect("lift towers have lattice points");
        let gaps = gap_vector(&config).expect("gap profile computes");
        if gaps.gamma != 0 || !gaps.gap_vector.is_empty() {
            println!("  tower {built} (dim {dim}) has unexpected gaps: {:?}", gaps.gap_vector);
            pass = false;
        }
    }

    report_line(5, "sweep triangulations certify end to end", pass);
    assert!(pass, "criterion 5 failed");
}

#[test]
fn criterion_6_twisted_prisms_reject_both_diagonals() {
    let mut pass = true;
    for m in [1u64, 2, 5] {
        for diagonal in ["main", "anti"] {
            let output = Command::new(env!("CARGO_BIN_EXE_polygap"))
                .args([
                    "triangulate",
                    "--input",
                    &format!(r#"{{"family":"pm","m":{m}}}"#),
                    "--diagonal",
                    diagonal,
                ])
                .output()
                .expect("the polygap binary runs");
            let stderr = String::from_utf8_lossy(&output.stderr);
            let ok = output.status.code() == Some(1) && stderr.contains("face_compatibility");
            if !ok {
                println!(
                    "  m={m}, diagonal {diagonal}: exit {:?}, stderr {stderr}",
                    output.status.code()
                );
                pass = false;
            }
        }
    }
    report_line(6, "twisted prisms reject both diagonals", pass);
    assert!(pass, "criterion 6 failed");
}

fn enumerate_cone_points(cone: &PointedCone, dim: usize, max_sum: u64) -> Vec<IntPoint> {
    let mut points = Vec::new();
    let mut coords = vec![0i64; dim];
    fn rec(
        cone: &PointedCone,
        coords: &mut Vec<i64>,
        axis: usize,
        remaining: i64,
        points: &mut Vec<IntPoint>,
    ) {
        if axis == coords.len() {
            let point = IntPoint::new(coords.iter().map(|&c| BigInt::from(c)).collect());
            if !point.is_zero() && cone.contains(&point) {
                points.push(point);
            }
            return;
        }
        for value in 0..=remaining {
            coords[axis] = value;
            rec(cone, coords, axis + 1, remaining - value, points);
        }
        coords[axis] = 0;
    }
    rec(cone, &mut coords, 0, max_sum as i64, &mut points);
    points
}

fn coordinate_sum(p: &IntPoint) -> BigInt {
    p.coords().iter().sum()
}

/// Checks the computed Hilbert basis against brute force on one cone: the
/// basis elements of small degree are exactly the irreducible cone points,
/// and they generate every cone point of coordinate sum at most `max_sum`.
fn hilbert_oracle_agrees(generators: &[IntPoint], dim: usize, max_sum: u64) -> Option<bool> {
    let cone = PointedCone::new(generators, dim).ok()?;
    let basis = cone.hilbert_basis().generators;
    let points = enumerate_cone_points(&cone, dim, max_sum);
    let point_set: BTreeSet<&IntPoint> = points.iter().collect();

    // Irreducible = not a sum of two nonzero cone lattice points.
    let mut irreducible = BTreeSet::new();
    for p in &points {
        let mut reducible = false;
        for q in &points {
            if q >= p {
                break;
            }
            let rest = p.sub(q);
            if !rest.is_zero() && cone.contains(&rest) {
                reducible = true;
                break;
            }
        }
        if !reducible {
            irreducible.insert(p.clone());
        }
    }
    let bound = BigInt::from(max_sum);
    let small_basis: BTreeSet<IntPoint> = basis
        .iter()
        .filter(|h| coordinate_sum(h) <= bound)
        .cloned()
        .collect();
    if small_basis != irreducible {
        return Some(false);
    }

    // Coverage: every cone point decomposes over the basis.
    let mut reachable: BTreeMap<&IntPoint, bool> = BTreeMap::new();
    let mut ordered: Vec<&IntPoint> = points.iter().collect();
    ordered.sort_by_key(|p| coordinate_sum(p));
    for p in ordered {
        let mut ok = small_basis.contains(p);
        if !ok {
            for h in &small_basis {
                if coordinate_sum(h) >= coordinate_sum(p) {
                    continue;
                }
                let rest = p.sub(h);
                if point_set.contains(&rest) && reachable.get(&rest) == Some(&true) {
                    ok = true;
                    break;
                }
            }
        }
        reachable.insert(p, ok);
        if !ok {
            return Some(false);
        }
    }
    Some(true)
}

fn random_point(rng: &mut StdRng, dim: usize, max_entry: i64) -> IntPoint {
    IntPoint::new(
        (0..dim)
            .map(|_| BigInt::from(rng.gen_range(0..=max_entry)))
            .collect(),
    )
}

fn random_normalized_config(rng: &mut StdRng, dim: usize) -> PointConfig {
    let mut points = vec![IntPoint::origin(dim)];
    for axis in 0..dim {
        points.push(unit_vector(dim, axis));
    }
    for _ in 0..rng.gen_range(2..=4) {
        points.push(random_point(rng, dim, 3));
    }
    PointConfig::new(dim, points).expect("configs with a unit frame are valid")
}

/// Like [`random_normalized_config`], but saturated: the configuration is
/// the full lattice point set of a random polytope, so its gap profile
/// terminates and the stopping rule is guaranteed to fire.
fn random_full_config(rng: &mut StdRng, dim: usize) -> PointConfig {
    let sparse = random_normalized_config(rng, dim);
    let hull = convex_hull(sparse.points(), dim).expect("unit frames span");
    PointConfig::new(dim, lattice_points(&hull)).expect("hulls have lattice points")
}

fn slice_set(slice: &[IntPoint]) -> BTreeSet<&IntPoint> {
    slice.iter().collect()
}

/// A random bottom-up interleaving of the fiber interiors of a fibration,
/// suitable as a custom sweep enumeration.
fn random_fiber_order(
    rng: &mut StdRng,
    fibration: &AffineMap,
    polytope: &LatticePolytope,
    base: &TriangulationComplex,
) -> Vec<IntPoint> {
    let base_hull = convex_hull(base.vertex_pool(), base.ambient_dim())
        .expect("base triangulations have full-dimensional pools");
    let fibers = check_fibration(fibration, polytope, &base_hull)
        .expect("fibration preflight runs")
        .fibers;
    let mut queues: Vec<Vec<IntPoint>> = Vec::new();
    for fiber in &fibers {
        if fiber.is_degenerate() {
            continue;
        }
        let direction = fiber.high.sub(&fiber.low);
        let step = direction.primitive();
        let axis = step
            .coords()
            .iter()
            .position(|c| !c.is_zero())
            .expect("nondegenerate fibers have a direction");
        let count = (&direction.coords()[axis] / &step.coords()[axis])
            .to_usize()
            .expect("fiber lengths are small");
        let mut ascending = Vec::with_capacity(count);
        let mut current = fiber.low.clone();
        for _ in 0..count {
            current = current.add(&step);
            ascending.push(current.clone());
        }
        ascending.reverse();
        queues.push(ascending);
    }
    let mut order = Vec::new();
    while !queues.is_empty() {
        let pick = rng.gen_range(0..queues.len());
        order.push(queues[pick].pop().expect("queues are drained lazily"));
        if queues[pick].is_empty() {
            queues.swap_remove(pick);
        }
    }
    order
}

#[test]
fn criterion_7_property_suites() {
    let mut pass = true;

    // Hilbert basis versus brute force: exhaustive in the plane, a seeded
    // sample in space; entries at most 3, coverage up to coordinate sum 10.
    {
        let mut vectors = Vec::new();
        for x in 0..=3i64 {
            for y in 0..=3i64 {
                if x != 0 || y != 0 {
                    vectors.push(IntPoint::new(vec![BigInt::from(x), BigInt::from(y)]));
                }
            }
        }
        let mut checked = 0usize;
        let mut failed = 0usize;
        for i in 0..vectors.len() {
            for j in (i + 1)..vectors.len() {
                if let Some(ok) =
                    hilbert_oracle_agrees(&[vectors[i].clone(), vectors[j].clone()], 2, 10)
                {
                    checked += 1;
                    failed += usize::from(!ok);
                }
            }
        }
        let mut rng = StdRng::seed_from_u64(71);
        let mut space_checked = 0usize;
        while space_checked < 120 {
            let count = rng.gen_range(3..=5);
            let generators: Vec<IntPoint> =
                (0..count).map(|_| random_point(&mut rng, 3, 3)).collect();
            if let Some(ok) = hilbert_oracle_agrees(&generators, 3, 10) {
                space_checked += 1;
                failed += usize::from(!ok);
            }
        }
        println!(
            "  hilbert oracle: {} planar cones and {space_checked} spatial cones, {failed} failures",
            checked
        );
        pass &= failed == 0 && checked > 50;
    }

    // Stopping rule: three heights past the reported stop stay gap-free.
    // Sampling sticks to very ample configurations, the ones whose gap
    // profile is guaranteed to terminate at all.
    {
        let mut rng = StdRng::seed_from_u64(72);
        let mut failures = 0usize;
        let mut round = 0usize;
        let mut attempts = 0usize;
        while round < 100 {
            attempts += 1;
            assert!(attempts < 2000, "very ample configurations are not this rare");
            let dim = 2 + round % 2;
            let config = random_full_config(&mut rng, dim);
            let (very_ample, _) = is_very_ample(&config).expect("very ample decides");
            if !very_ample {
                continue;
            }
            round += 1;
            let report = gap_vector(&config).expect("gap profile computes");
            if report.capped {
                println!("  stopping rule: round {round} hit the height cap");
                failures += 1;
                continue;
            }
            let stop = report.stop_height.expect("uncapped runs report a stop");
            let horizon = stop + 3;
            let generated = generated_slices(&config, horizon);
            let normalized = normalized_slices(&config, horizon).expect("hull slices compute");
            for h in (stop + 1)..=horizon {
                if slice_set(&generated.height_slices[h])
                    != slice_set(&normalized.height_slices[h])
                {
                    println!("  stopping rule: round {round} has a gap at height {h}");
                    failures += 1;
                }
            }
        }
        pass &= failures == 0;
    }

    // Containment: generated slices embed into normalized slices everywhere.
    {
        let mut rng = StdRng::seed_from_u64(73);
        let mut failures = 0usize;
        for round in 0..100 {
            let dim = 2 + round % 2;
            let config = random_normalized_config(&mut rng, dim);
            let horizon = 5;
            let generated = generated_slices(&config, horizon);
            let normalized = normalized_slices(&config, horizon).expect("hull slices compute");
            for h in 0..=horizon {
                let gen_set = slice_set(&generated.height_slices[h]);
                let norm_set = slice_set(&normalized.height_slices[h]);
                if !gen_set.is_subset(&norm_set) {
                    println!("  containment: round {round} leaks at height {h}");
                    failures += 1;
                }
            }
        }
        pass &= failures == 0;
    }

    // Order robustness: the sweep certifies under random valid enumerations.
    {
        let segment_quadruple = IntervalQuadruple::from_endpoints([(0, 2), (0, 1), (1, 2), (1, 3)])
            .expect("nondegenerate intervals");
        let tower_steps = vec![
            LiftStep::constant(0, 0, 1),
            LiftStep::constant(1, 0, 1),
            LiftStep::new(
                AffineForm::new(vec![BigInt::one(), BigInt::zero()], BigInt::zero()),
                AffineForm::new(vec![BigInt::one(), BigInt::zero()], BigInt::one()),
            ),
        ];
        let tower_stages = lift_tower(&tower_steps).expect("the tower builds");
        let tower = pi_tower(&tower_stages).expect("the tower sweeps");
        let tower_last = tower_stages.last().expect("nonempty tower");

        let instances: Vec<(AffineMap, LatticePolytope, TriangulationComplex)> = vec![
            (
                AffineMap::projection(3, 2),
                make_twisted_prism(0),
                TriangulationComplex::unit_square(SquareDiagonal::Main),
            ),
            (
                AffineMap::projection(3, 2),
                make_twisted_prism(0),
                TriangulationComplex::unit_square(SquareDiagonal::Anti),
            ),
            (
                AffineMap::projection(3, 2),
                make_segment_polytope(&segment_quadruple).expect("segment polytope builds"),
                TriangulationComplex::unit_square(SquareDiagonal::Main),
            ),
            (
                tower_last.fibration.clone(),
                tower_last.polytope.clone(),
                tower[tower.len() - 2].clone(),
            ),
        ];
        let mut rng = StdRng::seed_from_u64(74);
        let mut failures = 0usize;
        for (which, (fibration, polytope, base)) in instances.iter().enumerate() {
            for _ in 0..5 {
                let order = random_fiber_order(&mut rng, fibration, polytope, base);
                let options = PiOptions {
                    order: EnumerationOrder::Custom(order),
                };
                match build_pi_triangulation_with(fibration, polytope, base, &options) {
                    Ok(t) => {
                        if !certify(&t, polytope, fibration, base) {
                            println!("  order robustness: instance {which} failed a certificate");
                            failures += 1;
                        }
                    }
                    Err(e) => {
                        println!("  order robustness: instance {which} failed to build: {e}");
                        failures += 1;
                    }
                }
            }
        }
        pass &= failures == 0;
    }

    report_line(7, "property suites", pass);
    assert!(pass, "criterion 7 failed");
}

#[test]
fn criterion_8_unimodality_corpus() {
    let output = Command::new(env!("CARGO_BIN_EXE_polygap"))
        .args([
            "corpus",
            "--input",
            r#"{"family":"pm","m_min":4,"m_max":12}"#,
            "--jobs",
            "2",
        ])
        .output()
        .expect("the polygap binary runs");
    let mut pass = output.status.success();
    let report: Value = serde_json::from_slice(&output.stdout).expect("corpus emits JSON");
    let instances = report["instances"].as_array().expect("instances listed");
    pass &= instances.len() == 9;
    for (offset, instance) in instances.iter().enumerate() {
        let m = 4 + offset as u64;
        let unimodal = instance["unimodal"].as_bool() == Some(true);
        let peak = instance["peak"].as_u64();
        let expected_peak = (3 * m - 2) / 4;
        if !unimodal || peak != Some(expected_peak) {
            println!(
                "  m={m}: unimodal={unimodal}, peak={peak:?}, expected peak {expected_peak}"
            );
            pass = false;
        }
    }
    pass &= report["non_unimodal_witness"].is_null();
    report_line(8, "unimodality corpus", pass);
    assert!(pass, "criterion 8 failed");
}

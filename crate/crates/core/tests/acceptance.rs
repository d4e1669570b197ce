//! Acceptance run: one PASS/FAIL line per primary criterion.
//!
//! Oracles here are written independently of the library code paths they
//! check (plain line scans, direct iteration, explicit group enumeration).

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trapgeom::incidence::{Line2, Point2};
use trapgeom::matrix::{Matrix, MatrixTorsorSpace};
use trapgeom::planes::{
    build_affine_plane, build_hall_plane_9, check_affine_axioms, check_associativity, check_desargues,
    check_projective_axioms, projective_completion, replay_desargues_witness, DesarguesMode, FinitePlane, ScanMode,
};
use trapgeom::scalars::{FieldElement, Scalar, ScalarField};
use trapgeom::scene::{demo, evaluate, Backend, NodeStatus, OutValue, Scene, DEMOS};
use trapgeom::torsor::{check_para_associative, Status};
use trapgeom::trapezoid::{
    ga1_matrix, group_product, power, semidirect_decompose, trapezoid, trapezoid_geometric, AffineFunctional,
};
use trapgeom::verify::{run_suite, Suite, VerifyOptions};

// Pinned thresholds.
const TORSOR_SAMPLES: usize = 10_000;
const TORSOR_SEED: u64 = 42;
const TORSOR_TIME_LIMIT: Duration = Duration::from_secs(10);
const ORACLE_CONFIGURATIONS: usize = 10_000;
const HOM_MULT_SAMPLES: usize = 10_000;
const POWER_PAIRS: usize = 100;
const MAX_POWER: i64 = 20;
const GA1_COMPOSITION_SAMPLES: usize = 1_000;
const MATRIX_QUINTUPLES: usize = 1_000;
const PG3_TIME_LIMIT: Duration = Duration::from_secs(300);
const HALL_BUDGET: usize = 1_000_000;
const FLOAT_REL_TOL: f64 = 1e-9;
const FUZZ_DRAGS: usize = 10_000;
/// Drags stay inside this box, as on a screen; snapping onto a far-off point
/// would otherwise compound magnitudes across drags.
const CANVAS: f64 = 1e3;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn q() -> ScalarField {
    ScalarField::rationals()
}

fn small_rational(f: &ScalarField, r: &mut ChaCha8Rng) -> Scalar {
    f.ratio(r.random_range(-20..=20), r.random_range(1..=6))
}

fn gf(n: u32) -> ScalarField {
    ScalarField::gf(n).unwrap()
}

fn torsor_laws() -> Verdict {
    let opts = VerifyOptions {
        samples: TORSOR_SAMPLES,
        seed: TORSOR_SEED,
        ..VerifyOptions::default()
    };
    let start = Instant::now();
    let run = run_suite(Suite::Trapezoid, &opts).unwrap();
    let elapsed = start.elapsed();
    let mut ok = run.passed && elapsed < TORSOR_TIME_LIMIT;
    let mut parts = Vec::new();
    for name in ["idempotent", "para-associative", "klein-symmetry"] {
        let r = run.reports.iter().find(|r| r.property == name).unwrap();
        ok &= r.status == Status::Pass && r.failure_count == 0 && r.samples == TORSOR_SAMPLES;
        parts.push(format!("{name} {}/{} defined, {} failures", r.defined, r.samples, r.failure_count));
    }
    verdict(ok, format!("{}; {:.2}s (limit {}s)", parts.join(", "), elapsed.as_secs_f64(), TORSOR_TIME_LIMIT.as_secs()))
}

fn oracle_equivalence() -> Verdict {
    let f = q();
    let mut r = rng(1);
    let (mut checked, mut mismatches, mut redrawn) = (0, 0, 0);
    while checked < ORACLE_CONFIGURATIONS {
        // a random boundary line, not only x₂ = 0
        let (u, v) = loop {
            let (u, v) = (small_rational(&f, &mut r), small_rational(&f, &mut r));
            if !(u.is_zero() && v.is_zero()) {
                break (u, v);
            }
        };
        let a = Line2::new(u, v, small_rational(&f, &mut r)).unwrap();
        let alpha = AffineFunctional::from_line(&a).unwrap();
        let pts: Vec<Point2<Scalar>> = (0..3)
            .map(|_| Point2::new(small_rational(&f, &mut r), small_rational(&f, &mut r)))
            .collect();
        let (x, y, z) = (&pts[0], &pts[1], &pts[2]);
        let distinct = x != y && y != z && x != z;
        if !distinct || pts.iter().any(|p| alpha.eval(&p.to_vec()).is_zero()) {
            redrawn += 1;
            continue;
        }
        let expected = trapezoid(&x.to_vec(), &y.to_vec(), &z.to_vec(), &alpha).unwrap();
        checked += 1;
        match trapezoid_geometric(x, y, z, &a) {
            Ok(w) if w.to_vec() == expected => {}
            _ => mismatches += 1,
        }
    }
    verdict(
        mismatches == 0,
        format!("{checked} configurations with random a, {mismatches} mismatches ({redrawn} degenerate draws redrawn)"),
    )
}

fn hom_mult() -> Verdict {
    let mut parts = Vec::new();
    let mut ok = true;
    for (k, field) in [q(), gf(5), gf(7)].into_iter().enumerate() {
        let mut r = rng(10 + k as u64);
        let mut failures = 0;
        for _ in 0..HOM_MULT_SAMPLES {
            let dim = r.random_range(2..=3);
            let coeffs: Vec<Scalar> = loop {
                let c: Vec<Scalar> = (0..dim).map(|_| field.sample(&mut r)).collect();
                if c.iter().any(|x| !x.is_zero()) {
                    break c;
                }
            };
            let alpha = AffineFunctional::new(coeffs, field.sample(&mut r)).unwrap();
            let mut member = || loop {
                let p: Vec<Scalar> = (0..dim).map(|_| field.sample(&mut r)).collect();
                if !alpha.eval(&p).is_zero() {
                    break p;
                }
            };
            let (x, y, z) = (member(), member(), member());
            let w = trapezoid(&x, &y, &z, &alpha).unwrap();
            let rhs = alpha.eval(&x) * alpha.eval(&y).inv().unwrap() * alpha.eval(&z);
            if alpha.eval(&w) != rhs {
                failures += 1;
            }
        }
        ok &= failures == 0;
        parts.push(format!("{field}: {failures}/{HOM_MULT_SAMPLES} failures"));
    }
    verdict(ok, parts.join(", "))
}

/// `xⁿ` by direct iteration of `(a e b)`.
fn iterate_power(x: &[Scalar], n: i64, e: &[Scalar], alpha: &AffineFunctional<Scalar>) -> Vec<Scalar> {
    let step = if n < 0 { trapezoid(e, x, e, alpha).unwrap() } else { x.to_vec() };
    let mut acc = e.to_vec();
    for _ in 0..n.unsigned_abs() {
        acc = trapezoid(&acc, e, &step, alpha).unwrap();
    }
    acc
}

fn powers() -> Verdict {
    let f = q();
    let alpha = AffineFunctional::coordinate(2, 1, &f.zero());
    let mut r = rng(20);
    let (mut mismatches, mut arithmetic) = (0, 0);
    for i in 0..POWER_PAIRS {
        let nonzero = |r: &mut ChaCha8Rng| loop {
            let s = small_rational(&f, r);
            if !s.is_zero() {
                break s;
            }
        };
        let e = vec![small_rational(&f, &mut r), nonzero(&mut r)];
        let x2 = if i % 2 == 0 { e[1].clone() } else { nonzero(&mut r) };
        let x = vec![small_rational(&f, &mut r), x2];
        if x[1] == e[1] {
            arithmetic += 1;
        }
        for n in -MAX_POWER..=MAX_POWER {
            if power(&x, n, &e, &alpha).unwrap() != iterate_power(&x, n, &e, &alpha) {
                mismatches += 1;
            }
        }
    }
    let (x, e) = (vec![f.from_int(1), f.from_int(2)], vec![f.from_int(0), f.from_int(1)]);
    let mut example_ok = true;
    for n in -MAX_POWER..=MAX_POWER {
        let two_n = if n >= 0 {
            BigRational::from_integer(BigInt::from(2).pow(n as u32))
        } else {
            BigRational::new(BigInt::from(1), BigInt::from(2).pow((-n) as u32))
        };
        let expected = vec![
            Scalar::Rational(two_n.clone() - BigRational::from_integer(BigInt::from(1))),
            Scalar::Rational(two_n),
        ];
        example_ok &= power(&x, n, &e, &alpha).unwrap() == expected;
    }
    verdict(
        mismatches == 0 && example_ok && arithmetic >= POWER_PAIRS / 2,
        format!(
            "{POWER_PAIRS} pairs × |n| ≤ {MAX_POWER}: {mismatches} mismatches, {arithmetic} pairs on the arithmetic branch; x=(1,2), e=(0,1) gives (2ⁿ−1, 2ⁿ): {example_ok}"
        ),
    )
}

fn mat2_mul(a: &[[Scalar; 2]; 2], b: &[[Scalar; 2]; 2]) -> [[Scalar; 2]; 2] {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][0].clone() * b[0][j].clone() + a[i][1].clone() * b[1][j].clone()))
}

fn group_structure() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;

    // semidirect decomposition over GF(5)², e = (0, 1), α = x₂
    let f = gf(5);
    let alpha = AffineFunctional::coordinate(2, 1, &f.zero());
    let els = f.elements().unwrap();
    let e = vec![f.zero(), f.one()];
    let carrier: Vec<Vec<Scalar>> = els
        .iter()
        .flat_map(|a| els.iter().filter(|b| !b.is_zero()).map(move |b| vec![a.clone(), b.clone()]))
        .collect();
    let n_group: Vec<Vec<Scalar>> = els.iter().map(|a| vec![a.clone(), f.one()]).collect();
    let k_group: Vec<Vec<Scalar>> = els.iter().filter(|s| !s.is_zero()).map(|s| vec![f.zero(), s.clone()]).collect();
    let mut unique = 0;
    for g in &carrier {
        let parts = semidirect_decompose(g, &e, &alpha, None).unwrap();
        let left: Vec<_> = n_group
            .iter()
            .flat_map(|n| k_group.iter().map(move |k| (n, k)))
            .filter(|(n, k)| group_product(n, k, &e, &alpha).unwrap() == *g)
            .collect();
        let right: Vec<_> = k_group
            .iter()
            .flat_map(|k| n_group.iter().map(move |n| (k, n)))
            .filter(|(k, n)| group_product(k, n, &e, &alpha).unwrap() == *g)
            .collect();
        if left.len() == 1
            && *left[0].0 == parts.n
            && *left[0].1 == parts.k
            && right.len() == 1
            && *right[0].1 == parts.n_right
        {
            unique += 1;
        }
    }
    ok &= carrier.len() == 20 && unique == 20;
    notes.push(format!("GF(5): {unique}/{} elements decompose uniquely", carrier.len()));

    // ga1_matrix is a bijection onto GA(1, p)
    for p in [3u32, 5] {
        let f = gf(p);
        let alpha = AffineFunctional::coordinate(2, 1, &f.zero());
        let els = f.elements().unwrap();
        let e = vec![f.zero(), f.one()];
        let mut image = BTreeSet::new();
        let mut count = 0;
        for a in &els {
            for b in els.iter().filter(|b| !b.is_zero()) {
                let m = ga1_matrix(&[a.clone(), b.clone()], &e, &alpha).unwrap();
                image.insert(format!("{m:?}"));
                count += 1;
            }
        }
        let (zero, one) = (f.zero(), f.one());
        let ga1: BTreeSet<String> = els
            .iter()
            .filter(|r| !r.is_zero())
            .flat_map(|r| els.iter().map(|s| format!("{:?}", [[r.clone(), s.clone()], [zero.clone(), one.clone()]])))
            .collect();
        let bijective = count == image.len() && image == ga1 && ga1.len() == (p * (p - 1)) as usize;
        ok &= bijective;
        notes.push(format!("GA(1,{p}): {} images of {count} elements, |GA| = {}, bijective {bijective}", image.len(), ga1.len()));
    }

    // M(z·z') = M(z')·M(z)
    let f = q();
    let alpha = AffineFunctional::coordinate(2, 1, &f.zero());
    let mut r = rng(30);
    let mut failures = 0;
    for _ in 0..GA1_COMPOSITION_SAMPLES {
        let mut member = || loop {
            let p = vec![small_rational(&f, &mut r), small_rational(&f, &mut r)];
            if !p[1].is_zero() {
                break p;
            }
        };
        let (z, z2) = (member(), member());
        let e = vec![small_rational(&f, &mut r), f.one()];
        let zz = group_product(&z, &z2, &e, &alpha).unwrap();
        let m = |p: &[Scalar]| ga1_matrix(p, &e, &alpha).unwrap();
        if m(&zz) != mat2_mul(&m(&z2), &m(&z)) {
            failures += 1;
        }
    }
    ok &= failures == 0;
    notes.push(format!("reversed composition: {failures}/{GA1_COMPOSITION_SAMPLES} failures"));
    verdict(ok, notes.join("; "))
}

fn matrix_torsor() -> Verdict {
    let f = gf(7);
    let m = |rows: [[i64; 2]; 2]| Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| f.from_int(v)).collect()).collect()).unwrap();
    let mut ok = true;
    let mut notes = Vec::new();
    for (k, anchor) in [m([[1, 0], [0, 1]]), m([[1, 1], [0, 1]])].into_iter().enumerate() {
        let space = MatrixTorsorSpace::new(f.clone(), anchor.clone()).unwrap();
        let report = check_para_associative(&space, MATRIX_QUINTUPLES, 40 + k as u64);
        let para_ok = report.defined >= MATRIX_QUINTUPLES && report.failure_count == 0;

        let mut r = rng(50 + k as u64);
        let mut hom_failures = 0;
        for _ in 0..MATRIX_QUINTUPLES {
            let mut member = || loop {
                let x = Matrix::random(&f, 2, 2, &mut r);
                if !anchor.mul(&x).unwrap().det().unwrap().is_zero() {
                    break x;
                }
            };
            let (x, y, z) = (member(), member(), member());
            let w = space.trapezoid(&x, &y, &z).unwrap();
            let ay_inv = anchor.mul(&y).unwrap().inverse().unwrap();
            let rhs = anchor.mul(&x).unwrap().mul(&ay_inv).unwrap().mul(&anchor.mul(&z).unwrap()).unwrap();
            if anchor.mul(&w).unwrap() != rhs {
                hom_failures += 1;
            }
        }
        ok &= para_ok && hom_failures == 0;
        notes.push(format!(
            "A{}: para-associativity {} defined, {} failures; A-homomorphism {hom_failures}/{MATRIX_QUINTUPLES} failures",
            k + 1,
            report.defined,
            report.failure_count
        ));
    }
    verdict(ok, notes.join("; "))
}

fn finite_planes() -> Verdict {
    let mut ok = true;
    let mut notes = Vec::new();
    for q in [2u32, 3, 4, 5] {
        let ag = build_affine_plane(&gf(q)).unwrap();
        let pg = projective_completion(&ag).unwrap();
        let n = (q * q + q + 1) as usize;
        let good = check_affine_axioms(&ag).passed()
            && ag.num_points() == (q * q) as usize
            && ag.num_lines() == (q * q + q) as usize
            && pg.num_points() == n
            && pg.num_lines() == n
            && pg.lines().iter().all(|l| l.len() == (q + 1) as usize)
            && check_projective_axioms(&pg).passed();
        ok &= good;
        notes.push(format!("q={q}: {}", if good { "ok" } else { "bad" }));
    }
    for q in [2u32, 3] {
        let pg = projective_completion(&build_affine_plane(&gf(q)).unwrap()).unwrap();
        let d = check_desargues(&pg, DesarguesMode::Exhaustive).unwrap();
        ok &= d.is_desarguesian() && d.exhaustive;
        notes.push(format!("PG(2,{q}) desarguesian over {} configurations", d.configurations));
    }
    let pg3 = projective_completion(&build_affine_plane(&gf(3)).unwrap()).unwrap();
    let start = Instant::now();
    let (mut pairs, mut defined, mut failures) = (0, 0, 0);
    for a in 0..pg3.num_lines() as u32 {
        for b in (0..pg3.num_lines() as u32).filter(|&b| b != a) {
            let r = check_associativity(&pg3, a, b, ScanMode::Exhaustive).unwrap();
            pairs += 1;
            defined += r.defined;
            failures += r.failure_count;
        }
    }
    let elapsed = start.elapsed();
    ok &= failures == 0 && defined > 0 && elapsed < PG3_TIME_LIMIT;
    notes.push(format!(
        "PG(2,3) associativity over {pairs} line pairs: {defined} defined quintuples, {failures} failures, {:.1}s (limit {}s)",
        elapsed.as_secs_f64(),
        PG3_TIME_LIMIT.as_secs()
    ));
    verdict(ok, notes.join("; "))
}

/// Line through two distinct points, by scanning.
fn scan_join(plane: &FinitePlane, p: u32, q: u32) -> Option<usize> {
    plane.lines().iter().position(|l| l.contains(&p) && l.contains(&q))
}

/// Common point of two distinct lines, by scanning.
fn scan_meet(plane: &FinitePlane, l: usize, m: usize) -> Option<u32> {
    if l == m {
        return None;
    }
    plane.lines()[l].iter().copied().find(|p| plane.lines()[m].contains(p))
}

/// `(((x∨y)∧a)∨z) ∧ (((z∨y)∧b)∨x)` with `x = y ↦ z`, `z = y ↦ x`, restricted
/// to results off `a` and `b`.
fn scan_law(plane: &FinitePlane, x: u32, y: u32, z: u32, a: usize, b: usize) -> Option<u32> {
    let w = if x == y {
        z
    } else if z == y {
        x
    } else {
        let l1 = scan_join(plane, scan_meet(plane, scan_join(plane, x, y)?, a)?, z)?;
        let l2 = scan_join(plane, scan_meet(plane, scan_join(plane, z, y)?, b)?, x)?;
        scan_meet(plane, l1, l2)?
    };
    let lines = plane.lines();
    (!lines[a].contains(&w) && !lines[b].contains(&w)).then_some(w)
}

fn hall_witness() -> Verdict {
    let hall = build_hall_plane_9().unwrap();
    let invariants = hall.num_points() == 91
        && hall.num_lines() == 91
        && hall.lines().iter().all(|l| l.len() == 10)
        && check_projective_axioms(&hall).passed();
    let d = check_desargues(&hall, DesarguesMode::Sampled { samples: HALL_BUDGET, seed: 60 }).unwrap();
    let replay = d.witness.as_ref().map(|w| replay_desargues_witness(&hall, w).is_ok()).unwrap_or(false);

    // a = 0, b = 1 is a fixed, non-special choice of line pair
    let (a, b) = (0u32, 1u32);
    let r = check_associativity(&hall, a, b, ScanMode::Sampled { budget: HALL_BUDGET, seed: 61 }).unwrap();
    let confirmed = r.failures.first().is_some_and(|w| {
        let v: Vec<u32> = w.inputs.iter().map(|s| s.parse().unwrap()).collect();
        let [x, o, u, p, vv] = [v[0], v[1], v[2], v[3], v[4]];
        let (a, b) = (a as usize, b as usize);
        let lhs = scan_law(&hall, u, p, vv, a, b).and_then(|upv| scan_law(&hall, x, o, upv, a, b));
        let rhs = scan_law(&hall, x, o, u, a, b).and_then(|xou| scan_law(&hall, xou, p, vv, a, b));
        matches!((lhs, rhs), (Some(l), Some(r)) if l != r)
    });
    verdict(
        invariants && !d.is_desarguesian() && replay && r.failure_count > 0 && confirmed,
        format!(
            "91/91/10 and axioms {invariants}; Desargues counterexample after {} configurations, replayed {replay}; associativity (a={a}, b={b}): {} failures among {} defined of {} quintuples, first witness re-derived by line scans {confirmed}",
            d.configurations, r.failure_count, r.defined, r.samples
        ),
    )
}

fn values_agree(exact: &OutValue, float: &OutValue) -> bool {
    let (e, f) = (exact.flatten(), float.flatten());
    std::mem::discriminant(exact) == std::mem::discriminant(float)
        && e.len() == f.len()
        && e.iter().zip(&f).all(|(a, b)| (a - b).abs() <= FLOAT_REL_TOL * a.abs().max(1.0))
}

fn scene_engine() -> Verdict {
    let mut compared = 0;
    let mut disagreements = Vec::new();
    for (name, text) in DEMOS {
        let scene = Scene::from_json_str(text).unwrap();
        let (exact, float) = (evaluate(&scene, Backend::Exact), evaluate(&scene, Backend::Float));
        for (e, f) in exact.nodes.iter().zip(&float.nodes) {
            let same = e.status == f.status
                && match (&e.value, &f.value) {
                    (Some(a), Some(b)) => values_agree(a, b),
                    (None, None) => true,
                    _ => false,
                };
            compared += 1;
            if !same {
                disagreements.push(format!("{name}.{}", e.id));
            }
        }
    }

    let mut r = rng(70);
    let mut scenes: Vec<Scene> = DEMOS.iter().map(|(n, _)| Scene::from_json_str(demo(n).unwrap()).unwrap()).collect();
    let (mut panics, mut nan_values, mut rejected, mut undefined) = (0, 0, 0, 0);
    for _ in 0..FUZZ_DRAGS {
        let k = r.random_range(0..scenes.len());
        let scene = &mut scenes[k];
        let free: Vec<String> = scene.free_objects().iter().map(|s| s.to_string()).collect();
        let target = &free[r.random_range(0..free.len())];
        let current = evaluate(scene, Backend::Float);
        let points: Vec<Vec<f64>> = current
            .nodes
            .iter()
            .filter_map(|n| match &n.value {
                Some(OutValue::Point(_)) => current.point(&n.id),
                _ => None,
            })
            .filter(|p| p.iter().all(|c| c.abs() <= CANVAS))
            .collect();
        let is_point = current.point(target).is_some() || matches!(current.get(target).map(|n| &n.value), Some(None));
        let value = if is_point {
            match r.random_range(0..4) {
                // onto another point
                0 if !points.is_empty() => {
                    let p = &points[r.random_range(0..points.len())];
                    serde_json::json!({ "x": p[0], "y": p[1] })
                }
                // onto a horizontal boundary or the axis
                1 => serde_json::json!({ "x": r.random_range(-5.0..5.0), "y": 0.0 }),
                2 => serde_json::json!({ "x": r.random_range(-5..5), "y": r.random_range(-5..5) }),
                _ => serde_json::json!({ "x": r.random_range(-10.0..10.0), "y": r.random_range(-10.0..10.0) }),
            }
        } else {
            let c = |r: &mut ChaCha8Rng| r.random_range(-3..=3);
            serde_json::json!({ "u": c(&mut r), "v": c(&mut r), "c": c(&mut r) })
        };
        let step = catch_unwind(AssertUnwindSafe(|| {
            let mut next = scene.clone();
            if next.set_free_object(target, &value).is_err() {
                return None;
            }
            let results = [evaluate(&next, Backend::Exact), evaluate(&next, Backend::Float)];
            Some((next, results))
        }));
        match step {
            Err(_) => panics += 1,
            Ok(None) => rejected += 1,
            Ok(Some((next, results))) => {
                for res in &results {
                    for n in &res.nodes {
                        if n.status == NodeStatus::Undefined {
                            undefined += 1;
                            if n.diagnostic.is_none() {
                                nan_values += 1;
                            }
                        }
                        if let Some(v) = &n.value {
                            if v.flatten().iter().any(|c| !c.is_finite()) {
                                nan_values += 1;
                            }
                        }
                    }
                }
                *scene = next;
            }
        }
    }
    verdict(
        disagreements.is_empty() && panics == 0 && nan_values == 0,
        format!(
            "{compared} demo nodes compared within {FLOAT_REL_TOL:e} relative, disagreements {disagreements:?}; {FUZZ_DRAGS} drags: {panics} panics, {nan_values} non-finite or undiagnosed values, {undefined} undefined node statuses, {rejected} invalid drags rejected"
        ),
    )
}

fn main() -> ExitCode {
    // keep panic output of the fuzz run quiet; panics are counted instead
    std::panic::set_hook(Box::new(|_| {}));
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("torsor laws", torsor_laws),
        ("oracle equivalence", oracle_equivalence),
        ("multiplicative homomorphism", hom_mult),
        ("powers", powers),
        ("group structure", group_structure),
        ("matrix torsor", matrix_torsor),
        ("finite planes", finite_planes),
        ("non-Desarguesian witness", hall_witness),
        ("scene engine", scene_engine),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let v = catch_unwind(check).unwrap_or_else(|_| verdict(false, "panicked"));
        if !v.pass {
            failed += 1;
        }
        println!(
            "{} {name} [{:.1}s]: {}",
            if v.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            v.detail
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

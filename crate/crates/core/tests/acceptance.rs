//! Acceptance suite. Run with `cargo test -p stategeom --test acceptance`.
//! Prints one PASS/FAIL line per criterion and exits nonzero on any failure.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use stategeom::gallery;
use stategeom::quantum::effect_lower_bound_report;
use stategeom::{
    ball_detection_ratio, detection_ratio, distinct_decompositions, enumerate_faces,
    equator_polygon, impossibility_report, is_simplex, maximal_orthogonal_faces, mix,
    support_counter, BlochVector64, ExactScalar, ExactStateSpace, PureState64, Scalar,
};

type Q = ExactScalar;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn run(n: usize, name: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let in_time = elapsed < budget;
    let ok = out.ok && in_time;
    println!(
        "criterion {n}: {} {name} ({}; {:.2}s, limit {}s{})",
        if ok { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64(),
        budget.as_secs(),
        if in_time { "" } else { ", over time" }
    );
    ok
}

fn quarter_turn_ratio() -> Outcome {
    // linear vs circular, and vertical vs 45° linear
    let pairs = [
        ([0.0, 0.0, 1.0], [0.0, 1.0, 0.0]),
        ([0.0, 0.0, 1.0], [1.0, 0.0, 0.0]),
        ([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]),
    ];
    let mut worst: f64 = 0.0;
    for (a, b) in pairs {
        let r = ball_detection_ratio(&BlochVector64::new(a).unwrap(), &BlochVector64::new(b).unwrap())
            .unwrap();
        worst = worst.max((r - 0.5).abs());
    }
    outcome(worst <= 1e-9, format!("max |ratio - 1/2| = {worst:.1e}"))
}

fn effect_bound() -> Outcome {
    let results: Vec<(bool, f64)> = [2usize, 3]
        .into_par_iter()
        .flat_map(|dim| {
            (0..200u64).into_par_iter().map(move |k| {
                let mut rng = ChaCha8Rng::seed_from_u64(1000 * dim as u64 + k);
                let psi = PureState64::random(dim, &mut rng);
                let chi = PureState64::random(dim, &mut rng);
                let r = effect_lower_bound_report(&psi, &chi, 1000, k).unwrap();
                (r.holds(), r.min_value - r.bound)
            })
        })
        .collect();
    let failures = results.iter().filter(|(ok, _)| !ok).count();
    let margin = results.iter().map(|(_, m)| *m).fold(f64::INFINITY, f64::min);
    outcome(
        failures == 0 && results.len() == 400,
        format!(
            "{} pairs x 1000 effects, {failures} failing pairs, min margin {margin:.1e}",
            results.len()
        ),
    )
}

fn ratio_at(space: &ExactStateSpace, j: usize) -> f64 {
    let v = space.vertices();
    detection_ratio(space, &v[j], &v[0]).unwrap().ratio.as_f64()
}

fn polygon_convergence() -> Outcome {
    let target = |deg: f64| (1.0 + deg.to_radians().cos()) / 2.0;
    let p360 = equator_polygon(360).unwrap();
    let mut detail = Vec::new();
    let mut ok = p360.num_vertices() == 360;
    for deg in [1usize, 90, 179] {
        let err = (ratio_at(&p360, deg) - target(deg as f64)).abs();
        ok &= err <= 5e-3;
        detail.push(format!("{deg}°: {err:.1e}"));
    }
    let mut errs = Vec::new();
    for n in [8usize, 36, 360] {
        let p = if n == 360 { p360.clone() } else { equator_polygon(n).unwrap() };
        errs.push((ratio_at(&p, n / 4) - 0.5).abs());
    }
    ok &= errs.windows(2).all(|w| w[1] < w[0]);
    detail.push(format!(
        "90° errors N=8,36,360: {:.1e}, {:.1e}, {:.1e}",
        errs[0], errs[1], errs[2]
    ));
    outcome(ok, detail.join(", "))
}

fn lattice_counts() -> Outcome {
    let cases = [
        (gallery::square(), 10usize),
        (gallery::triangle(), 8),
        (gallery::cube(), 28),
        (gallery::pentagon(), 12),
    ];
    let mut ok = true;
    let mut detail = Vec::new();
    for (space, want) in cases {
        let lattice = enumerate_faces(&space).unwrap();
        let certified = lattice.faces.iter().zip(&lattice.certificates).all(|(face, phi)| {
            phi.is_normal(&space).unwrap()
                && &phi.one_set(&space).unwrap() == face
                && (face.is_empty() || face.is_full() || support_counter(&space, face).is_ok())
        });
        ok &= lattice.len() == want && certified;
        detail.push(format!("{} {}", space.label(), lattice.len()));
    }
    outcome(ok, detail.join(", "))
}

fn no_orthocomplement() -> Outcome {
    let mut ok = true;
    let mut counts = Vec::new();
    for (space, want) in [(gallery::square(), 2usize), (gallery::triangle(), 1)] {
        for i in 0..space.num_vertices() {
            let face = space.face(&[i]).unwrap();
            let got = maximal_orthogonal_faces(&space, &face).unwrap().len();
            ok &= got == want;
            counts.push(got.to_string());
        }
    }
    outcome(ok, format!("square then triangle vertex counts [{}]", counts.join(", ")))
}

fn distributive_violations(space: &ExactStateSpace) -> usize {
    let l = enumerate_faces(space).unwrap();
    let n = l.len();
    let mut bad = 0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if l.meet(l.join(a, b), c) != l.join(l.meet(a, c), l.meet(b, c)) {
                    bad += 1;
                }
            }
        }
    }
    bad
}

fn non_distributive() -> Outcome {
    let sq = distributive_violations(&gallery::square());
    let tri = distributive_violations(&gallery::triangle());
    outcome(
        sq > 0 && tri == 0,
        format!("violating triples: square {sq}, triangle {tri}"),
    )
}

fn indistinguishable_mixtures() -> Outcome {
    let sq = gallery::square();
    let center = [Q::from_ratio(1, 2), Q::from_ratio(1, 2)];
    let Some((a, b)) = distinct_decompositions(&sq, &center).unwrap() else {
        return outcome(false, "square center reported unique");
    };
    let disjoint = a.support().iter().all(|i| !b.support().contains(i));
    let same = a.remix(&sq).unwrap() == b.remix(&sq).unwrap() && a.remix(&sq).unwrap().0 == center;

    let tri = gallery::triangle();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut unique = 0;
    for _ in 0..50 {
        let w: Vec<i64> = (0..3).map(|_| rng.random_range(1..=97)).collect();
        let total: i64 = w.iter().sum();
        let terms: Vec<(Q, &[Q])> = w
            .iter()
            .zip(tri.vertices())
            .map(|(&wi, v)| (Q::from_ratio(wi, total), v.as_slice()))
            .collect();
        let x = mix(&terms).unwrap();
        if distinct_decompositions(&tri, &x).unwrap().is_none() {
            unique += 1;
        }
    }
    let ok = disjoint && same && !is_simplex(&sq) && is_simplex(&tri) && unique == 50;
    outcome(
        ok,
        format!(
            "square center {a} vs {b}; is_simplex square {}, triangle {}; triangle unique {unique}/50",
            is_simplex(&sq),
            is_simplex(&tri)
        ),
    )
}

fn impossibility_law() -> Outcome {
    let spaces = gallery::gallery().unwrap();
    let rows: Vec<(String, usize, usize)> = spaces
        .par_iter()
        .map(|(name, space)| {
            let v = space.vertices();
            let x = &v[0];
            let ys = [v[1].clone(), v[v.len() / 2].clone()];
            let mut violations = 0;
            let mut samples = 0;
            for (k, y) in ys.iter().enumerate() {
                let r = impossibility_report(space, x, y, 100, 31 + k as u64).unwrap();
                violations += r.violations;
                samples += r.samples.len();
            }
            (name.clone(), samples, violations)
        })
        .collect();
    let total: usize = rows.iter().map(|r| r.2).sum();
    let all_sampled = rows.iter().all(|r| r.1 == 200);
    outcome(
        total == 0 && all_sampled && rows.len() == 8,
        format!("{} gallery spaces, 2 pairs x 100 counters each, {total} violations", rows.len()),
    )
}

fn main() {
    let secs = Duration::from_secs;
    let results = [
        run(1, "quarter-turn Bloch ratio is 1/2", secs(1), quarter_turn_ratio),
        run(2, "effects detecting psi admit at least |<psi,chi>|^2", secs(30), effect_bound),
        run(3, "polygon ratios converge to the ball", secs(60), polygon_convergence),
        run(4, "face-lattice counts with certificates", secs(10), lattice_counts),
        run(5, "maximal orthogonal faces of vertices", secs(10), no_orthocomplement),
        run(6, "square lattice is not distributive", secs(10), non_distributive),
        run(7, "square center has disjoint decompositions", secs(10), indistinguishable_mixtures),
        run(8, "sampled counters respect the detection ratio", secs(60), impossibility_law),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}

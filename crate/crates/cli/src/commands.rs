use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use stategeom::format::{space_to_json, LatticeFile};
use stategeom::gallery::gallery;
use stategeom::quantum::effect_lower_bound_report;
use stategeom::{
    ball_detection_ratio, bloch_from_pure, decompose, detection_ratio, distinct_decompositions,
    enumerate_faces, equator_polygon, is_simplex, maximal_orthogonal_faces, orthogonal,
    support_counter, transition_probability, BlochVector64, ConvexDecomposition, Error,
    ExactScalar, ExactStateSpace, PureState64, Scalar,
};

use crate::report::{counter, point, rational, rational_text};

/// Results of one subcommand: the JSON block and the human-readable text.
pub struct Output {
    pub results: Value,
    pub text: String,
    /// Exit with the domain-error status after printing (a failed check).
    pub failed: bool,
}

impl Output {
    fn ok(results: Value, text: String) -> Self {
        Output {
            results,
            text,
            failed: false,
        }
    }
}

pub type CmdResult = Result<Output, Error>;

pub fn faces(space: &ExactStateSpace) -> CmdResult {
    let l = enumerate_faces(space)?;
    let mut text = format!(
        "{}: {} faces, f-vector {:?}\n",
        space.label(),
        l.len(),
        l.f_vector()
    );
    let mut rows = Vec::new();
    for (f, phi) in l.faces.iter().zip(&l.certificates) {
        writeln!(text, "rank {:>2}  {:<12} {}", f.rank(), f.to_string(), phi).unwrap();
        rows.push(json!({
            "vertices": f.vertices(),
            "rank": f.rank(),
            "counter": counter(phi),
        }));
    }
    Ok(Output::ok(
        json!({ "label": space.label(), "f_vector": l.f_vector(), "faces": rows }),
        text,
    ))
}

pub fn lattice(space: &ExactStateSpace) -> CmdResult {
    let l = enumerate_faces(space)?;
    let n = l.len();
    let mut text = format!(
        "{}: {} faces, {} cover pairs\nHasse diagram (face -> faces covering it):\n",
        space.label(),
        n,
        l.cover_pairs.len()
    );
    for (i, f) in l.faces.iter().enumerate() {
        let ups: Vec<String> = l
            .cover_pairs
            .iter()
            .filter(|&&(a, _)| a == i)
            .map(|&(_, b)| l.faces[b].to_string())
            .collect();
        if !ups.is_empty() {
            writeln!(text, "  {f} -> {}", ups.join(" ")).unwrap();
        }
    }
    let mut violation = None;
    'search: for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if l.meet(l.join(a, b), c) != l.join(l.meet(a, c), l.meet(b, c)) {
                    violation = Some([a, b, c]);
                    break 'search;
                }
            }
        }
    }
    match violation {
        None => text.push_str("distributive: true\n"),
        Some([a, b, c]) => writeln!(
            text,
            "distributive: false (a = {}, b = {}, c = {}: (a∨b)∧c = {}, (a∧c)∨(b∧c) = {})",
            l.faces[a],
            l.faces[b],
            l.faces[c],
            l.faces[l.meet(l.join(a, b), c)],
            l.faces[l.join(l.meet(a, c), l.meet(b, c))]
        )
        .unwrap(),
    }
    let file = LatticeFile::from_lattice(&l);
    let triple = violation.map(|t| t.map(|i| l.faces[i].vertices().to_vec()));
    Ok(Output::ok(
        json!({
            "faces": file.faces,
            "cover_pairs": file.cover_pairs,
            "distributive": violation.is_none(),
            "violation": triple,
        }),
        text,
    ))
}

pub fn ratio(space: &ExactStateSpace, x: &[ExactScalar], y: &[ExactScalar]) -> CmdResult {
    let r = detection_ratio(space, y, x)?;
    let text = format!(
        "y:x = {}\nx = {}\ny = {}\ncounter: {}\n",
        rational_text(&r.ratio),
        r.x,
        r.y,
        r.counter
    );
    Ok(Output::ok(
        json!({
            "ratio": rational(&r.ratio),
            "x": point(&r.x),
            "y": point(&r.y),
            "counter": counter(&r.counter),
        }),
        text,
    ))
}

pub fn orth(space: &ExactStateSpace, face: &[usize], other: Option<&[usize]>) -> CmdResult {
    let p = space.face(face)?;
    match other {
        Some(other) => {
            let q = space.face(other)?;
            let o = orthogonal(space, &p, &q)?;
            let mut text = format!("{p} ⊥ {q}: {}\n", o.orthogonal);
            if let Some(phi) = &o.witness {
                writeln!(text, "witness: {phi}").unwrap();
            }
            Ok(Output::ok(
                json!({
                    "face": p.vertices(),
                    "other": q.vertices(),
                    "orthogonal": o.orthogonal,
                    "witness": o.witness.as_ref().map(counter),
                }),
                text,
            ))
        }
        None => {
            let maxima = maximal_orthogonal_faces(space, &p)?;
            let names: Vec<String> = maxima.iter().map(|f| f.to_string()).collect();
            let text = format!(
                "maximal faces orthogonal to {p}: {} ({})\n",
                names.join(" "),
                maxima.len()
            );
            let faces: Vec<&[usize]> = maxima.iter().map(|f| f.vertices()).collect();
            Ok(Output::ok(json!({ "face": p.vertices(), "maximal": faces }), text))
        }
    }
}

pub fn support(space: &ExactStateSpace, face: &[usize]) -> CmdResult {
    let f = space.face(face)?;
    let phi = support_counter(space, &f)?;
    let values = phi.vertex_values(space)?;
    let shown: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    let text = format!(
        "support counter of {f}: {phi}\nvertex values: {}\n",
        shown.join(", ")
    );
    Ok(Output::ok(
        json!({
            "face": f.vertices(),
            "counter": counter(&phi),
            "vertex_values": shown,
        }),
        text,
    ))
}

fn terms_json(d: &ConvexDecomposition<ExactScalar>) -> Value {
    d.terms
        .iter()
        .map(|(w, i)| json!({ "weight": rational(w), "vertex": i }))
        .collect()
}

pub fn decomposition(space: &ExactStateSpace, x: &[ExactScalar]) -> CmdResult {
    let d = decompose(space, x)?;
    let other = distinct_decompositions(space, x)?;
    let mut text = format!("x = {}\ndecomposition: {d}\n", d.target);
    match &other {
        Some((_, b)) => writeln!(text, "alternative: {b}\nunique: false").unwrap(),
        None => text.push_str("unique: true\n"),
    }
    Ok(Output::ok(
        json!({
            "point": point(x),
            "decomposition": terms_json(&d),
            "alternative": other.as_ref().map(|(_, b)| terms_json(b)),
            "unique": other.is_none(),
        }),
        text,
    ))
}

pub fn simplex_check(space: &ExactStateSpace) -> CmdResult {
    let s = is_simplex(space);
    let text = format!(
        "{s}\nextreme points: {}, affine dimension: {}\n",
        space.num_vertices(),
        space.affine_dim()
    );
    Ok(Output::ok(
        json!({
            "simplex": s,
            "extreme_points": space.num_vertices(),
            "affine_dim": space.affine_dim(),
        }),
        text,
    ))
}

struct CheckRow {
    name: String,
    value: f64,
    expected: f64,
    tolerance: f64,
    /// One-sided: passes when `value >= expected - tolerance`.
    lower_bound: bool,
}

impl CheckRow {
    fn new(name: impl Into<String>, value: f64, expected: f64, tolerance: f64) -> Self {
        CheckRow {
            name: name.into(),
            value,
            expected,
            tolerance,
            lower_bound: false,
        }
    }

    fn pass(&self) -> bool {
        if self.lower_bound {
            self.value >= self.expected - self.tolerance
        } else {
            (self.value - self.expected).abs() <= self.tolerance
        }
    }
}

pub fn quantum_check(seed: u64, pairs: usize, trials: usize) -> CmdResult {
    let mut rows = Vec::new();
    let b = |v: [f64; 3]| BlochVector64::new(v).expect("unit vector");
    for (name, n1, n2, want) in [
        ("ball ratio, linear vs circular", [0.0, 0.0, 1.0], [0.0, 1.0, 0.0], 0.5),
        ("ball ratio, vertical vs 45°", [0.0, 0.0, 1.0], [1.0, 0.0, 0.0], 0.5),
        ("ball ratio, orthogonal", [0.0, 0.0, 1.0], [0.0, 0.0, -1.0], 0.0),
    ] {
        rows.push(CheckRow::new(
            name,
            ball_detection_ratio(&b(n1), &b(n2))?,
            want,
            1e-9,
        ));
    }

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let up = PureState64::from_real(&[1.0, 0.0])?;
    let diag = PureState64::from_real(&[s, s])?;
    rows.push(CheckRow::new(
        "|<(1,0),(1,1)/√2>|² vs ball",
        transition_probability(&up, &diag)?,
        ball_detection_ratio(&bloch_from_pure(&up)?, &bloch_from_pure(&diag)?)?,
        1e-9,
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for dim in [2usize, 3] {
        let mut worst = f64::INFINITY;
        for k in 0..pairs {
            let psi = PureState64::random(dim, &mut rng);
            let chi = PureState64::random(dim, &mut rng);
            let r = effect_lower_bound_report(&psi, &chi, trials, seed.wrapping_add(k as u64))?;
            worst = worst.min(r.min_value - r.bound);
        }
        rows.push(CheckRow {
            lower_bound: true,
            ..CheckRow::new(format!("effects, n={dim}, min <E> - |<ψ,χ>|²"), worst, 0.0, 1e-9)
        });
    }

    for n in [8usize, 36, 360] {
        let p = equator_polygon(n)?;
        let v = p.vertices();
        let r = detection_ratio(&p, &v[n / 4], &v[0])?.ratio.as_f64();
        // Regular N-gon, quarter turn apart: (1 - tan(π/N)) / 2.
        let closed = (1.0 - (std::f64::consts::PI / n as f64).tan()) / 2.0;
        rows.push(CheckRow::new(format!("{n}-gon ratio at 90°"), r, closed, 1e-9));
        if n == 360 {
            rows.push(CheckRow::new("360-gon vs ball at 90°", r, 0.5, 5e-3));
        }
    }

    let mut text = format!(
        "{:<36} {:>14} {:>14} {:>9}  pass\n",
        "check", "value", "expected", "diff"
    );
    for r in &rows {
        writeln!(
            text,
            "{:<36} {:>14.9} {:>14.9} {:>9.1e}  {}",
            r.name,
            r.value,
            r.expected,
            r.value - r.expected,
            if r.pass() { "yes" } else { "NO" }
        )
        .unwrap();
    }
    let all = rows.iter().all(CheckRow::pass);
    writeln!(
        text,
        "seed {seed}, {pairs} pairs x {trials} effects per dimension; all pass: {all}"
    )
    .unwrap();
    let json_rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "check": r.name,
                "value": r.value,
                "expected": r.expected,
                "tolerance": r.tolerance,
                "one_sided": r.lower_bound,
                "pass": r.pass(),
            })
        })
        .collect();
    Ok(Output {
        results: json!({ "seed": seed, "pairs": pairs, "trials": trials, "rows": json_rows, "all_pass": all }),
        text,
        failed: !all,
    })
}

pub fn write_gallery(out: &Path) -> CmdResult {
    fs::create_dir_all(out)
        .map_err(|e| Error::Input(format!("cannot create {}: {e}", out.display())))?;
    let mut files = Vec::new();
    let mut text = String::new();
    for (stem, space) in gallery()? {
        let path = out.join(format!("{stem}.json"));
        fs::write(&path, space_to_json(&space) + "\n")
            .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
        writeln!(
            text,
            "wrote {} ({} extreme points)",
            path.display(),
            space.num_vertices()
        )
        .unwrap();
        files.push(json!({
            "path": path.display().to_string(),
            "label": space.label(),
            "extreme_points": space.num_vertices(),
        }));
    }
    Ok(Output::ok(json!({ "files": files }), text))
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_stategeom");

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn with_gallery() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["gallery", "--out", "."]);
    assert!(o.status.success(), "{}", stderr(&o));
    dir
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

#[test]
fn gallery_files() {
    let dir = with_gallery();
    let count = |stem: &str| {
        let v: Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join(format!("{stem}.json"))).unwrap())
                .unwrap();
        v["vertices"].as_array().unwrap().len()
    };
    assert_eq!(count("square"), 4);
    assert_eq!(count("triangle"), 3);
    assert_eq!(count("pentagon"), 5);
    assert_eq!(count("cube"), 8);
    assert_eq!(count("360-gon"), 360);
    assert_eq!(count("bloch-octahedron"), 6);
}

#[test]
fn simplex_check_results() {
    let dir = with_gallery();
    let t = run(dir.path(), &["simplex-check", "--space", "triangle.json", "--json"]);
    assert_eq!(t.status.code(), Some(0));
    assert_eq!(json(&t)["results"]["simplex"], true);
    let s = run(dir.path(), &["simplex-check", "--space", "square.json", "--json"]);
    assert_eq!(json(&s)["results"]["simplex"], false);
}

#[test]
fn ratio_between_opposite_square_corners_is_zero() {
    let dir = with_gallery();
    let o = run(
        dir.path(),
        &["ratio", "--space", "square.json", "--x", "0", "--y", "2", "--json"],
    );
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["command"], "ratio");
    assert_eq!(v["results"]["ratio"]["value"], "0");
}

#[test]
fn ratio_with_explicit_points() {
    let dir = with_gallery();
    // Edge midpoint against a vertex of that edge: any counter that is 1 on
    // the midpoint is 1 on the whole edge.
    let o = run(
        dir.path(),
        &["ratio", "--space", "square.json", "--x-point", "1,1/2", "--y", "1", "--json"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json(&o)["results"]["ratio"]["value"], "1");
}

#[test]
fn interior_state_is_a_domain_error() {
    let dir = with_gallery();
    let o = run(
        dir.path(),
        &["ratio", "--space", "square.json", "--x-point", "1/2,1/2", "--y", "0"],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("state not detectable with certainty"));
    assert!(stdout(&o).is_empty());

    let j = run(
        dir.path(),
        &["ratio", "--space", "square.json", "--x-point", "1/2,1/2", "--y", "0", "--json"],
    );
    assert_eq!(j.status.code(), Some(1));
    assert_eq!(json(&j)["results"]["error"]["kind"], "domain");
}

#[test]
fn outside_point_is_a_domain_error() {
    let dir = with_gallery();
    let o = run(dir.path(), &["decompose", "--space", "square.json", "--point", "2,0"]);
    assert_eq!(o.status.code(), Some(1));
    // Well-formed indices that do not make up a face.
    let f = run(dir.path(), &["counter", "--space", "square.json", "--face", "0,2"]);
    assert_eq!(f.status.code(), Some(1));
    assert!(stderr(&f).contains("does not span a face"));
}

#[test]
fn input_errors_exit_two() {
    let dir = with_gallery();
    fs::write(dir.path().join("bad.json"), "{\"label\": 3}").unwrap();
    let cases: &[&[&str]] = &[
        &["faces", "--space", "missing.json"],
        &["faces", "--space", "bad.json"],
        &["ratio", "--space", "square.json", "--x", "9", "--y", "0"],
        &["ratio", "--space", "square.json", "--x-point", "1/0,1", "--y", "0"],
        &["counter", "--space", "square.json", "--face", "0,7"],
        &["decompose", "--space", "square.json", "--point", "1/2"],
        &["frobnicate"],
        &["ratio", "--space", "square.json", "--y", "0"],
    ];
    for args in cases {
        let o = run(dir.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty(), "{args:?}");
    }
}

#[test]
fn unwritable_gallery_directory_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let o = run(dir.path(), &["gallery", "--out", "file/sub"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn size_limit_exits_one() {
    let dir = with_gallery();
    let o = run(dir.path(), &["faces", "--space", "360-gon.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("face enumeration is limited"));
}

#[test]
fn json_is_byte_identical_across_runs() {
    let dir = with_gallery();
    let commands: &[&[&str]] = &[
        &["faces", "--space", "cube.json", "--json"],
        &["lattice", "--space", "pentagon.json", "--json"],
        &["ratio", "--space", "8-gon.json", "--x", "0", "--y", "3", "--json"],
        &["orth", "--space", "square.json", "--face", "0", "--other", "1,2", "--json"],
        &["decompose", "--space", "square.json", "--point", "1/2,1/2", "--json"],
        &["quantum-check", "--pairs", "5", "--trials", "20", "--json"],
    ];
    for args in commands {
        let a = run(dir.path(), args);
        let b = run(dir.path(), args);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        let v = json(&a);
        assert!(v.get("timing_ms").is_none());
        assert_eq!(v["input_digest"].as_str().unwrap().len(), 64);
    }
}

#[test]
fn digest_tracks_arguments_and_file_bytes() {
    let dir = with_gallery();
    let digest = |args: &[&str]| json(&run(dir.path(), args))["input_digest"].clone();
    let base = digest(&["simplex-check", "--space", "square.json", "--json"]);
    assert_eq!(base, digest(&["--json", "simplex-check", "--space", "square.json"]));
    assert_eq!(
        base,
        digest(&["simplex-check", "--space", "square.json", "--json", "--timing"])
    );
    assert_ne!(base, digest(&["simplex-check", "--space", "triangle.json", "--json"]));

    let copy = dir.path().join("copy.json");
    fs::copy(dir.path().join("square.json"), &copy).unwrap();
    let before = digest(&["simplex-check", "--space", "copy.json", "--json"]);
    let text = fs::read_to_string(&copy).unwrap();
    fs::write(&copy, text.replace("\"square\"", "\"square2\"")).unwrap();
    assert_ne!(before, digest(&["simplex-check", "--space", "copy.json", "--json"]));
}

#[test]
fn timing_flag_adds_timing() {
    let dir = with_gallery();
    let o = run(
        dir.path(),
        &["simplex-check", "--space", "square.json", "--json", "--timing"],
    );
    assert!(json(&o)["timing_ms"].as_f64().unwrap() >= 0.0);
}

#[test]
fn orthogonality_witness_separates_faces() {
    let dir = with_gallery();
    let o = run(
        dir.path(),
        &["orth", "--space", "square.json", "--face", "0", "--other", "1,2", "--json"],
    );
    let r = &json(&o)["results"];
    assert_eq!(r["orthogonal"], true);
    assert_eq!(r["witness"]["a"], serde_json::json!(["-1", "0"]));
    assert_eq!(r["witness"]["b"], "1");

    let adj = run(
        dir.path(),
        &["orth", "--space", "pentagon.json", "--face", "0", "--other", "1", "--json"],
    );
    assert_eq!(json(&adj)["results"]["orthogonal"], false);
}

#[test]
fn lattice_reports_distributivity() {
    let dir = with_gallery();
    let tri = json(&run(dir.path(), &["lattice", "--space", "triangle.json", "--json"]));
    assert_eq!(tri["results"]["distributive"], true);
    assert!(tri["results"]["violation"].is_null());
    let sq = json(&run(dir.path(), &["lattice", "--space", "square.json", "--json"]));
    assert_eq!(sq["results"]["distributive"], false);
    assert_eq!(sq["results"]["cover_pairs"].as_array().unwrap().len(), 16);
}

#[test]
fn quantum_check_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["quantum-check", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v = json(&o);
    assert_eq!(v["results"]["all_pass"], true);
    assert!(v["results"]["rows"].as_array().unwrap().len() >= 9);
}

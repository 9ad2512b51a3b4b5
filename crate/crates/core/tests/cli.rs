use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use dirichlet::generate::perturbed;
use dirichlet::input::{PairingSpec, PolygonInput};
use dirichlet::pipeline::to_json;

fn dirichlet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirichlet")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn generate(dir: &Path, genus: usize) -> std::path::PathBuf {
    let path = dir.join(format!("regular{genus}.json"));
    let out = dirichlet(&["generate", "regular", "--genus", &genus.to_string(), "--out", s(&path)]);
    assert!(out.status.success());
    path
}

#[test]
fn generated_polygons_validate() {
    let dir = tempfile::tempdir().unwrap();
    for g in 2..=3 {
        let path = generate(dir.path(), g);
        let out = dirichlet(&["validate", s(&path)]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
        assert!(String::from_utf8_lossy(&out.stdout).contains("PASS"));
    }
}

#[test]
fn generate_writes_to_stdout_without_out() {
    let out = dirichlet(&["generate", "perturbed", "--genus", "2", "--seed", "4"]);
    assert!(out.status.success());
    let raw = PolygonInput::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(raw, perturbed(2, 4).unwrap());
}

#[test]
fn compute_writes_the_domain() {
    let dir = tempfile::tempdir().unwrap();
    let input = generate(dir.path(), 2);
    let output = dir.path().join("domain.json");
    let out = dirichlet(&["compute", s(&input), "--out", s(&output), "--samples", "300"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = String::from_utf8(out.stdout).unwrap();
    assert!(summary.trim_end().ends_with("PASS"), "{summary}");

    let domain: serde_json::Value = serde_json::from_str(&fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(domain["genus"], 2);
    let area = domain["area"].as_f64().unwrap();
    assert!((area - 4.0 * std::f64::consts::PI).abs() < 1e-8);
    let sides = domain["vertices"].as_array().unwrap().len();
    assert_eq!(domain["pairings"].as_array().unwrap().len(), sides);
    assert!(domain["pairings"][0]["word"].is_string());
    assert_eq!(domain["pairings"][0]["matrix"].as_array().unwrap().len(), 4);

    // The domain is accepted back as an input.
    let again = dirichlet(&["validate", s(&output), "--tol", "angle=1e-7"]);
    assert_eq!(again.status.code(), Some(0), "{}", String::from_utf8_lossy(&again.stdout));
}

#[test]
fn compute_prints_json_without_out() {
    let dir = tempfile::tempdir().unwrap();
    let input = generate(dir.path(), 2);
    let out = dirichlet(&["compute", s(&input), "--samples", "100", "--tol", "1e-9", "--tol", "merge=1e-7"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(value["center"].is_array());
    assert!(String::from_utf8_lossy(&out.stderr).contains("dirichlet domain"));
}

#[test]
fn stages_and_svg_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("p.json");
    fs::write(&input, to_json(&perturbed(2, 6).unwrap()).unwrap()).unwrap();
    let stages = dir.path().join("stages");
    let svg = dir.path().join("all.svg");
    let out = dirichlet(&[
        "compute",
        s(&input),
        "--out",
        s(&dir.path().join("d.json")),
        "--svg",
        s(&svg),
        "--dump-stages",
        s(&stages),
        "--samples",
        "100",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = fs::read_to_string(&svg).unwrap();
    assert_eq!(doc.matches("<g ").count(), 5);
    for name in ["input", "topological", "convex", "delaunay", "dirichlet"] {
        assert!(stages.join(format!("{name}.json")).is_file(), "{name}.json");
        assert!(stages.join(format!("{name}.svg")).is_file(), "{name}.svg");
    }
}

#[test]
fn malformed_input_exits_with_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"vertices": [[0.1, 0.2]], "pairings": "nope"}"#).unwrap();
    assert_eq!(dirichlet(&["compute", s(&path)]).status.code(), Some(1));
    assert_eq!(dirichlet(&["validate", s(&path)]).status.code(), Some(1));
    assert_eq!(dirichlet(&["validate", s(&dir.path().join("missing.json"))]).status.code(), Some(1));

    let good = generate(dir.path(), 2);
    assert_eq!(dirichlet(&["compute", s(&good), "--tol", "geom=abc"]).status.code(), Some(1));
    assert_eq!(dirichlet(&["compute", s(&good), "--tol", "nonsense=1"]).status.code(), Some(1));
}

#[test]
fn side_paired_with_itself_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let mut raw: PolygonInput = PolygonInput::read(&generate(dir.path(), 2)).unwrap();
    raw.generators = None;
    raw.pairings[0] = PairingSpec::Pair([0, 0]);
    let path = dir.path().join("selfpair.json");
    fs::write(&path, to_json(&raw).unwrap()).unwrap();
    let out = dirichlet(&["compute", s(&path)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("involution"));
}

#[test]
fn failing_angle_sums_exit_with_2_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let mut raw: PolygonInput = PolygonInput::read(&generate(dir.path(), 2)).unwrap();
    raw.generators = None;
    raw.vertices[3][0] += 1e-3;
    let path = dir.path().join("moved.json");
    fs::write(&path, to_json(&raw).unwrap()).unwrap();
    let out = dirichlet(&["validate", s(&path)]);
    assert_eq!(out.status.code(), Some(2));
    let report = String::from_utf8_lossy(&out.stdout);
    assert!(report.contains("orbit"), "{report}");
    assert!(report.contains("FAIL"), "{report}");
    assert_eq!(dirichlet(&["compute", s(&path)]).status.code(), Some(2));
}

use std::f64::consts::TAU;

use proptest::prelude::*;

use dirichlet::dual::area_defect;
use dirichlet::generate::{perturbed, regular, subdivide};
use dirichlet::input::PolygonInput;
use dirichlet::pipeline::{run, validate, PipelineConfig};
use dirichlet::{ErrorKind, Tolerances};

fn quick() -> PipelineConfig {
    PipelineConfig { samples: 500, ..Default::default() }
}

fn check_run(raw: &PolygonInput, g: usize) {
    let r = run(raw, &quick()).unwrap();
    let d = &r.domain;
    assert_eq!(d.genus, g);
    assert!((4 * g..=12 * g - 6).contains(&d.side_count()), "{} sides", d.side_count());
    assert!(area_defect(d).abs() < 1e-8, "area {}", d.area);
    assert!(d.equidistance_error() < 1e-8);
    assert!(d.pairing_error() < 1e-8, "pairing {}", d.pairing_error());
    assert!(d.is_convex().unwrap() && d.contains_center().unwrap());
    assert!(r.verification.passed());
    assert_eq!(r.star.corners.len(), 12 * g - 6);
    assert!((r.star.angle_sum() - TAU).abs() < 1e-8);
    // Every pairing has a partner pairing pointing back.
    for p in &d.pairings {
        assert_eq!(d.pairings[p.partner].partner, p.side);
        assert_ne!(p.partner, p.side);
    }
}

#[test]
fn regular_surfaces() {
    for g in 2..=4 {
        check_run(&regular(g).unwrap(), g);
    }
}

#[test]
fn perturbed_surfaces() {
    for (g, seed) in [(2, 11), (3, 4), (4, 9)] {
        check_run(&perturbed(g, seed).unwrap(), g);
    }
}

#[test]
fn inputs_with_several_vertex_orbits() {
    let once = subdivide(&regular(2).unwrap(), 0, 0.4).unwrap();
    let twice = subdivide(&once, 5, 0.7).unwrap();
    assert_eq!(twice.vertices.len(), 12);
    check_run(&once, 2);
    check_run(&twice, 2);
}

#[test]
fn generic_domain_has_the_maximal_side_count() {
    let r = run(&perturbed(2, 3).unwrap(), &quick()).unwrap();
    assert_eq!(r.domain.side_count(), 18);
    assert_eq!(r.domain.merged, 0);
}

#[test]
fn regular_octagon_merges_cocircular_vertices() {
    let r = run(&regular(2).unwrap(), &quick()).unwrap();
    assert_eq!(r.domain.side_count(), 8);
}

#[test]
fn results_do_not_depend_on_the_run() {
    let raw = perturbed(3, 2).unwrap();
    let a = run(&raw, &quick()).unwrap();
    let b = run(&raw, &quick()).unwrap();
    assert_eq!(a.domain_json().unwrap(), b.domain_json().unwrap());
    assert_eq!(a.flips.flips, b.flips.flips);
}

#[test]
fn output_is_a_valid_input() {
    for raw in [regular(3).unwrap(), perturbed(2, 8).unwrap()] {
        let r = run(&raw, &quick()).unwrap();
        let again = PolygonInput::from_json(&r.domain_json().unwrap()).unwrap();
        let tol = Tolerances { angle: 1e-7, ..Default::default() };
        let v = validate(&again, &tol);
        assert!(v.passed(), "{:?}", v.report);
        // A Dirichlet domain is its own Dirichlet domain.
        let second = run(&again, &quick()).unwrap();
        assert!((second.domain.area - r.domain.area).abs() < 1e-8);
    }
}

#[test]
fn stage_dumps_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let r = run(&perturbed(2, 2).unwrap(), &quick()).unwrap();
    r.dump_stages(dir.path()).unwrap();
    for stage in ["input", "topological", "convex", "delaunay", "dirichlet"] {
        let json = std::fs::read_to_string(dir.path().join(format!("{stage}.json"))).unwrap();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!(value.is_object(), "{stage}");
        let svg = std::fs::read_to_string(dir.path().join(format!("{stage}.svg"))).unwrap();
        assert!(svg.starts_with("<svg") && svg.contains("<path"), "{stage}");
    }
    let input = PolygonInput::read(&dir.path().join("input.json")).unwrap();
    assert!(validate(&input, &Tolerances::default()).passed());
}

#[test]
fn bad_inputs_are_rejected_by_kind() {
    let mut raw = regular(2).unwrap();
    raw.vertices[3][0] += 1e-3;
    raw.generators = None;
    assert_eq!(run(&raw, &quick()).unwrap_err().kind(), ErrorKind::Validation);

    let mut raw = regular(2).unwrap();
    raw.vertices.pop();
    assert!(run(&raw, &quick()).is_err());

    let config = PipelineConfig { flip_cap: 0, ..quick() };
    assert_eq!(run(&regular(2).unwrap(), &config).unwrap_err().kind(), ErrorKind::Input);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn random_genus_two_polygons(seed in 1000u64..100_000) {
        let raw = perturbed(2, seed).unwrap();
        let config = PipelineConfig { samples: 200, ..Default::default() };
        let r = run(&raw, &config).unwrap();
        prop_assert!(area_defect(&r.domain).abs() < 1e-8);
        prop_assert!(r.convex.c_len < 2.0 * r.convex.l0);
        prop_assert!(r.duality.max_midpoint_offset < 1e-8);
        prop_assert!(r.duality.max_angle_error < 1e-6);
        prop_assert!(r.domain.inverse_pair_error() < 1e-9);
        prop_assert!(r.verification.passed());
    }
}

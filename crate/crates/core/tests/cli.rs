use std::path::{Path, PathBuf};

use oneloop::cli::run;
use oneloop::localsys::HomChain;
use oneloop::scenario::{load_invariant, load_scenario, to_json, InvariantFile, Scenario};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn oneloop(args: &[&str]) -> i32 {
    let mut all = vec!["oneloop", "--quiet"];
    all.extend_from_slice(args);
    run(all)
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn validate_and_homology_pass_on_fixtures() {
    for f in ["torus_cylinder.json", "torus_cylinder_mirror.json", "torus3.json", "n2/torus_cylinder.json"] {
        assert_eq!(oneloop(&["validate", p(&fixture(f))]), 0, "{f}");
        assert_eq!(oneloop(&["homology", p(&fixture(f))]), 0, "{f}");
        assert_eq!(oneloop(&["propagator", p(&fixture(f))]), 0, "{f}");
        assert_eq!(oneloop(&["propagator", "--seed", "9", p(&fixture(f))]), 0, "{f}");
    }
}

#[test]
fn invariant_then_compare_with_zero() {
    let dir = tempfile::tempdir().unwrap();
    let z = dir.path().join("z.json");
    assert_eq!(oneloop(&["invariant", p(&fixture("torus_cylinder.json")), "--out", p(&z)]), 0);
    let file = load_invariant(&z).unwrap();
    let mut zero = file.clone();
    zero.representative = HomChain::zero(1, file.scenario.model.edges.len());
    let zp = dir.path().join("zero.json");
    std::fs::write(&zp, to_json(&zero)).unwrap();
    assert_eq!(oneloop(&["compare", p(&z), p(&zp)]), 0);
    assert_eq!(oneloop(&["compare", p(&z), p(&z)]), 0);

    let mut half = zero;
    half.representative.coefficients[0] = oneloop::exactlin::Matrix::scalar(oneloop::exactlin::frac(1, 2));
    let hp = dir.path().join("half.json");
    std::fs::write(&hp, to_json(&half)).unwrap();
    assert_eq!(oneloop(&["compare", p(&z), p(&hp)]), 1);
}

#[test]
fn glue_and_verify_gluing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("glued.json");
    assert_eq!(oneloop(&["glue", p(&fixture("double_cylinder.json")), "--out", p(&out)]), 0);
    assert_eq!(load_scenario(&out).unwrap().model.vertices, 4);
    assert_eq!(oneloop(&["verify-gluing", p(&fixture("double_cylinder.json"))]), 0);
    assert_eq!(oneloop(&["verify-gluing", p(&fixture("double_torus3.json"))]), 0);
}

#[test]
fn example_writes_loadable_files() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["torus-cylinder", "torus-cylinder-mirror", "torus3", "double-cylinder", "double-torus3"] {
        assert_eq!(oneloop(&["example", name, "--fiber-dim", "2", "--seed", "4", "--out", p(dir.path())]), 0);
    }
    let s = load_scenario(&dir.path().join("torus_cylinder.json")).unwrap();
    assert_eq!((s.representation.fiber_dim, s.seed), (2, 4));
    assert_eq!(oneloop(&["verify-gluing", p(&dir.path().join("double_cylinder.json"))]), 0);
}

#[test]
fn shipped_fixtures_match_generator() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(oneloop(&["example", "double-cylinder", "--out", p(dir.path())]), 0);
    for f in ["torus_cylinder.json", "torus_cylinder_mirror.json", "double_cylinder.json"] {
        let fresh = std::fs::read_to_string(dir.path().join(f)).unwrap();
        let shipped = std::fs::read_to_string(fixture(f)).unwrap();
        assert_eq!(fresh, shipped, "{f}");
    }
}

#[test]
fn round_trip_is_identity() {
    let text = std::fs::read_to_string(fixture("n2/torus_cylinder.json")).unwrap();
    let s: Scenario = serde_json::from_str(&text).unwrap();
    assert_eq!(to_json(&s), text);
    let inv = InvariantFile { scenario: s.clone(), c_f: vec![0; 8], representative: HomChain::zero(2, 8) };
    let back: InvariantFile = serde_json::from_str(&to_json(&inv)).unwrap();
    assert_eq!(back, inv);
}

fn corrupt(edit: impl FnOnce(&mut serde_json::Value)) -> (tempfile::TempDir, PathBuf) {
    let text = std::fs::read_to_string(fixture("torus_cylinder.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    edit(&mut v);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    (dir, path)
}

#[test]
fn singular_holonomy_is_an_input_error() {
    let (_d, path) = corrupt(|v| v["representation"]["holonomy"][3] = serde_json::json!([["0"]]));
    let err = load_scenario(&path).unwrap_err();
    assert_eq!(err.to_string(), "holonomy not invertible: edge 3");
    assert_eq!(oneloop(&["validate", p(&path)]), 2);
}

#[test]
fn open_face_is_an_input_error() {
    let (_d, path) = corrupt(|v| {
        v["model"]["faces"][3]["word"].as_array_mut().unwrap().pop();
    });
    let err = load_scenario(&path).unwrap_err();
    assert!(err.to_string().starts_with("boundary word not closed"), "{err}");
    assert_eq!(oneloop(&["invariant", p(&path)]), 2);
}

#[test]
fn broken_morse_data_fails_validation() {
    let (_d, path) = corrupt(|v| v["trajectories"][0]["sign"] = serde_json::json!(-1));
    assert_eq!(oneloop(&["validate", p(&path)]), 1);
}

#[test]
fn parse_errors_carry_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.json");
    std::fs::write(&path, "{\n  \"name\": 3\n}").unwrap();
    let err = load_scenario(&path).unwrap_err().to_string();
    assert!(err.contains("line 2"), "{err}");
    assert_eq!(oneloop(&["homology", p(&path)]), 2);
    assert_eq!(oneloop(&["no-such-command"]), 2);
}

use std::path::PathBuf;
use std::process::{Command, Output};

use dbcalc::gauge::{field_from_flat_class, torsion_flat_cochains, FlatClassRep, GaugeField};
use dbcalc::json::field_to_json;
use dbcalc::manifold::Manifold;
use dbcalc::rmodz::qr;

fn dbcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dbcalc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_field(name: &str, a: &GaugeField) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dbcalc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(&field_to_json(a)).unwrap()).unwrap();
    path
}

fn lens_flat(s: i64) -> GaugeField {
    let m = Manifold::builtin("lens:4").unwrap();
    let (v, _) = torsion_flat_cochains(&m, 1).remove(0);
    field_from_flat_class(&m, &FlatClassRep { p: 1, r: v.scale(&qr(s, 4)) }).unwrap()
}

#[test]
fn homology_output() {
    let o = dbcalc(&["homology", "--builtin", "lens:4"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l == "H_1 = Z_4"));
    let o = dbcalc(&["homology", "--builtin", "torus2"]);
    assert!(stdout(&o).lines().any(|l| l == "b = 1,2,1"));
    let o = dbcalc(&["homology", "--builtin", "sphere:2"]);
    assert!(stdout(&o).lines().any(|l| l == "b = 1,0,1"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(dbcalc(&["homology", "--builtin", "klein"]).status.code(), Some(2));
    assert_eq!(dbcalc(&["homology", "--complex", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(dbcalc(&["verify", "nosuch"]).status.code(), Some(2));
    assert_eq!(dbcalc(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn bf_on_lens_space_flats() {
    let a = write_field("a1.json", &lens_flat(1));
    let a = a.to_str().unwrap().to_string();
    let o = dbcalc(&["bf", "--builtin", "lens:4", "--fieldA", &a, "--fieldB", &a, "-k", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v1 = stdout(&o).trim().to_string();
    assert_eq!(v1, "3/4");
    let o = dbcalc(&["bf", "--builtin", "lens:4", "--fieldA", &a, "--fieldB", &a, "-k", "2"]);
    assert_eq!(stdout(&o).trim(), "1/2");
    let z = write_field("zero.json", &GaugeField::zero(1));
    let o = dbcalc(&["bf", "--builtin", "lens:4", "--fieldA", &a, "--fieldB", z.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "0/1");
}

#[test]
fn non_integer_coupling_is_rejected() {
    let a = write_field("a2.json", &lens_flat(1));
    let a = a.to_str().unwrap();
    for k in ["1/2", "0.5"] {
        let o = dbcalc(&["bf", "--builtin", "lens:4", "--fieldA", a, "--fieldB", a, "-k", k]);
        assert_eq!(o.status.code(), Some(3), "k={k}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("coupling must be an integer"));
    }
}

#[test]
fn verify_reports_and_determinism() {
    let args = ["verify", "proposition1", "--builtin", "torus2", "--seed", "7", "--count", "25"];
    let first = dbcalc(&args);
    assert_eq!(first.status.code(), Some(0));
    assert!(stdout(&first).contains("25/25 pass"));
    assert_eq!(dbcalc(&args).stdout, first.stdout);
    let o = dbcalc(&["verify", "sequences", "--builtin", "lens:4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("|T_1| = 4 confirmed"));
    let o = dbcalc(&["verify", "epsilon-symmetry-report", "--builtin", "torus2", "--count", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let o = dbcalc(&["verify", "descent", "--builtin", "circle:3", "--count", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).expect("json report");
    assert_eq!(v["suite"], "descent");
}

#[test]
fn holonomy_and_field_round_trip() {
    let o = dbcalc(&["field", "--builtin", "torus2", "-p", "1", "--seed", "3"]);
    assert!(o.status.success());
    let dir = std::env::temp_dir().join(format!("dbcalc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("random.json");
    std::fs::write(&f, &o.stdout).unwrap();
    let m = Manifold::builtin("torus2").unwrap();
    let z = dir.join("cycle.json");
    std::fs::write(&z, serde_json::to_string(&dbcalc::json::sparse_to_json(&m.homology(1).generators()[0])).unwrap())
        .unwrap();
    let o = dbcalc(&["holonomy", "--builtin", "torus2", "--field", f.to_str().unwrap(), "--cycle", z.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let parsed = dbcalc::json::field_from_json(&serde_json::from_slice(&std::fs::read(&f).unwrap()).unwrap()).unwrap();
    let expected = dbcalc::cycles::holonomy(&m, &parsed, &m.homology(1).generators()[0]).unwrap();
    assert_eq!(stdout(&o).trim(), expected.to_string());
}

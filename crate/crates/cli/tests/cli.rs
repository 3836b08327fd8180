//! End-to-end runs of the `buildinglab` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use buildinglab::coxeter::{convex_hull, root_data, Alcove, Kind, Point};
use buildinglab::json::{self, CoxeterDoc, ExtCountDoc};
use buildinglab::rational::q;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_buildinglab"))
        .args(args)
        .env("BUILDINGLAB_WORKERS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

fn write_pair(kind: Kind, source: &[Point], target: &[Point], name: &str) -> PathBuf {
    let rs = root_data(kind);
    let source = convex_hull(&rs, source, 14).unwrap();
    let target = convex_hull(&rs, target, 14).unwrap();
    let doc = CoxeterDoc::new(kind).with_pair(&source, &target);
    let path = scratch(name);
    std::fs::write(&path, json::to_string(&doc).unwrap()).unwrap();
    path
}

#[test]
fn line_model_singleton_mass() {
    let o = run(&["measure", "--system", "line_model", "--q1", "2", "--q2", "3", "--index", "v2-singleton"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "4/3");
}

/// An alcove inside the hull of itself and a far vertex.
fn write_alcove_pair(kind: Kind, name: &str) -> PathBuf {
    let rs = root_data(kind);
    let alcove = Alcove::fundamental(&rs).vertices;
    let far = Point::new(q(2, 1), q(1, 1));
    write_pair(kind, &alcove, &[&alcove[..], &[far]].concat(), name)
}

/// A vertex inside an alcove containing it.
fn write_vertex_alcove_pair(kind: Kind, name: &str) -> PathBuf {
    let rs = root_data(kind);
    write_pair(kind, &[Point::origin()], &Alcove::fundamental(&rs).vertices, name)
}

#[test]
fn thin_count_from_a_chamber_is_one() {
    let pair = write_alcove_pair(Kind::A2, "pair_a2.json");
    let o = run(&["count", "--type", "A2", "--q", "1", "1", "1", "--pair", pair.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().next(), Some("1"));

    let out = scratch("count_a2.json");
    let o = run(&["count", "--q", "1", "1", "1", "--pair", pair.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let count = ExtCountDoc::parse(&text).unwrap();
    assert_eq!(count.value, 1);
    assert_eq!(json::to_string(&ExtCountDoc::new(&count)).unwrap(), text);
}

#[test]
fn count_from_a_vertex_is_the_number_of_chambers_in_its_residue() {
    // Thin: the six alcoves of a hexagon. q = 2: the 21 flags of the Fano plane.
    let pair = write_vertex_alcove_pair(Kind::A2, "pair_a2_vertex.json");
    for (q, expected) in [("1", 6), ("2", 21)] {
        let o = run(&["count", "--type", "A2", "--q", q, q, q, "--pair", pair.to_str().unwrap(), "--json"]);
        assert!(o.status.success());
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["value"], expected, "q = {q}");
    }
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--suite", "root-data", "--suite", "counting", "--seed", "7", "--json"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["passed"], true);
}

#[test]
fn json_output_matches_the_out_file() {
    let out = scratch("hull.json");
    let o =
        run(&["hull", "--type", "B2", "--point", "0,0", "--point", "1,1", "--json", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let written = std::fs::read_to_string(&out).unwrap();
    assert_eq!(stdout(&o), written);
    let doc = CoxeterDoc::parse(&written).unwrap();
    assert_eq!(doc.kind, Kind::B2);
    assert!(doc.region().unwrap().contains_point(&root_data(Kind::B2), Point::origin()));
}

#[test]
fn hull_reads_its_own_output() {
    let out = scratch("hull_g2.json");
    let o = run(&["hull", "--type", "G2", "--point", "0,0", "--point", "1,2", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let again = run(&["hull", "--input", out.to_str().unwrap(), "--json"]);
    assert!(again.status.success());
    assert_eq!(stdout(&again), std::fs::read_to_string(&out).unwrap());
}

#[test]
fn exit_codes() {
    // Parse errors.
    assert_eq!(run(&["measure", "--system", "nope", "--index", "x"]).status.code(), Some(2));
    assert_eq!(run(&["hull", "--type", "X2", "--point", "0,0"]).status.code(), Some(2));
    assert_eq!(run(&["hull", "--type", "A2", "--point", "0;0"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "everything"]).status.code(), Some(2));
    // Precondition violations.
    assert_eq!(run(&["hull", "--type", "A2"]).status.code(), Some(3));
    assert_eq!(run(&["basepoint", "--type", "A2", "--q", "0", "1", "1"]).status.code(), Some(3));
    // Window overflow.
    assert_eq!(
        run(&["hull", "--type", "A2", "--point", "0,0", "--point", "100,0", "--window", "3"]).status.code(),
        Some(4)
    );
}

#[test]
fn boundary_commands_succeed() {
    for args in [
        &["measure-delta", "--type", "B2", "--q", "2", "3", "2", "--box", "1", "1"][..],
        &["proportionality", "--type", "A2", "--q", "1", "1", "1"],
        &["basepoint", "--type", "C2"],
        &["opp-disintegrate", "--type", "A2", "--seed", "4"],
        &["disintegrate", "--seed", "4"],
        &["projectivity", "--polygon", "fano"],
        &["search-asymmetry", "--polygon", "thin4", "--max", "3"],
        &["extend", "--type", "G2", "--wall-type", "2", "--seed", "9"],
    ] {
        let o = run(args);
        assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let j = run(&[args, &["--json"][..]].concat());
        assert!(serde_json::from_slice::<Value>(&j.stdout).is_ok(), "{args:?}");
    }
}

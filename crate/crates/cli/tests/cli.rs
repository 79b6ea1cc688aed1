//! End-to-end checks of the binary: exit codes, JSON payloads, determinism,
//! and agreement with direct library calls.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use polywalk_core::knapsack::{decide_partition_via_distance, PartitionInstance};
use polywalk_core::{Budget, HPolytope};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_polywalk"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn write_cube(dir: &Path, d: usize) -> PathBuf {
    let path = dir.join(format!("cube{d}.json"));
    let cube = HPolytope::unit_cube(d);
    std::fs::write(&path, serde_json::to_string(&cube).unwrap()).unwrap();
    path
}

#[test]
fn gen_knapsack_solvable_instance() {
    let out = run(&["gen-knapsack", "--weights", "1,1"]);
    let doc = stdout_json(&out);
    let result = &doc["result"];
    assert_eq!(result["decision"], true);
    assert_eq!(result["monotone_decision"], true);
    assert_eq!(result["distance"], 3);
    assert_eq!(result["threshold"], 3);
    assert_eq!(result["epsilon"], "1/5");
    assert_eq!(result["polytope"]["dim"], 4);
    assert_eq!(result["polytope"]["labels"].as_array().unwrap().len(), 9);
    // Library agreement.
    let inst = PartitionInstance::new(vec![1, 1]).unwrap();
    let dec = decide_partition_via_distance(&inst, &Budget::default()).unwrap();
    assert_eq!(result["decision"].as_bool().unwrap(), dec.yes);
}

#[test]
fn gen_knapsack_epsilon_formula() {
    let out = run(&["gen-knapsack", "--weights", "3,1,1,1"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["result"]["epsilon"], "1/15");
    assert_eq!(doc["result"]["decision"], true);
}

#[test]
fn gen_knapsack_rejects_odd_sum() {
    let out = run(&["gen-knapsack", "--weights", "1,2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("odd"));
}

#[test]
fn gen_knapsack_unsolvable_instance() {
    let out = run(&["gen-knapsack", "--weights", "1,1,4"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["result"]["decision"], false);
    assert_eq!(doc["result"]["monotone_decision"], false);
    assert!(doc["result"]["distance"].as_u64().unwrap() >= 5);
}

#[test]
fn identical_inputs_are_byte_identical() {
    let a = run(&["gen-knapsack", "--weights", "2,1,1"]);
    let b = run(&["gen-knapsack", "--weights", "2,1,1"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn distance_on_cube_with_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let cube = write_cube(dir.path(), 3);
    let cube_arg = cube.to_str().unwrap();

    let yes = stdout_json(&run(&[
        "distance",
        "--polytope",
        cube_arg,
        "--from",
        "0,0,0",
        "--to",
        "1,1,1",
        "-k",
        "3",
    ]));
    assert_eq!(yes["result"]["distance"], 3);
    assert_eq!(yes["result"]["within_k"], true);

    let no = stdout_json(&run(&[
        "distance",
        "--polytope",
        cube_arg,
        "--from",
        "0,0,0",
        "--to",
        "1,1,1",
        "-k",
        "2",
    ]));
    assert_eq!(no["result"]["within_k"], false);

    // Basis-label vertex specs resolve to the same vertices.
    let by_basis = stdout_json(&run(&[
        "distance",
        "--polytope",
        cube_arg,
        "--from",
        "lo:1,lo:2,lo:3",
        "--to",
        "hi:1,hi:2,hi:3",
    ]));
    assert_eq!(by_basis["result"]["distance"], 3);
}

#[test]
fn monotone_distance_on_cube() {
    let dir = tempfile::tempdir().unwrap();
    let cube = write_cube(dir.path(), 3);
    let doc = stdout_json(&run(&[
        "monotone-distance",
        "--polytope",
        cube.to_str().unwrap(),
        "--objective",
        "1,1,1",
        "--start",
        "0,0,0",
        "-k",
        "3",
    ]));
    assert_eq!(doc["result"]["length"], 3);
    assert_eq!(doc["result"]["within_k"], true);
    assert_eq!(doc["result"]["tied_edges_excluded"], 0);
}

#[test]
fn diameter_of_cube() {
    let dir = tempfile::tempdir().unwrap();
    let cube = write_cube(dir.path(), 3);
    let dot = dir.path().join("cube.dot");
    let doc = stdout_json(&run(&[
        "diameter",
        "--polytope",
        cube.to_str().unwrap(),
        "--dot",
        dot.to_str().unwrap(),
    ]));
    assert_eq!(doc["result"]["diameter"], 3);
    assert_eq!(doc["result"]["vertices"], 8);
    assert_eq!(doc["result"]["edges"], 12);
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("graph polytope {"));
    assert_eq!(text.matches(" -- ").count(), 12);
}

#[test]
fn budget_overflow_exits_with_code_3() {
    let dir = tempfile::tempdir().unwrap();
    let cube = write_cube(dir.path(), 3);
    let out = run(&[
        "distance",
        "--polytope",
        cube.to_str().unwrap(),
        "--from",
        "0,0,0",
        "--to",
        "1,1,1",
        "--max-bases",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn jobs_flag_gives_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let cube = write_cube(dir.path(), 3);
    let cube_arg = cube.to_str().unwrap();
    let single = run(&["diameter", "--polytope", cube_arg, "--jobs", "1"]);
    let multi = run(&["diameter", "--polytope", cube_arg, "--jobs", "2"]);
    assert!(single.status.success() && multi.status.success());
    assert_eq!(single.stdout, multi.stdout);
}

#[test]
fn truncate_silo_and_cyclic_silo() {
    let dir = tempfile::tempdir().unwrap();
    let cube = write_cube(dir.path(), 3);
    let cube_arg = cube.to_str().unwrap();

    let cut = stdout_json(&run(&[
        "truncate",
        "--polytope",
        cube_arg,
        "--vertex",
        "0,0,0",
    ]));
    assert_eq!(
        cut["result"]["polytope"]["labels"]
            .as_array()
            .unwrap()
            .len(),
        7
    );
    assert_eq!(cut["result"]["vertices"], 10);

    let silo = stdout_json(&run(&["silo", "--polytope", cube_arg, "--vertex", "0,0,0"]));
    assert_eq!(
        silo["result"]["polytope"]["labels"]
            .as_array()
            .unwrap()
            .len(),
        9
    );
    assert_eq!(silo["result"]["vertices"], 14);
    assert_eq!(silo["result"]["y_labels"].as_array().unwrap().len(), 3);

    let cyc = stdout_json(&run(&[
        "cyclic-silo",
        "--polytope",
        cube_arg,
        "--vertex",
        "0,0,0",
        "--r",
        "1",
    ]));
    assert_eq!(
        cyc["result"]["polytope"]["labels"]
            .as_array()
            .unwrap()
            .len(),
        15
    );
    assert_eq!(cyc["result"]["vertices"], 26);
    assert_eq!(cyc["result"]["growth"]["within_bound"], true);
}

#[test]
fn reduce_diameter_flag_semantics() {
    let dir = tempfile::tempdir().unwrap();
    let cube = write_cube(dir.path(), 3);
    let cube_arg = cube.to_str().unwrap();

    // Forced-too-small r without --force is an input error.
    let small = run(&[
        "reduce-diameter",
        "--polytope",
        cube_arg,
        "--u",
        "0,0,0",
        "--v",
        "1,1,1",
        "--r",
        "2",
    ]);
    assert_eq!(small.status.code(), Some(2));

    // Forced small r runs, verifies, and reports the outcome bit.
    let forced = stdout_json(&run(&[
        "reduce-diameter",
        "--polytope",
        cube_arg,
        "--u",
        "0,0,0",
        "--v",
        "1,1,1",
        "--r",
        "2",
        "--force",
        "--verify",
    ]));
    assert_eq!(forced["result"]["r"], 2);
    assert_eq!(forced["result"]["k_offset"], 24);
    assert!(forced["result"]["verified"].is_boolean());

    // Default r on the cube: offset 72, prediction 75.
    let doc = stdout_json(&run(&[
        "reduce-diameter",
        "--polytope",
        cube_arg,
        "--u",
        "0,0,0",
        "--v",
        "1,1,1",
    ]));
    assert_eq!(doc["result"]["r"], 6);
    assert_eq!(doc["result"]["k_offset"], 72);
    assert_eq!(doc["result"]["base_distance"], 3);
    assert_eq!(doc["result"]["predicted_diameter"], 75);
    assert_eq!(doc["result"]["verified"], serde_json::Value::Null);
}

#[test]
fn rock_build_then_path() {
    let dir = tempfile::tempdir().unwrap();
    let square = write_cube(dir.path(), 2);
    let record = dir.path().join("rock.json");

    let built = run(&[
        "rock-build",
        "--polytope",
        square.to_str().unwrap(),
        "--center",
        "1/2,1/2",
        "--radius2",
        "1/4",
        "--out",
        record.to_str().unwrap(),
    ]);
    assert!(built.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&record).unwrap()).unwrap();
    assert_eq!(doc["result"]["polytope"]["dim"], 3);
    assert_eq!(doc["result"]["step_bound"], 2);
    assert_eq!(doc["result"]["apex_point"][2], "1");

    // rock-path consumes the inner record.
    let inner = dir.path().join("record_only.json");
    std::fs::write(&inner, serde_json::to_string(&doc["result"]).unwrap()).unwrap();
    let path = stdout_json(&run(&[
        "rock-path",
        "--record",
        inner.to_str().unwrap(),
        "--from",
        "0",
        "--to",
        "3",
    ]));
    assert!(path["result"]["path"]["length"].as_u64().unwrap() <= 4);
    assert_eq!(path["result"]["bound"], 4);
}

#[test]
fn verify_paper_growth_scope() {
    let out = run(&["verify-paper", "--scope", "growth"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("entry-sizes-below-soft-bound"));
    assert!(text.contains("0 failed"));
}

//! End-to-end tests of the gwd binary: exit codes, output formats,
//! determinism, file round trips.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn gwd() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gwd"))
}

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    gwd().args(args).output().expect("gwd runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("gwd exits normally")
}

const CHAIN22: &str = "elements: 1 2\nrel: 1 < 2\nsizes: 2 2\n";
const B3: &str = "0,0\n1,0\n0,1\n";

struct Fixture {
    _dir: tempfile::TempDir,
    structure: PathBuf,
    block: PathBuf,
}

fn fixture() -> Fixture {
    let dir = tempfile::tempdir().unwrap();
    let structure = write(dir.path(), "chain22.txt", CHAIN22);
    let block = write(dir.path(), "b3.txt", B3);
    Fixture {
        _dir: dir,
        structure,
        block,
    }
}

#[test]
fn check_accepts_the_design_block() {
    let f = fixture();
    let out = run(&[
        "check",
        f.structure.to_str().unwrap(),
        f.block.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("2-design: yes"));
    // exactly one J row for the 2-chain
    assert_eq!(text.matches("yes").count(), 2); // row + summary
    assert!(!text.contains("{}"));

    let with_empty = run(&[
        "check",
        f.structure.to_str().unwrap(),
        f.block.to_str().unwrap(),
        "--with-empty",
    ]);
    assert_eq!(code(&with_empty), 0);
    assert!(stdout(&with_empty).contains("{}"));
}

#[test]
fn check_rejects_the_column_block_with_exit_1() {
    let f = fixture();
    let block = write(f._dir.path(), "b2.txt", "0,0\n1,0\n");
    let out = run(&[
        "check",
        f.structure.to_str().unwrap(),
        block.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("2-design: no"));
}

#[test]
fn malformed_inputs_exit_2() {
    let f = fixture();
    let bad = write(f._dir.path(), "bad.txt", "0,9\n");
    let out = run(&[
        "check",
        f.structure.to_str().unwrap(),
        bad.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);

    let missing = run(&["check", "/nonexistent", bad.to_str().unwrap()]);
    assert_eq!(code(&missing), 2);

    let nosizes = write(f._dir.path(), "nosizes.txt", "elements: 1 2\nrel: 1 < 2\n");
    let out = run(&[
        "check",
        nosizes.to_str().unwrap(),
        f.block.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn enumerate_reports_the_2_4_3_2_design() {
    let f = fixture();
    let out = run(&[
        "enumerate",
        f.structure.to_str().unwrap(),
        f.block.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("|F| = 8"));
    assert!(text.contains("b = 4"));
    assert!(text.contains("r = 3"));
    assert!(text.contains("lambda = 2"));
    assert!(text.contains("AGREE"));
}

#[test]
fn enumerate_negative_case_still_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let structure = write(dir.path(), "grid.txt", "elements: 1 2\nsizes: 2 3\n");
    let row = write(dir.path(), "row.txt", "0,0\n0,1\n0,2\n");
    let out = run(&[
        "enumerate",
        structure.to_str().unwrap(),
        row.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("lambda = nonconstant"));
    assert!(text.contains("AGREE"));
}

#[test]
fn enumerate_cap_exceeded_exits_3() {
    let f = fixture();
    let out = run(&[
        "enumerate",
        f.structure.to_str().unwrap(),
        f.block.to_str().unwrap(),
        "--group-cap",
        "7",
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn family_commands() {
    let out = run(&["family", "n", "--p", "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("MATCH"));
    assert!(!text.contains("MISMATCH"));
    assert!(text.contains("2-design: yes"));

    assert_eq!(code(&run(&["family", "n", "--p", "1"])), 2);
    assert_eq!(code(&run(&["family", "v", "--p", "4"])), 0);
    assert_eq!(code(&run(&["family", "v", "--p", "6"])), 3); // desk cap is 5
    assert_eq!(code(&run(&["family", "nope", "--p", "2"])), 2);
}

#[test]
fn family_emit_block_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let block_path = dir.path().join("chgrid_p2.txt");
    let out = run(&[
        "family",
        "chgrid",
        "--p",
        "2",
        "--emit-block",
        block_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let emitted = std::fs::read_to_string(&block_path).unwrap();
    assert_eq!(emitted.lines().count(), 17); // k = q + 1 at p = 2

    // the emitted block re-checks as a 2-design against its structure
    let structure = write(
        dir.path(),
        "chgrid.txt",
        "elements: 1 2 3\nrel: 1 < 3\nsizes: 7 3 13\n",
    );
    let check = run(&[
        "check",
        structure.to_str().unwrap(),
        block_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&check), 0);
}

#[test]
fn oracle_agrees_on_files_and_random_blocks() {
    let f = fixture();
    let out = run(&[
        "oracle",
        f.structure.to_str().unwrap(),
        f.block.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("AGREE"));

    let out = run(&[
        "oracle",
        f.structure.to_str().unwrap(),
        "--random",
        "5",
        "--seed",
        "11",
    ]);
    assert_eq!(code(&out), 0);

    // identical seeds give identical bytes
    let again = run(&[
        "oracle",
        f.structure.to_str().unwrap(),
        "--random",
        "5",
        "--seed",
        "11",
    ]);
    assert_eq!(out.stdout, again.stdout);

    // no block and no --random is a usage error
    assert_eq!(code(&run(&["oracle", f.structure.to_str().unwrap()])), 2);
}

#[test]
fn orbits_table_totals() {
    let f = fixture();
    let out = run(&["orbits", f.structure.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("total = 16 (v^2 = 16)"));
}

#[test]
fn json_and_table_outputs_carry_identical_numbers() {
    let f = fixture();
    let table = run(&[
        "check",
        f.structure.to_str().unwrap(),
        f.block.to_str().unwrap(),
        "--with-empty",
    ]);
    let json = run(&[
        "check",
        f.structure.to_str().unwrap(),
        f.block.to_str().unwrap(),
        "--with-empty",
        "--format",
        "json",
    ]);
    assert_eq!(code(&table), 0);
    assert_eq!(code(&json), 0);
    let text = stdout(&table);
    let value: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(value["is_2_design"], serde_json::Value::Bool(true));
    let mut numbers = vec![
        value["v"].as_str().unwrap().to_string(),
        value["k"].as_str().unwrap().to_string(),
    ];
    for verdict in value["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .chain(std::iter::once(&value["empty_verdict"]))
    {
        for field in ["lhs", "rhs_numerator", "rhs_denominator", "rank_gap"] {
            numbers.push(verdict[field].as_str().unwrap().to_string());
        }
    }
    for n in numbers {
        assert!(text.contains(&n), "table output is missing `{n}`");
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    let out1 = run(&["family", "vinv", "--p", "3", "--format", "json"]);
    let out2 = run(&["family", "vinv", "--p", "3", "--format", "json"]);
    assert_eq!(code(&out1), 0);
    assert_eq!(out1.stdout, out2.stdout);
}

#[test]
fn env_variables_override_flags() {
    let f = fixture();
    let out = gwd()
        .args(["check", f.structure.to_str().unwrap(), f.block.to_str().unwrap()])
        .env("FORMAT", "json")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).trim_start().starts_with('{'));

    let out = gwd()
        .args([
            "enumerate",
            f.structure.to_str().unwrap(),
            f.block.to_str().unwrap(),
        ])
        .env("GROUP_CAP", "7")
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
}

#[test]
fn generator_file_flags_the_hypothesis() {
    let dir = tempfile::tempdir().unwrap();
    let structure = write(dir.path(), "grid42.txt", "elements: 1 2\nsizes: 4 2\n");
    let block = write(dir.path(), "b.txt", "0,0\n1,1\n2,0\n");
    let groups = write(dir.path(), "gens.txt", "perm 1: 1 2 3 0\n");
    let out = run(&[
        "check",
        structure.to_str().unwrap(),
        block.to_str().unwrap(),
        "--groups",
        groups.to_str().unwrap(),
    ]);
    assert!(stdout(&out).contains("hypothesis unmet"));

    // enumeration under an unmet hypothesis is judged by the enumerated
    // verdict alone, never flagged as an internal disagreement
    let single = write(dir.path(), "single.txt", "0,0\n");
    let out = run(&[
        "enumerate",
        structure.to_str().unwrap(),
        single.to_str().unwrap(),
        "--groups",
        groups.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("hypothesis unmet"));
}

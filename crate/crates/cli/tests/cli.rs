use std::path::PathBuf;
use std::process::Command;

use mucofix_cli::{run_args, Outcome, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_OK};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Outcome {
    run_args(std::iter::once("mucofix").chain(args.iter().copied()))
}

#[test]
fn check_lattices() {
    let out = run(&["check", &fixture("c2.json")]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.report.contains("poset: ok, lattice: ok"));

    let out = run(&["check", &fixture("d4.json")]);
    assert_eq!(out.code, EXIT_OK, "duplicate edges are ignored");

    let out = run(&["check", &fixture("antichain.json")]);
    assert_eq!(out.code, EXIT_CHECK_FAILED);
    assert!(out.report.contains("NotALattice: {a,b} lacks lub"));

    let out = run(&["check", &fixture("cycle.json")]);
    assert_eq!(out.code, EXIT_CHECK_FAILED);
    assert!(out.report.contains("NotAPoset"));

    let out = run(&["check", &fixture("truncated.json")]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.report.contains("line 1 column"));
}

#[test]
fn check_rejects_unknown_keys_and_names() {
    let dir = tempfile::tempdir().unwrap();
    let extra = dir.path().join("extra.json");
    std::fs::write(&extra, r#"{"elements": ["a"], "leq": [], "colour": "red"}"#).unwrap();
    assert_eq!(run(&["check", extra.to_str().unwrap()]).code, EXIT_INPUT);

    let unknown = dir.path().join("unknown.json");
    std::fs::write(&unknown, r#"{"elements": ["a"], "leq": [["a", "z"]]}"#).unwrap();
    assert_eq!(run(&["check", unknown.to_str().unwrap()]).code, EXIT_INPUT);

    let partial = dir.path().join("partial.json");
    std::fs::write(
        &partial,
        r#"{"O": {"elements": ["0","1"], "leq": [["0","1"]]}, "P": {"elements": ["0"]}, "F": {"0": "0"}, "G": {"0": "0"}}"#,
    )
    .unwrap();
    let out = run(&["check", partial.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.report.contains("no image for `1`"));
}

#[test]
fn check_pairs() {
    let out = run(&["check", &fixture("k1.json")]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.report.contains("continuous (binary): yes"));

    // K1's G sends bottom to top, so it fails once the empty meet counts.
    let out = run(&["check", "--mode", "with-empty", "--require-continuous", &fixture("k1.json")]);
    assert_eq!(out.code, EXIT_CHECK_FAILED);
    assert!(out.report.contains("G does not preserve the lub of {}"));

    let out = run(&["check", &fixture("flip.json")]);
    assert_eq!(out.code, EXIT_CHECK_FAILED);
    assert!(out.report.contains("F monotone: no"));
}

#[test]
fn solve_examples() {
    let out = run(&["solve", &fixture("k1.json"), "--strategy", "product", "--direction", "least"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(out.report.trim(), "muF=1 muG=1, 3 iterations");

    let out = run(&["solve", &fixture("k1.json"), "--strategy", "product", "--direction", "least", "--trace"]);
    assert!(out.report.contains("trace: (0,0) -> (1,0) -> (1,1)"));

    let out = run(&["solve", &fixture("id2.json"), "--direction", "greatest"]);
    assert!(out.report.starts_with("nuF=1 nuG=1"));

    let out = run(&["solve", &fixture("id2.json")]);
    assert!(out.report.contains("muF=0 muG=0") && out.report.contains("nuF=1 nuG=1"));

    let out = run(&["solve", &fixture("swap.json"), "--strategy", "all"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(out.report.lines().last(), Some("AGREE"));
    assert_eq!(out.report.lines().count(), 7);

    let out = run(&["solve", &fixture("flip.json")]);
    assert_eq!(out.code, EXIT_CHECK_FAILED);
    assert!(out.report.starts_with("NotMonotone"));

    assert_eq!(run(&["solve", &fixture("c2.json")]).code, EXIT_INPUT);
    assert_eq!(run(&["solve", &fixture("k1.json"), "--strategy", "magic"]).code, EXIT_INPUT);
}

#[test]
fn verify_and_mine() {
    let out = run(&["verify", "--lemma", "SFP", "--seed", "1", "--count", "50"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.report);
    assert!(out.report.contains("lemmas passed: 1/1"));

    assert_eq!(run(&["verify", "--lemma", "L9"]).code, EXIT_INPUT);
    assert_eq!(run(&["verify", "--count", "0"]).code, EXIT_INPUT);
    assert_eq!(run(&["verify", "--mode", "capped:1"]).code, EXIT_INPUT);

    let out = run(&["mine", "Q2", "--max-size", "2"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.report.contains("none found (exhaustive up to size 2)"));

    let out = run(&["mine", "Q1", "--budget", "0"]);
    assert!(out.report.contains("none found, 0 instances tried"));

    assert_eq!(run(&["mine", "Q7"]).code, EXIT_INPUT);
}

#[test]
fn demos() {
    let out = run(&["demo", "paulson"]);
    assert_eq!((out.code, out.report.as_str()), (EXIT_OK, "(1,1,0)"));

    let out = run(&["demo", "paulson", "--z", "1", "--budget", "500"]);
    assert_eq!(out.code, EXIT_CHECK_FAILED);
    assert!(out.report.starts_with("StepBudgetExceeded"));

    let out = run(&["demo", "paulson", "--x", "-2", "--y", "3", "--z", "-1"]);
    assert_eq!(out.report, "(-1,2,-1)");

    let out = run(&[
        "demo",
        "subtype",
        "--classes",
        &fixture("classes_a.json"),
        "--depth",
        "0",
        "--direction",
        "least",
        "--query",
        "Null<:Object",
        "--query",
        "Object<:Null",
        "--query",
        "Null<:A",
    ]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.report.contains("subtype pairs: 6"));
    assert!(out.report.contains("query Null <: Object: true"));
    assert!(out.report.contains("query Object <: Null: false"));
    assert!(out.report.contains("query Null <: A: true"));

    let out = run(&["demo", "subtype", "--classes", &fixture("classes_list.json")]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.report.contains("lfp within gfp: yes"));

    assert_eq!(run(&["demo", "subtype", "--query", "Foo<:Object"]).code, EXIT_INPUT);
    assert_eq!(run(&["demo", "subtype", "--depth", "3"]).code, EXIT_INPUT);
}

#[test]
fn binary_writes_output_file_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.txt");
    let status = Command::new(env!("CARGO_BIN_EXE_mucofix"))
        .args(["--output", target.to_str().unwrap(), "demo", "paulson"])
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(std::fs::read_to_string(&target).unwrap(), "(1,1,0)\n");

    let out = Command::new(env!("CARGO_BIN_EXE_mucofix")).args(["check", &fixture("antichain.json")]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Command::new(env!("CARGO_BIN_EXE_mucofix")).args(["check", &fixture("truncated.json")]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty() && !out.stderr.is_empty());
    let out = Command::new(env!("CARGO_BIN_EXE_mucofix")).arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cap_override_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_mucofix"))
        .env("MUCOFIX_CAP", "4")
        .args(["verify", "--lemma", "SFP", "--count", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "max size 8 exceeds a cap of 4");
}

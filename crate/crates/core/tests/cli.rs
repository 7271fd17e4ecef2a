//! End-to-end checks of the command-line interface and its exit codes:
//! 0 = affirmative, 1 = negative finding, 2 = usage or input error.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fbd"))
}

fn tmp(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn build_verify_pipeline_reproduces_the_transcript() {
    let file = tmp("pipeline.txt");
    let out = bin().args(["build", "--depth", "10", "-o"]).arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    let text = std::fs::read_to_string(&file).unwrap();
    assert_eq!(text.lines().count(), 16368);

    let out = bin().arg("verify").arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let log = stdout(&out);
    assert!(log.contains("loaded 16368 edges"), "{log}");
    assert!(log.contains("tr A1 = 0"), "{log}");
    assert!(log.contains("tr A2 = 0"), "{log}");
    assert!(log.contains("tr A3 = 0"), "{log}");
    assert!(log.contains("all checks passed! graph is FBD"), "{log}");
    assert!(log.contains("alpha avg = 3/1, alpha max = 516"), "{log}");
}

#[test]
fn build_trim_drops_48_edges() {
    let file = tmp("trimmed.txt");
    let out =
        bin().args(["build", "--depth", "10", "--trim", "-o"]).arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&file).unwrap().lines().count(), 16320);
}

#[test]
fn verify_flags_a_three_cycle_with_exit_1() {
    let file = tmp("triangle.txt");
    std::fs::write(&file, "0,1\n1,2\n2,0\n").unwrap();
    let out = bin().arg("verify").arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("tr A3 = 3"));
}

#[test]
fn verify_rejects_malformed_lines_with_exit_2() {
    let file = tmp("malformed.txt");
    std::fs::write(&file, "0,1\na,b\n").unwrap();
    let out = bin().arg("verify").arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn verify_writes_a_report_file() {
    let file = tmp("report-input.txt");
    std::fs::write(&file, "0,1\n1,2\n2,0\n").unwrap();
    let report = tmp("report.json");
    let out = bin().arg("verify").arg(&file).arg("--report").arg(&report).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["schema_version"], 1);
    assert_eq!(json["three_cycle_count"], 1);
    assert_eq!(json["is_fbd"], false);
    assert!(json["input_digest"].as_str().unwrap().len() == 64);
}

#[test]
fn search_prints_a_length_one_trace_for_a_triangle() {
    let file = tmp("search-triangle.txt");
    std::fs::write(&file, "0,1\n1,2\n2,0\n").unwrap();
    let out = bin().arg("search").arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let log = stdout(&out);
    assert!(log.contains("found a sequence of 1 flips"), "{log}");
}

#[test]
fn glue_then_stuck_certifies_the_counterexample() {
    let built = tmp("glue-input.txt");
    let out = bin().args(["build", "--depth", "10", "-o"]).arg(&built).output().unwrap();
    assert_eq!(out.status.code(), Some(0));

    let glued = tmp("glued.txt");
    let out = bin().arg("glue").arg(&built).arg("-o").arg(&glued).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    let out = bin().arg("stuck").arg(&glued).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("graph is stuck"));
}

#[test]
fn tournaments_and_probe_report_affirmatively() {
    let out = bin().args(["tournaments", "-n", "4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("0 FBD tournaments"));

    let out = bin()
        .args(["probe", "-n", "4", "--trials", "50", "--seed", "7"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("50 found, 0 failures"));
}

#[test]
fn unknown_copies_count_is_a_usage_error() {
    let file = tmp("copies-input.txt");
    std::fs::write(&file, "0,1\n1,2\n2,0\n").unwrap();
    let out = bin()
        .args(["glue"])
        .arg(&file)
        .args(["--copies", "4", "-o"])
        .arg(tmp("copies-out.txt"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

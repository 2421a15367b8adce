//! End-to-end runs of the binary: file round-trips, certificate replay,
//! and the exit-code contract (0 verdict, 1 replay/suite failure,
//! 2 inconclusive, 3 input error).

use std::path::Path;
use std::process::{Command, Output};

use cyclab::io::{format_digraph, parse_digraph};

fn cyclab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclab"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn gen_writes_canonical_round_tripping_files() {
    let tmp = tempfile::tempdir().unwrap();
    let out = cyclab(tmp.path(), &["gen", "blowup", "--k", "4", "--blob", "3"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = std::fs::read_to_string(tmp.path().join("blowup-k4-b3.dg")).unwrap();
    let d = parse_digraph(&text).unwrap();
    assert_eq!(d.vertex_count(), 15);
    assert_eq!(format_digraph(&d), text);
    assert!(tmp.path().join("blowup-k4-b3.dg.degree.cert.json").exists());
}

#[test]
fn gen_balanced_writes_layout_sidecar() {
    let tmp = tempfile::tempdir().unwrap();
    let out = cyclab(
        tmp.path(),
        &["gen", "augmented", "--m", "3", "--k", "3", "--balance"],
    );
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("2384 vertices"));
    assert!(tmp.path().join("balanced-m3-k3.dg.layout.json").exists());
}

#[test]
fn gen_rejects_oversized_hosts() {
    let tmp = tempfile::tempdir().unwrap();
    let out = cyclab(tmp.path(), &["gen", "gshift", "--m", "4", "--k", "3"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn check_certifies_absence_and_the_certificate_replays() {
    let tmp = tempfile::tempdir().unwrap();
    cyclab(tmp.path(), &["gen", "blowup", "--k", "4", "--blob", "2"]);
    let out = cyclab(tmp.path(), &["check", "blowup-k4-b2.dg", "--pattern", "++++"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("certified absent"));
    let verify = cyclab(
        tmp.path(),
        &[
            "cert",
            "verify",
            "blowup-k4-b2.dg.FFFF.absent.cert.json",
            "blowup-k4-b2.dg",
        ],
    );
    assert_eq!(code(&verify), 0, "{}", stdout(&verify));
}

#[test]
fn check_goes_inconclusive_when_the_budget_runs_out() {
    let tmp = tempfile::tempdir().unwrap();
    cyclab(tmp.path(), &["gen", "blowup", "--k", "4", "--blob", "2"]);
    let out = cyclab(
        tmp.path(),
        &["check", "blowup-k4-b2.dg", "--pattern", "+++++", "--budget", "1"],
    );
    assert_eq!(code(&out), 2, "{}", stdout(&out));
    assert!(stdout(&out).contains("inconclusive"));
}

#[test]
fn family_check_covers_the_augmented_host() {
    let tmp = tempfile::tempdir().unwrap();
    cyclab(tmp.path(), &["gen", "augmented", "--m", "3", "--k", "3"]);
    let out = cyclab(tmp.path(), &["check", "augmented-m3-k3.dg", "--family", "3"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert_eq!(stdout(&out).matches("certified absent").count(), 3);
}

#[test]
fn chi_exact_matches_the_known_shift_value() {
    let tmp = tempfile::tempdir().unwrap();
    cyclab(tmp.path(), &["gen", "shift", "--m", "5", "--r", "2"]);
    let out = cyclab(tmp.path(), &["chi", "shift-m5-r2.dg", "--exact"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("chi = 3"));
    let verify = cyclab(
        tmp.path(),
        &[
            "cert",
            "verify",
            "shift-m5-r2.dg.coloring.cert.json",
            "shift-m5-r2.dg",
        ],
    );
    assert_eq!(code(&verify), 0, "{}", stdout(&verify));
}

#[test]
fn extract_on_a_complete_host_writes_replaying_certificates() {
    let tmp = tempfile::tempdir().unwrap();
    cyclab(tmp.path(), &["gen", "shift", "--m", "10", "--r", "1"]);
    let out = cyclab(
        tmp.path(),
        &["extract", "shift-m10-r1.dg", "++--", "--epsilon", "0.4"],
    );
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    for cert in ["FFBB.embedding.cert.json", "FFBB.extraction.cert.json"] {
        let verify = cyclab(
            tmp.path(),
            &[
                "cert",
                "verify",
                &format!("shift-m10-r1.dg.{cert}"),
                "shift-m10-r1.dg",
            ],
        );
        assert_eq!(code(&verify), 0, "{}", stdout(&verify));
    }
}

#[test]
fn extract_refuses_unforced_patterns_and_bad_epsilons() {
    let tmp = tempfile::tempdir().unwrap();
    cyclab(tmp.path(), &["gen", "shift", "--m", "6", "--r", "1"]);
    let guard = cyclab(
        tmp.path(),
        &["extract", "shift-m6-r1.dg", "++++", "--epsilon", "0.3"],
    );
    assert_eq!(code(&guard), 3);
    let eps = cyclab(
        tmp.path(),
        &["extract", "shift-m6-r1.dg", "++--", "--epsilon", "1.5"],
    );
    assert_eq!(code(&eps), 3);
}

#[test]
fn classify_prints_class_and_blocks() {
    let tmp = tempfile::tempdir().unwrap();
    let out = cyclab(tmp.path(), &["classify", "+++-"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("SingleFlip"));
    assert!(text.contains("[3, 1]"));
    let two = cyclab(tmp.path(), &["classify", "+-"]);
    assert!(stdout(&two).contains("DirectedCycle"));
}

#[test]
fn suite_verb_reports_and_signals() {
    let tmp = tempfile::tempdir().unwrap();
    let out = cyclab(tmp.path(), &["suite", "blowup", "--kmax", "3"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("pass:"));
    let unknown = cyclab(tmp.path(), &["suite", "nope"]);
    assert_eq!(code(&unknown), 3);
}

#[test]
fn cert_verify_flags_a_digest_mismatch() {
    let tmp = tempfile::tempdir().unwrap();
    cyclab(tmp.path(), &["gen", "shift", "--m", "5", "--r", "2"]);
    cyclab(tmp.path(), &["gen", "shift", "--m", "6", "--r", "2"]);
    let out = cyclab(
        tmp.path(),
        &[
            "cert",
            "verify",
            "shift-m5-r2.dg.degree.cert.json",
            "shift-m6-r2.dg",
        ],
    );
    assert_eq!(code(&out), 1, "{}", stdout(&out));
    assert!(stdout(&out).contains("does not replay"));
}

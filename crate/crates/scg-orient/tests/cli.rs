//! End-to-end tests of the binary: exit codes, output formats, stream
//! separation, and determinism.

mod common;

use std::process::{Command, Output};

use common::fixture_path;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_scg-orient"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scg(name: &str) -> String {
    fixture_path("scg", name).to_string_lossy().into_owned()
}

fn tpl(name: &str) -> String {
    fixture_path("template", name).to_string_lossy().into_owned()
}

#[test]
fn check_blocked_pair_exits_one() {
    let out = run(&["check", &scg("two_block_chain.scg"), "--pair", "A", "B"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_of(&out), "PAIR A B NotSId TheoremBlocked\n");
}

#[test]
fn check_decided_pair_exits_zero() {
    let out = run(&["check", &scg("two_block_chain.scg"), "--pair", "C", "D"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_of(&out), "PAIR C D SId UnshieldedCollider\n");
}

#[test]
fn check_all_pairs_lists_every_unordered_pair() {
    let out = run(&["check", &scg("two_block_chain.scg")]);
    assert_eq!(out.status.code(), Some(1)); // contains a blocked pair
    let text = stdout_of(&out);
    assert_eq!(text.lines().count(), 6);
    assert!(text.contains("PAIR A B NotSId TheoremBlocked"));
    assert!(text.contains("PAIR B C SId DirectedEdge"));
    assert!(text.contains("PAIR A C SId NoAdjacency"));
}

#[test]
fn check_effect_modes() {
    let out = run(&[
        "check",
        &scg("two_block_chain.scg"),
        "--effect",
        "total",
        "--treatment",
        "C",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_of(&out), "EFFECT total C Identifiable\n");

    let out = run(&[
        "check",
        &scg("two_block_chain.scg"),
        "--effect",
        "total",
        "--treatment",
        "A",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_of(&out), "EFFECT total A NotGuaranteed A:B\n");

    let out = run(&[
        "check",
        &scg("two_block_chain.scg"),
        "--effect",
        "cde",
        "--outcome",
        "D",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_of(&out), "EFFECT cde D Identifiable\n");
}

#[test]
fn check_empty_file_notes_and_exits_zero() {
    let dir = std::env::temp_dir().join("scg_orient_cli_tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("empty.scg");
    std::fs::write(&path, "# nothing here\n").unwrap();
    let out = run(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stderr).unwrap().contains("note: empty summary graph"));
}

#[test]
fn parse_error_exits_two_with_line_number() {
    let dir = std::env::temp_dir().join("scg_orient_cli_tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.scg");
    std::fs::write(&path, "A -> B\nB => C\n").unwrap();
    let out = run(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 2"));
}

#[test]
fn unknown_series_name_exits_two() {
    let out = run(&["check", &scg("two_block_chain.scg"), "--pair", "A", "Q"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_error_exits_two() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn discover_dumps_expected_orientations() {
    let out = run(&["discover", &tpl("collider_rescue_chain.tpl")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("Z[3] -> Y[3]"), "missing background edge:\n{text}");
    assert!(text.contains("Y[3] -> X[3]"), "missing chain-rule edge:\n{text}");
    assert!(!text.contains("--"));
}

#[test]
fn discover_lag_only_truth_has_no_undirected_lines() {
    let dir = std::env::temp_dir().join("scg_orient_cli_tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("lag_only.tpl");
    std::fs::write(&path, "X[-1] -> Y\nY[-1] -> Y\nY[-1] -> X\n").unwrap();
    let out = run(&["discover", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!stdout_of(&out).contains("--"));
}

#[test]
fn discover_blocked_pair_shows_undirected_interior_lines() {
    let out = run(&["discover", &tpl("mutual_both_loops_blocked.tpl")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    // Names intern in first-appearance order of the fixture (X first).
    assert!(text.contains("X[3] -- Y[3]") || text.contains("Y[3] -- X[3]"), "{text}");
}

#[test]
fn discover_respects_explicit_scg_and_rejects_wrong_one() {
    let out = run(&[
        "discover",
        &tpl("collider_rescue_chain.tpl"),
        "--scg",
        &scg("collider_rescue.scg"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&[
        "discover",
        &tpl("collider_rescue_chain.tpl"),
        "--scg",
        &scg("mutual.scg"),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn discover_first_only_matches_full_rules_on_decided_fixtures() {
    for fixture in [
        "mutual_rule1.tpl",
        "mutual_collider.tpl",
        "mutual_one_loop_forced.tpl",
        "mutual_one_loop_rule1.tpl",
        "collider_rescue_chain.tpl",
        "collider_rescue_vee.tpl",
    ] {
        let full = run(&["discover", &tpl(fixture)]);
        let first = run(&["discover", &tpl(fixture), "--rules", "first-only"]);
        assert_eq!(stdout_of(&full), stdout_of(&first), "{fixture}");
    }
}

#[test]
fn discover_stability_flag_passes_on_fixtures() {
    let out = run(&["discover", &tpl("two_block_chain_undirected.tpl"), "--stability"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stderr).unwrap().contains("stability: interior unchanged"));
}

#[test]
fn discover_window_override_and_too_small_window() {
    let out = run(&["discover", &tpl("mutual_rule1.tpl"), "--window", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("X[6]"));
    let out = run(&["discover", &tpl("mutual_rule1.tpl"), "--window", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("too small"));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let a = run(&["discover", &tpl("two_block_chain_undirected.tpl")]);
    let b = run(&["discover", &tpl("two_block_chain_undirected.tpl")]);
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["check", &scg("dense_trio.scg")]);
    let b = run(&["check", &scg("dense_trio.scg")]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn enumerate_prints_aligned_row() {
    let out = run(&["enumerate", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("not-fully-s-id"));
    assert!(text.contains("16"));
    assert!(text.contains("6.25"));
}

#[test]
fn enumerate_guard_and_force() {
    let out = run(&["enumerate", "6"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["enumerate", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_owns_stdout_and_human_report_moves_to_stderr() {
    let out = run(&["check", &scg("two_block_chain.scg"), "--json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["all_identifiable"], serde_json::Value::Bool(false));
    assert_eq!(doc["pairs"].as_array().unwrap().len(), 6);
    assert!(String::from_utf8(out.stderr).unwrap().contains("PAIR A B NotSId"));

    let out = run(&["enumerate", "3", "--json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["total_scgs"], serde_json::json!(512));

    let out = run(&["discover", &tpl("mutual_rule1.tpl"), "--json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert!(!doc["directed"].as_array().unwrap().is_empty());
}

#[test]
fn verify_two_series_summary_line() {
    let out = run(&["verify", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("16 SCGs, 0 disagreements"));
    let out = run(&["verify", "2", "--json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["disagreements"], serde_json::json!(0));
    assert_eq!(doc["scgs_checked"], serde_json::json!(16));
}

#[test]
fn verify_single_summary_reports_per_pair_agreement() {
    let out = run(&["verify", "--scg", &scg("two_block_chain.scg")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("PAIR A B expected=NotSId observed=unoriented-in-some agree=true"));
    assert!(text.contains("PAIR C D expected=SId observed=oriented-in-all agree=true"));
    assert!(text.contains("0 disagreements"));
}

#[test]
fn verify_guard_requires_force_above_three() {
    let out = run(&["verify", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn workers_env_variable_is_honored() {
    let out = bin()
        .args(["enumerate", "4"])
        .env("SCG_ORIENT_WORKERS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let with_flag = run(&["enumerate", "4", "--workers", "3"]);
    assert_eq!(stdout_of(&out), stdout_of(&with_flag));
}

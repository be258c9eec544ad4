//! End-to-end tests of the `nsbox` binary: exit codes, output shape, and
//! determinism, driven against the bundled fixture files.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.pop();
    p.pop();
    p.push("fixtures");
    p.push(name);
    p.to_str().unwrap().to_string()
}

fn nsbox(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nsbox"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn temp_path(name: &str) -> String {
    let mut p = std::env::temp_dir();
    p.push(format!("nsbox-test-{}-{name}", std::process::id()));
    p.to_str().unwrap().to_string()
}

#[test]
fn verify_accepts_the_pr_box() {
    let out = nsbox(&["verify", &fixture("pr_box.json")]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("normalization: OK"));
    assert!(text.contains("no-signalling: OK"));
}

#[test]
fn verify_flags_the_signalling_counterexample() {
    let out = nsbox(&["verify", &fixture("signalling_box.json")]);
    assert_eq!(exit_code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("no-signalling: FAILED"));
    assert!(text.contains("alice: output 0 at x=0"));
    assert!(text.contains("1/1") && text.contains("0/1"));
}

#[test]
fn verify_rejects_an_empty_file() {
    let path = temp_path("empty.json");
    std::fs::write(&path, "").unwrap();
    let out = nsbox(&["verify", &path]);
    assert_eq!(exit_code(&out), 2);
    std::fs::remove_file(&path).ok();
}

#[test]
fn verify_rejects_a_missing_file() {
    let out = nsbox(&["verify", "/nonexistent/box.json"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn game_chsh_classical_prints_three_quarters_and_a_strategy() {
    let out = nsbox(&["game", "chsh", "classical"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("value: 3/4 (0.7500000000)"));
    assert!(text.contains("maximizing strategy:"));
    assert!(text.contains("x=0 -> a=0"));
}

#[test]
fn game_chsh_pr_prints_one() {
    let out = nsbox(&["game", "chsh", "pr"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("value: 1/1 (1.0000000000)"));
}

#[test]
fn game_chsh_quantum_builtin_hits_tsirelson() {
    let out = nsbox(&["game", "chsh", "quantum-builtin"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("float value: 0.8535533906"));
    assert!(text.contains("(0.8535533906)"));
}

#[test]
fn game_accepts_a_box_file_strategy() {
    let strategy = format!("box:{}", fixture("pr_box.json"));
    let out = nsbox(&["game", "chsh", &strategy]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("value: 1/1"));
}

#[test]
fn game_loads_the_bundled_game_file() {
    let out = nsbox(&["game", &fixture("chsh_game.json"), "classical"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("value: 3/4"));
}

#[test]
fn game_rejects_unknown_strategies() {
    let out = nsbox(&["game", "chsh", "telepathy"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn fbox_reports_uniform_marginals_and_writes_the_box() {
    let path = temp_path("fbox.json");
    let out = nsbox(&["fbox", &fixture("and.tt"), "--out", &path]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("no-signalling: OK"));
    assert!(text.contains("uniform marginals: OK"));
    // The AND f-box written here is the PR box fixture, byte for byte.
    let written = std::fs::read_to_string(&path).unwrap();
    let bundled = std::fs::read_to_string(fixture("pr_box.json")).unwrap();
    assert_eq!(written, bundled);
    std::fs::remove_file(&path).ok();
}

#[test]
fn fbox_builds_noisy_boxes() {
    let out = nsbox(&["fbox", &fixture("and.tt"), "--p", "853553/1000000"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("correctness 853553/1000000"));
    assert!(text.contains("no-signalling: OK"));
}

#[test]
fn fbox_rejects_out_of_range_p() {
    let out = nsbox(&["fbox", &fixture("and.tt"), "--p", "1"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn compile_reports_box_counts() {
    let out = nsbox(&["compile", &fixture("and.tt")]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("box count: 1"));

    let out = nsbox(&["compile", &fixture("const0.tt")]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("box count: 0"));
}

#[test]
fn compile_check_is_exhaustive() {
    let out = nsbox(&["compile", &fixture("and.tt"), "--check"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("check: OK (4/4 inputs)"));

    let out = nsbox(&["compile", &fixture("parity3.tt"), "--check", "--side", "min"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("check: OK (64/64 inputs)"));
}

#[test]
fn compile_then_run_reconciles() {
    let path = temp_path("xor.protocol.json");
    let out = nsbox(&["compile", &fixture("xor.tt"), "--out", &path]);
    assert_eq!(exit_code(&out), 0);
    let out = nsbox(&["run", &path, "--x", "1", "--y", "0", "--seed", "9"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("joint\treconcile\t"));
    assert!(text.contains("a^b = 1"));
    assert!(text.contains("reconciliation matches"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn run_rejects_wrong_input_widths() {
    let path = temp_path("and.protocol.json");
    nsbox(&["compile", &fixture("and.tt"), "--out", &path]);
    let out = nsbox(&["run", &path, "--x", "10", "--y", "1"]);
    assert_eq!(exit_code(&out), 2);
    std::fs::remove_file(&path).ok();
}

#[test]
fn amplify_trivial_target_needs_one_repetition() {
    let out = nsbox(&[
        "amplify",
        &fixture("and.tt"),
        "--p",
        "17/20",
        "--epsilon",
        "3/20",
        "--trials",
        "200",
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("chosen k = 1"));
    assert!(text.contains("achieved correctness: 17/20"));
}

#[test]
fn amplify_rejects_p_half() {
    let out = nsbox(&[
        "amplify",
        &fixture("and.tt"),
        "--p",
        "1/2",
        "--epsilon",
        "1/10",
    ]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn amplify_writes_csv() {
    let path = temp_path("amplify.csv");
    let out = nsbox(&[
        "amplify",
        &fixture("xor.tt"),
        "--p",
        "4/5",
        "--epsilon",
        "1/10",
        "--trials",
        "400",
        "--seed",
        "3",
        "--csv",
        &path,
    ]);
    assert_eq!(exit_code(&out), 0);
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "x,y,trials,correct,empirical,exact");
    assert_eq!(lines.count(), 4); // one row per input pair
    std::fs::remove_file(&path).ok();
}

#[test]
fn halting_interprets_bundled_programs() {
    let out = nsbox(&[
        "halting",
        "--program",
        &fixture("countdown.rm"),
        "--input",
        "101",
        "--t",
        "100",
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("verdict: halted after 17 steps"));

    let out = nsbox(&[
        "halting",
        "--program",
        &fixture("loop.rm"),
        "--input",
        "0",
        "--t",
        "5000",
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("verdict: still running"));
}

#[test]
fn halting_table_mode_checks_the_box() {
    let out = nsbox(&[
        "halting",
        "--program-bits",
        "4",
        "--input-bits",
        "2",
        "--t",
        "100",
        "--check",
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("no-signalling: OK"));
    assert!(text.contains("check: OK (64/64 pairs"));
}

#[test]
fn halting_requires_a_complete_mode() {
    let out = nsbox(&["halting", "--program-bits", "4"]);
    assert_eq!(exit_code(&out), 2);
    let out = nsbox(&["halting", "--program", &fixture("loop.rm")]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn repeated_invocations_are_byte_identical() {
    let pr_box = fixture("pr_box.json");
    let and_tt = fixture("and.tt");
    let args = [
        vec!["game", "chsh", "quantum-builtin"],
        vec!["verify", &pr_box],
        vec![
            "amplify", &and_tt, "--p", "17/20", "--epsilon", "1/100", "--trials", "500", "--seed",
            "11",
        ],
    ];
    for a in &args {
        let first = nsbox(a);
        let second = nsbox(a);
        assert_eq!(first.stdout, second.stdout, "args {a:?}");
        assert_eq!(exit_code(&first), exit_code(&second));
    }
}

#[test]
fn bundled_fixtures_match_the_library_constructions() {
    use nsbox::format::{box_to_json, game_to_json};
    use nsbox::{chsh_game, make_fbox, BooleanFunction};
    let pr = std::fs::read_to_string(fixture("pr_box.json")).unwrap();
    assert_eq!(pr, box_to_json(&make_fbox(&BooleanFunction::and())));
    let chsh = std::fs::read_to_string(fixture("chsh_game.json")).unwrap();
    assert_eq!(chsh, game_to_json(&chsh_game()));
}

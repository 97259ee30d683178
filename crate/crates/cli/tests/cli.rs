use std::path::PathBuf;
use std::process::{Command, Output};

use dlkv::lang::Vocabulary;
use dlkv::reducer::parse_step;

fn dlkv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dlkv"))
        .args(args)
        .env_remove("DLKV_SEED")
        .env_remove("DLKV_CLOSURE_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// A scratch file unique to this test process.
fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dlkv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn scenarios() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

#[test]
fn reflexive_equality_is_valid() {
    let o = dlkv(&["valid", "(x@a = x@a)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("valid"));
}

#[test]
fn reduced_formula_is_static_and_valid() {
    let o = dlkv(&["reduce", "[!(a:d)] K{a} (nd@d = nd@d)"]);
    assert_eq!(o.status.code(), Some(0));
    let reduced = stdout(&o).trim().to_string();
    assert!(!reduced.contains('['), "{reduced}");
    assert!(!reduced.contains("after("), "{reduced}");
    let o = dlkv(&["valid", &reduced]);
    assert_eq!(stdout(&o).lines().next(), Some("valid"));
}

#[test]
fn trace_lines_parse_back() {
    let o = dlkv(&["reduce", "--trace", "[!(a:d)] K{a} (nd@d = nd@d) & after(!(b:a), desc(nb@b, {a}, top)) = 0"]);
    assert_eq!(o.status.code(), Some(0));
    let trace = stderr(&o);
    assert!(trace.lines().count() >= 3);
    for line in trace.lines() {
        let step = parse_step(line, &Vocabulary::new()).unwrap_or_else(|e| panic!("{line}: {e}"));
        assert_eq!(step.to_string(), line);
    }
}

#[test]
fn numbers_game_of_three_has_sixteen_states() {
    let o = dlkv(&["gen", "numbers-game", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("state ")).count(), 16);
    // The printed file reads back to itself.
    let path = scratch("ng3.model", &text);
    let again = dlkv(&["parse", "--model", path.to_str().unwrap()]);
    assert_eq!(stdout(&again), text);
}

#[test]
fn hypothetical_value_with_two_candidates_is_undefined() {
    let base = scratch("ng4.model", &stdout(&dlkv(&["gen", "numbers-game", "4"])));
    let s1 = stdout(&dlkv(&["update", "--model", base.to_str().unwrap(), "!(a:d)"]));
    let s1 = scratch("ng4-s1.model", &s1);
    let model = s1.to_str().unwrap();
    // Alex sees na=2 and nd=1, so nb is 1 or 3.
    let o = dlkv(&["eval", "--model", model, "--state", "s2_3_1", "desc(nb@b, {a}, top)"]);
    assert_eq!(stdout(&o), "s2_3_1: undef\n");
    let o = dlkv(&["eval", "--model", model, "--state", "s2_3_1", "desc(nb@b, {a}, na@a = 0 | nb@b = 3)"]);
    assert_eq!(stdout(&o), "s2_3_1: 3\n");
    let o = dlkv(&["check", "--model", model, "top"]);
    assert!(stdout(&o).lines().all(|l| l.ends_with(": true")));
}

#[test]
fn check_reports_each_state_in_kv_form() {
    let path = scratch("ng2.model", &stdout(&dlkv(&["gen", "numbers-game", "2"])));
    let o = dlkv(&["--format", "kv", "check", "--model", path.to_str().unwrap(), "K{a} (na@a = 0)"]);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 9);
    assert!(out.lines().all(|l| l.starts_with("state=") && l.contains(" value=")));
    assert!(out.contains("state=s0_1_1 value=true"));
    assert!(out.contains("state=s1_1_0 value=false"));
}

#[test]
fn scenario_exit_codes_follow_assertions() {
    let ok = scratch("ok.scn", "model numbers-game 3\napply !(a:d)\nassert top at all\n");
    let o = dlkv(&["scenario", ok.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let bad = scratch("bad.scn", "model numbers-game 3\nassert na@a = 0 at s1_0_1\n");
    let o = dlkv(&["scenario", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("false at s1_0_1"));
}

#[test]
fn announcing_the_last_number_leaves_four_states() {
    let path = scenarios().join("numbers_game_final.scn");
    let o = dlkv(&["--format", "kv", "scenario", path.to_str().unwrap()]);
    let out = stdout(&o);
    assert!(out.contains("step=6 line=9 kind=apply before=14 after=4"), "{out}");
    assert!(out.contains("final_states=4"));
}

#[test]
fn scenario_reports_are_byte_identical() {
    let path = scenarios().join("numbers_game.scn");
    let path = path.to_str().unwrap();
    for format in ["text", "kv"] {
        let a = dlkv(&["--format", format, "scenario", path]);
        let b = dlkv(&["--format", format, "scenario", path]);
        assert_eq!(a.stdout, b.stdout);
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn malformed_input_exits_with_one() {
    assert_eq!(dlkv(&["sat", "K{a}"]).status.code(), Some(1));
    assert_eq!(dlkv(&["parse", "x@a = "]).status.code(), Some(1));
    assert_eq!(dlkv(&["check", "--model", "/nonexistent/model", "top"]).status.code(), Some(1));
    let path = scratch("ng1.model", &stdout(&dlkv(&["gen", "numbers-game", "1"])));
    let o = dlkv(&["check", "--model", path.to_str().unwrap(), "--state", "nowhere", "top"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn closure_cap_exits_with_two() {
    let o = dlkv(&["sat", "--closure-cap", "3", "K{a} p"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("closure exceeds 3"));
    let o = Command::new(env!("CARGO_BIN_EXE_dlkv"))
        .args(["valid", "K{a} p -> p"])
        .env("DLKV_CLOSURE_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn random_models_echo_their_seed() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_dlkv"))
            .args(["gen", "random"])
            .env("DLKV_SEED", seed)
            .output()
            .unwrap()
    };
    let a = stdout(&run("7"));
    assert!(a.starts_with("# seed 7\n"));
    assert_eq!(a, stdout(&run("7")));
    let path = scratch("random.model", &a);
    assert_eq!(dlkv(&["check", "--model", path.to_str().unwrap(), "top"]).status.code(), Some(0));
}

#[test]
fn sat_trace_shows_witness_or_log() {
    let o = dlkv(&["sat", "--trace", "~K{a} (y@b = 0) & y@b = 0"]);
    let out = stdout(&o);
    assert!(out.starts_with("sat\n"));
    assert!(out.contains("witness type:"));
    let o = dlkv(&["sat", "--trace", "K{a} (y@b = 0) & ~(y@b = 0)"]);
    let out = stdout(&o);
    assert!(out.starts_with("unsat\n"));
    assert!(out.contains("none containing the formula"));
}

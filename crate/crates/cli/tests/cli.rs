use std::process::{Command, Output};

use serde_json::Value;
use weingarten::{ColoredWord, GroupSpec, SpaceSpec};

fn wg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wg"))
        .args(args)
        .env_remove("WG_CACHE_DIR")
        .output()
        .expect("failed to run wg")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

#[test]
fn orthogonal_free_fourth_moment() {
    let v = json(&wg(&["group-moment", "--group", "O+:4", "--word", "oooo", "--rows", "1,1,1,1", "--cols", "1,1,1,1"]));
    assert_eq!(v["value"], "1/10");
    assert_eq!(v["value_float"], 0.1);
}

#[test]
fn bp_compare_ends_with_bell_and_catalan() {
    let v = json(&wg(&["bp-compare", "--category", "S", "--t", "1", "--max-k", "4"]));
    let last = v["rows"].as_array().unwrap().last().unwrap().clone();
    assert_eq!((last["k"].as_u64(), last["classical"].as_str(), last["free"].as_str()), (Some(4), Some("15"), Some("14")));
}

#[test]
fn bp_compare_matches_golden_file() {
    let out = wg(&["bp-compare", "--category", "S", "--t", "1", "--max-k", "4"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), include_str!("golden/bp_compare_s_t1_k4.json"));
}

#[test]
fn csv_table() {
    let out = wg(&["bp-compare", "--category", "O", "--t", "1", "--max-k", "6", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "k,classical,free\n1,0,0\n2,1,1\n3,0,0\n4,3,2\n5,0,0\n6,15,5\n"
    );
}

#[test]
fn verify_free_real_sphere_passes() {
    let out = wg(&["verify", "--space", "free-real-sphere:5", "--max-k", "4", "--test-degree", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["failed"], 0);
    assert_eq!(v["passed"], v["checks"]);
    assert!(v["checks"].as_u64().unwrap() > 0);
}

#[test]
fn verify_full_lists_every_check() {
    let v = json(&wg(&["verify", "--space", "U:2/I=1", "--max-k", "2", "--test-degree", "1", "--full"]));
    assert_eq!(v["rows"].as_array().unwrap().len() as u64, v["checks"].as_u64().unwrap());
}

#[test]
fn output_is_deterministic() {
    let mc = [
        "oracle", "haar-mc", "--group", "U:3", "--word", "ob", "--rows", "1,1", "--cols", "1,1", "--samples", "20000",
        "--seed", "11",
    ];
    assert_eq!(wg(&mc).stdout, wg(&mc).stdout);
    let verify = ["verify", "--space", "O:3/I=1,2", "--max-k", "3", "--test-degree", "1", "--full"];
    let one = wg(&[&verify[..], &["--threads", "1"]].concat());
    let many = wg(&[&verify[..], &["--threads", "4"]].concat());
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(one.stdout, wg(&verify).stdout);
}

#[test]
fn different_seeds_differ() {
    let run = |seed: &str| {
        json(&wg(&[
            "oracle", "haar-mc", "--group", "O:3", "--word", "oo", "--rows", "1,1", "--cols", "1,1", "--samples",
            "10000", "--seed", seed,
        ]))["estimate"]
            .clone()
    };
    assert_ne!(run("1"), run("2"));
}

#[test]
fn echoed_inputs_parse_back() {
    let v = json(&wg(&["group-moment", "--group", " O+:4", "--word", "obbo", "--rows", "1,2,1,2", "--cols", "1,1,2,2"]));
    let group: GroupSpec = v["inputs"]["group"].as_str().unwrap().parse().unwrap();
    assert_eq!(group, "O+:4".parse().unwrap());
    let word: ColoredWord = v["inputs"]["word"].as_str().unwrap().parse().unwrap();
    assert_eq!(word, "obbo".parse().unwrap());

    for space in ["column-space:O+:4:2", "S:3xO:2/J=1,2", "U+:5/I=2,4"] {
        let v = json(&wg(&["relations", "--space", space, "--max-k", "2"]));
        let echoed: SpaceSpec = v["inputs"]["space"].as_str().unwrap().parse().unwrap();
        assert_eq!(echoed, space.parse().unwrap());
    }
}

#[test]
fn input_errors_exit_one() {
    for args in [
        &["bogus"][..],
        &["group-moment", "--group", "O+:4", "--word", "oo", "--rows", "1,1", "--cols", "1,1", "--frobnicate"],
        &["group-moment", "--group", "Q:4", "--word", "oo", "--rows", "1,1", "--cols", "1,1"],
        &["group-moment", "--group", "O:2", "--word", "oo", "--rows", "1,3", "--cols", "1,1"],
        &["group-moment", "--group", "O:2", "--word", "oox", "--rows", "1,1,1", "--cols", "1,1,1"],
        &["bp-compare", "--category", "S+", "--t", "1"],
        &["space-moment", "--space", "O:3xO:3/J=1", "--word", "o", "--indices", "1"],
        &["limit-moments", "--law", "poisson", "--t", "-1"],
        &["convergence", "--family", "free-real-sphere:5", "--ns", "2,3", "--word", "oo"],
    ] {
        let out = wg(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn help_exits_zero() {
    let out = wg(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("group-moment"));
}

#[test]
fn cache_dir_persists_and_reloads() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    let args = ["weingarten", "--category", "U", "--word", "obob", "--n", "3", "--cache-dir", path];
    let first = wg(&args);
    assert!(first.status.success());
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
    let second = wg(&args);
    assert_eq!(first.stdout, second.stdout);

    let env_dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_wg"))
        .args(&args[..7])
        .env("WG_CACHE_DIR", env_dir.path())
        .output()
        .unwrap();
    assert_eq!(out.stdout, first.stdout);
    assert!(std::fs::read_dir(env_dir.path()).unwrap().count() > 0);
}

#[test]
fn timing_only_on_request() {
    let args = ["char-exact", "--space", "free-real-sphere:4", "--word", "oooo"];
    assert!(json(&wg(&args)).get("timing_ms").is_none());
    assert!(json(&wg(&[&args[..], &["--timing"]].concat()))["timing_ms"].is_number());
}

#[test]
fn space_moment_reports_unscaled_pair() {
    let v = json(&wg(&["space-moment", "--space", "O:4/I=1,2", "--word", "oo", "--indices", "1,1"]));
    // ∫ x_1^2 = 1/4, and h = √2 x
    assert_eq!(v["value"], "1/2");
    assert_eq!(v["unscaled"]["coefficient"], "1/2");
    assert_eq!(v["unscaled"]["m"], 2);
    assert_eq!(v["unscaled"]["k"], 2);
    assert_eq!(v["unscaled"]["float"], 0.25);
}

#[test]
fn oracle_agrees_with_engine() {
    let q = ["--word", "oobb", "--rows", "1,2,1,2", "--cols", "1,2,2,1"];
    let oracle = json(&wg(&[&["oracle", "sn-moment", "--n", "4"][..], &q].concat()));
    let engine = json(&wg(&[&["group-moment", "--group", "S:4"][..], &q].concat()));
    assert_eq!(oracle["value"], engine["value"]);
    let counting = json(&wg(&["oracle", "counting", "--kind", "bell", "--k", "6"]));
    assert_eq!(counting["value"], "203");
}

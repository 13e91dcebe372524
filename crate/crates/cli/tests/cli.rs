//! The `hhpush` binary end to end, and the checked-in scene files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hhpush::rng::{stream, CaseRng};
use hhpush::scene_file::{parse, SceneFile};
use hhpush_core::sample::{self, Entropy};
use hhpush_core::scene::{builtin, builtin_scene, BUILTIN_NAMES};

fn scenes_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenes")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hhpush")).args(args).output().expect("binary runs")
}

#[test]
fn verify_passes_on_a2() {
    let out = run(&["verify", "--scene", "A2", "--seed", "0", "--suite", "dsquare"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).trim_end().ends_with("PASS"));
}

#[test]
fn tampered_scene_fails_validation() {
    let path = scenes_dir().join("a2_tampered.json");
    let out = run(&["verify", "--scene", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], false);
    assert!(v["validation"][0].as_str().unwrap().contains("f != x*g"));
}

#[test]
fn json_reports_are_byte_identical() {
    let path = scenes_dir().join("p1.json");
    let args = ["verify", "--scene", path.to_str().unwrap(), "--seed", "7", "--suite", "lax", "--format", "json"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn homology_reports_dimensions() {
    let out = run(&["homology", "--scene", "P1", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["homology"][0]["complex"], "omega");
    assert_eq!((v["homology"][0]["even"].as_u64(), v["homology"][0]["odd"].as_u64()), (Some(2), Some(0)));
}

#[test]
fn pushforward_agrees_on_p1() {
    let out = run(&["pushforward", "--scene", "P1", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pushforward"]["agree"], true);
    assert_eq!(v["pushforward"]["stable"], true);
}

#[test]
fn minus_todd_sign_breaks_the_p1_pushforward() {
    let out = run(&["pushforward", "--scene", "P1", "--todd-sign", "minus", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_suite_is_an_error() {
    let out = run(&["verify", "--scene", "A1", "--suite", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown suite"));
}

#[test]
fn missing_scene_is_an_error() {
    let out = run(&["homology", "--scene", "no-such-scene.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn report_flag_writes_the_file() {
    let dir = std::env::temp_dir().join(format!("hhpush-report-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.json");
    let out = run(&["homology", "--scene", "A2", "--format", "json", "--report", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["scene"], "A2");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn scene_files_match_the_builtins() {
    for n in BUILTIN_NAMES {
        let path = scenes_dir().join(format!("{}.json", n.to_lowercase()));
        let file = parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(file, SceneFile::from(&builtin(n).unwrap()), "{}", path.display());
    }
}

#[test]
fn a_stream_replays_its_case() {
    let scene = builtin_scene("P1").unwrap();
    let ring = scene.ring(&[0, 1]).unwrap();
    let draw = |seed, s| {
        let mut r = CaseRng::new(seed, s);
        format!("{:?} {:?}", sample::form(&ring, &mut r, 4), r.below(1000))
    };
    let s = stream(3, 41);
    assert_eq!(draw(5, s), draw(5, s));
    assert_ne!(draw(5, s), draw(5, stream(3, 42)));
}

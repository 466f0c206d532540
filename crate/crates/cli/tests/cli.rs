use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parasde"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn lists_every_command() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["--list"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    for name in [
        "schauder-probe",
        "paraproduct-probe",
        "commutator-probe",
        "solve-young",
        "solve-rough",
        "lift-white-noise",
        "chaos-oracle",
        "stable-check",
        "campbell-check",
        "simulate",
        "martingale-test",
        "moment-scaling",
        "brox-demo",
    ] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing");
    }
}

#[test]
fn inadmissible_alpha_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["simulate", "--alpha", "2.5"]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("params.alpha") && e.contains("(0, 2]"), "{e}");
    assert!(!dir.path().join("out").exists());
}

#[test]
fn unknown_fields_and_bad_types_name_their_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, "command = \"simulate\"\n[params]\npaths = 1000\nbogus = 1\n").unwrap();
    let o = run(dir.path(), &["--config", "c.toml"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("params.bogus"), "{}", stderr(&o));

    let o = run(dir.path(), &["simulate", "--set", "paths=\"many\""]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("params.paths"), "{}", stderr(&o));

    let o = run(dir.path(), &["no-such-command"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn free_young_solve_writes_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["solve-young", "--out", "res", "--set", "drift=[]", "--set", "n=32", "--set", "m=64"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("res/solve-young.json")).unwrap()).unwrap();
    assert_eq!(json["command"], "solve-young");
    assert_eq!(json["config"]["params"]["n"], 32);
    assert_eq!(json["report"]["pass"], true);
    let csv = fs::read_to_string(dir.path().join("res/solve-young-snapshots.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,x,u"));
    assert!(lines.count() >= 32);
}

#[test]
fn failed_checks_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["solve-young", "--quiet", "--set", "tol=1e-12"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("solve-young: FAIL"));
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out| ["simulate", "--seed", "3", "--out", out, "--quiet", "--set", "paths=1000", "--set", "steps=64", "--set", "dump_paths=2"];
    assert!(run(dir.path(), &args("a")).status.success());
    assert!(run(dir.path(), &args("b")).status.success());
    for f in ["simulate.json", "simulate-marginals.csv", "simulate-paths.csv"] {
        let a = fs::read(dir.path().join("a").join(f)).unwrap();
        assert_eq!(a, fs::read(dir.path().join("b").join(f)).unwrap(), "{f}");
    }
}

#[test]
fn config_file_sets_command_seed_and_out() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("c.toml"),
        "command = \"stable-check\"\nseed = 4\nout = \"from-file\"\n[params]\nsamples = 2000\n",
    )
    .unwrap();
    let o = run(dir.path(), &["--config", "c.toml", "--quiet"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("from-file/stable-check.json")).unwrap()).unwrap();
    assert_eq!(json["config"]["seed"], 4);
}

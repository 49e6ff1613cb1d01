use std::process::{Command, Output};

fn ssilab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ssilab")).args(args).env_remove("SSILAB_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn list_names_every_experiment() {
    let o = ssilab(&["list", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), ssilab::cli::catalog().len());
}

#[test]
fn passing_run_exits_zero_with_json_report() {
    let o = ssilab(&["ssi-bound", "--param", "d=4", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let r = ssilab::report::ExperimentReport::from_json(&stdout(&o)).unwrap();
    assert_eq!(r.experiment, "ssi-bound");
}

#[test]
fn failing_verdict_exits_two() {
    let o = ssilab(&["bound-calc", "--param", "epsilon=0.001", "--param", "n=1", "--param", "q=1", "--param", "measured=0.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_errors_exit_sixty_four() {
    assert_eq!(ssilab(&["exp", "no-such-experiment"]).status.code(), Some(64));
    assert_eq!(ssilab(&["ssi-bound", "--param", "colour=red"]).status.code(), Some(64));
    assert_eq!(ssilab(&["ssi-bound", "--bogus-flag"]).status.code(), Some(64));
    assert_eq!(ssilab(&["ssi-bound", "--threads", "0"]).status.code(), Some(64));
}

#[test]
fn csv_output_has_header() {
    let o = ssilab(&["sde", "--trials", "200", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().count() > 1);
    assert!(text.lines().next().unwrap().contains(','));
}

#[test]
fn run_from_config_file_writes_output() {
    let dir = std::env::temp_dir().join(format!("ssilab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("cfg.json");
    let out = dir.join("report.json");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"experiment": "weakue", "params": {{"n": 4, "trials": 500}}, "seed": 3, "out": {:?}}}"#,
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    let o = ssilab(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = ssilab::report::ExperimentReport::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r.seed, 3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn reports_are_byte_identical_across_runs_and_workers() {
    let args = ["ueq", "--trials", "800", "--seed", "11", "--threads", "1"];
    let a = stdout(&ssilab(&args));
    let b = stdout(&ssilab(&args));
    assert_eq!(a, b);
    let c = Command::new(env!("CARGO_BIN_EXE_ssilab"))
        .args(["ueq", "--trials", "800", "--seed", "11"])
        .env("SSILAB_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(a, stdout(&c));
    let bad = Command::new(env!("CARGO_BIN_EXE_ssilab")).args(["ueq"]).env("SSILAB_THREADS", "x").output().unwrap();
    assert_eq!(bad.status.code(), Some(64));
}

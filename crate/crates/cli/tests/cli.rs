use std::process::{Command, Output};

fn hnnt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hnnt")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const HNN: &str = "base rank=2; step 1 hnn source=g0 target=g1";

#[test]
fn reduce_examples() {
    let o = hnnt(&["reduce", "t1 g0 t1^-1", "--tower", HNN]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "g1\n");
    assert_eq!(stdout(&hnnt(&["reduce", "e"])), "e\n");
}

#[test]
fn malformed_input_exits_with_error() {
    let o = hnnt(&["reduce", "g0 ^^"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    assert_eq!(hnnt(&["reduce", "t1", "--tower", "base rank=2"]).status.code(), Some(2));
    assert_eq!(hnnt(&["lemmas", "--radius", "0"]).status.code(), Some(2));
}

#[test]
fn structured_reduce_has_schema_version() {
    let o = hnnt(&["reduce", "t1 g0 t1^-1", "--tower", HNN, "--format", "structured"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["result"]["normal_form"], "g1");
    assert_eq!(v["ok"], true);
}

#[test]
fn build_reports_one_entry_per_stage() {
    let o = hnnt(&["build", "--stages", "2", "--format", "structured"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let stages = v["result"]["stages"].as_array().unwrap();
    assert_eq!(stages.len(), 2);
    assert_eq!(stages[0]["ledger_fraction"], "4/16");
    let base = hnnt(&["build", "--stages", "0", "--format", "structured"]);
    let v: serde_json::Value = serde_json::from_slice(&base.stdout).unwrap();
    assert!(v["result"]["stages"].as_array().unwrap().is_empty());
}

#[test]
fn config_file_supplies_defaults() {
    let dir = std::env::temp_dir().join(format!("hnnt-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let tower = dir.join("tower.txt");
    std::fs::write(&tower, "base rank=2\nstep 1 hnn source=g0 target=g1\n").unwrap();
    let cfg = dir.join("run.toml");
    std::fs::write(
        &cfg,
        format!("tower = {:?}\nformat = \"structured\"\n", tower.display().to_string()),
    )
    .unwrap();
    let o = hnnt(&["reduce", "t1 g0 t1^-1", "--config", cfg.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["normal_form"], "g1");
    // flags override the file
    let o = hnnt(&[
        "reduce",
        "t1 g0 t1^-1",
        "--config",
        cfg.to_str().unwrap(),
        "--format",
        "text",
    ]);
    assert_eq!(stdout(&o), "g1\n");
    std::fs::write(&cfg, "bogus = 1\n").unwrap();
    assert_eq!(
        hnnt(&["reduce", "e", "--config", cfg.to_str().unwrap()]).status.code(),
        Some(2)
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn small_runs_succeed() {
    for args in [
        vec!["lemmas", "--radius", "2"],
        vec!["classical", "--count", "10"],
        vec!["confluence", "--cap", "200"],
        vec!["field", "--cap", "5"],
    ] {
        let o = hnnt(&args);
        assert!(o.status.success(), "{args:?}: {}", stdout(&o));
        assert!(stdout(&o).contains(": ok"));
    }
}

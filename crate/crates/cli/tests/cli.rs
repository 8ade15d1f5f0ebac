use std::process::{Command, Output};

fn relqh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relqh")).args(args).env_remove("OGW_CACHE").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn open_invariant_fills_k() {
    let o = relqh(&["invariant", "--space", "q-odd", "--n", "3", "--kind", "open", "--beta", "1", "--constraints", ""]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["value"], "2/1");
    assert_eq!(v["k"], 3);
}

#[test]
fn closed_invariant() {
    let o = relqh(&[
        "invariant",
        "--space",
        "q-even",
        "--n",
        "4",
        "--kind",
        "closed",
        "--beta",
        "2",
        "--constraints",
        "h4,h4,h4",
    ]);
    assert!(o.status.success());
    assert_eq!(json(&o)["value"], "8/1");
    let o = relqh(&["invariant", "--space", "q2", "--n", "2", "--beta", "1,0", "--constraints", "ll,l"]);
    assert_eq!(json(&o)["value"], "1/1");
}

#[test]
fn plain_k_zero_vanishes_on_projective_space() {
    let o = relqh(&[
        "invariant",
        "--space",
        "pn",
        "--n",
        "3",
        "--kind",
        "open",
        "--beta",
        "2",
        "--k",
        "0",
        "--constraints",
        "g1,g3",
    ]);
    assert!(o.status.success());
    assert_eq!(json(&o)["value"], "0/1");
}

#[test]
fn exit_codes() {
    let o = relqh(&["invariant", "--space", "q-odd", "--n", "4", "--beta", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = relqh(&["invariant", "--space", "q-odd", "--n", "3", "--beta", "1", "--constraints", "h9"]);
    assert_eq!(o.status.code(), Some(2));
    let o = relqh(&[
        "invariant",
        "--space",
        "pn",
        "--n",
        "3",
        "--kind",
        "enhanced",
        "--beta",
        "2",
        "--constraints",
        "g2,g2,g3",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(String::from_utf8(o.stderr).unwrap().lines().count(), 1);
}

#[test]
fn table_check_and_formats() {
    let o = relqh(&["table", "--table", "1", "--n", "3", "--max-m", "2", "--check"]);
    assert!(o.status.success());
    let csv = stdout(&o);
    let values: Vec<&str> = csv.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(values, ["2/1", "96/1", "1036800/1"]);
    let o = relqh(&["table", "--table", "1", "--n", "3", "--max-m", "2", "--format", "json"]);
    let rows = json(&o);
    let jv: Vec<&str> = rows.as_array().unwrap().iter().map(|r| r["value"].as_str().unwrap()).collect();
    assert_eq!(jv, values);

    let o = relqh(&["table", "--table", "3", "--beta-max", "2", "--check"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l.starts_with("3,2,2,") && l.ends_with(",32/1")));
    let o = relqh(&["table", "--table", "4", "--beta-max", "2", "--check"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l.starts_with("4,2,3,") && l.ends_with(",412/1")));
    // Cells outside the printed range cannot be checked and fail loudly.
    let o = relqh(&["table", "--table", "2", "--beta-max", "6", "--max-l3", "0", "--check"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn ring_and_presentation() {
    let o = relqh(&["ring", "--space", "q-odd", "--n", "3", "--side", "relative"]);
    assert!(o.status.success());
    let v = json(&o);
    let hit = v["products"]
        .as_array()
        .unwrap()
        .iter()
        .any(|p| p["left"] == "g3" && p["right"] == "diamond" && p["product"] == "-2*T*diamond");
    assert!(hit, "{v}");
    let o = relqh(&["presentation", "--n", "5", "--degrees", "2", "--l-trivial"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["relations"][0], "x^6 - 4*q*x");
    let o = relqh(&["presentation", "--n", "3", "--degrees", "2,2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn presentation_reads_pairing_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    std::fs::write(&path, r#"[["1/1"]]"#).unwrap();
    let o = relqh(&["presentation", "--n", "7", "--degrees", "3", "--pairing", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(json(&o)["relations"][1], "w1^2 - 1/3*x^7 + 9*q*x");
}

#[test]
fn cache_file_persists_and_is_reused() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    let args = ["--cache", cache.to_str().unwrap(), "table", "--table", "2", "--beta-max", "3", "--max-l3", "1"];
    let cold = relqh(&args);
    assert!(cold.status.success());
    let lines = std::fs::read_to_string(&cache).unwrap().lines().count();
    assert!(lines > 0);
    let warm = relqh(&args);
    assert_eq!(stdout(&warm), stdout(&cold));
    assert_eq!(std::fs::read_to_string(&cache).unwrap().lines().count(), lines);
    let o = Command::new(env!("CARGO_BIN_EXE_relqh"))
        .args(["invariant", "--space", "q-odd", "--n", "3", "--kind", "open", "--beta", "3"])
        .env("OGW_CACHE", &cache)
        .output()
        .unwrap();
    assert_eq!(json(&o)["value"], "96/1");
}

#[test]
fn verify_reports_counts() {
    let o = relqh(&["verify", "--suite", "signs", "--budget", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("PASS sign-changed family (checked "));
}

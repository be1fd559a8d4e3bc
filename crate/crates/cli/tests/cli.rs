use std::process::{Command, Output};

use tempfile::TempDir;

fn mixcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mixcert")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn construct_then_verify() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("c.json");
    let p = path.to_str().unwrap();
    let o = mixcert(&["fedotov", "construct", "--n", "4", "--k", "2", "--output", p]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("independent verification: valid"));
    let o = mixcert(&["fedotov", "verify", p]);
    assert_eq!(o.status.code(), Some(0));

    let json = mixcert(&["fedotov", "construct", "--n", "4", "--k", "2", "--format", "json"]);
    assert_eq!(stdout(&json), std::fs::read_to_string(&path).unwrap());
}

#[test]
fn tampered_and_malformed_certificates_fail() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("c.json");
    let p = path.to_str().unwrap();
    mixcert(&["fedotov", "construct", "--n", "4", "--k", "2", "--output", p]);
    let raw = std::fs::read_to_string(&path).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&raw).unwrap();
    v["violation"]["I"] = serde_json::json!([0]);
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    let o = mixcert(&["fedotov", "verify", p]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("INVALID"));

    std::fs::write(&path, "{\"version\": 1").unwrap();
    assert_eq!(mixcert(&["fedotov", "verify", p]).status.code(), Some(1));
}

#[test]
fn usage_errors_name_the_flag() {
    let o = mixcert(&["fedotov", "construct", "--n", "3", "--k", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--n"));

    let o = mixcert(&["fedotov", "construct", "--n", "6", "--k", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--k"));

    let o = mixcert(&["fedotov", "search", "--n", "4", "--k", "2", "--m", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--m"));

    let o = mixcert(&["hodge", "primitive", "--n", "5", "--k", "3"]);
    assert_eq!(o.status.code(), Some(2));

    let o = mixcert(&["selftest", "--threads", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--threads"));

    let o = mixcert(&["fedotov", "construct", "--n", "4"]);
    assert_eq!(o.status.code(), Some(2));

    let o = mixcert(&["fedotov", "verify", "/nonexistent/c.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn hodge_reports_dimension() {
    let o = mixcert(&["hodge", "primitive", "--n", "4", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("dimension: 2"));
    assert!(stdout(&o).contains("pairing rank: 6"));
}

#[test]
fn mixvol_file() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("t.json");
    std::fs::write(
        &path,
        r#"{"n":2,"entries":[{"body":{"n":2,"widths":["1","2"]},"multiplicity":1},
                             {"body":{"n":2,"widths":["3","1"],"offset":["1","-1"]},"multiplicity":1}]}"#,
    )
    .unwrap();
    let o = mixcert(&["mixvol", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["permanent"], "7/2");
    assert_eq!(v["agree"], true);

    std::fs::write(&path, r#"{"n":3,"entries":[]}"#).unwrap();
    assert_eq!(mixcert(&["mixvol", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn shephard_from_file_and_random() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("s.json");
    std::fs::write(
        &path,
        r#"{"bodies":[{"n":3,"widths":["1","2","3"]},{"n":3,"widths":["2","4","6"]},{"n":3,"widths":["3","1","1/2"]}],
            "c_list":[{"n":3,"widths":["1","1","1"]}]}"#,
    )
    .unwrap();
    let o = mixcert(&["shephard", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("det M = 0"));

    let o = mixcert(&["shephard", "--n", "6", "--m", "6", "--seed", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["subsets_checked"], 63);
}

#[test]
fn search_is_reproducible_and_k1_finds_nothing() {
    let args = ["fedotov", "search", "--n", "5", "--k", "1", "--m", "5", "--trials", "25", "--seed", "4", "--format", "json"];
    let a = mixcert(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&mixcert(&args)));
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["certificate"], serde_json::Value::Null);
    assert_eq!(v["stats"]["hyperbolic"], 25);

    let o = mixcert(&["fedotov", "search", "--n", "4", "--k", "2", "--m", "3", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("trials: 0"));
}

#[test]
fn search_hit_writes_a_verifiable_certificate() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("hit.json");
    let p = path.to_str().unwrap();
    let o = mixcert(&["fedotov", "search", "--n", "4", "--k", "2", "--m", "3", "--trials", "200", "--seed", "1", "--output", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("first hit"));
    assert_eq!(mixcert(&["fedotov", "verify", p]).status.code(), Some(0));
}

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn spinfusion(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinfusion"))
        .args(args)
        .env_remove("SPINFUSION_CACHE_DIR")
        .output()
        .unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn statuses(cert: &Value) -> Vec<(String, String)> {
    cert["records"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            (
                r["claim_id"].as_str().unwrap().to_string(),
                r["status"].as_str().unwrap().to_string(),
            )
        })
        .collect()
}

#[test]
fn dickson_suite_passes_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let out = spinfusion(&[
        "--q",
        "3",
        "--suite",
        "dickson",
        "--output",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json = read_json(&cert);
    let st = statuses(&json);
    assert_eq!(st.len(), 7);
    assert!(st.iter().all(|(_, s)| s == "pass"), "{st:?}");
    assert_eq!(json["schema"], 1);
    assert_eq!(json["config"]["q"], 3);

    let replay = spinfusion(&["--replay", cert.to_str().unwrap()]);
    assert_eq!(replay.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&replay.stdout).trim(), "true");
    let verify = spinfusion(&["verify-certificate", cert.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(0));
}

#[test]
fn identical_runs_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = spinfusion(&[
            "run",
            "--suite",
            "orders",
            "--suite",
            "saturation-small",
            "-o",
            p.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn tampered_certificate_fails_replay() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let out = spinfusion(&["--suite", "orders", "-o", cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&cert).unwrap();
    // flip one bit of one witness value
    let at = text.find("\"value\": \"3\"").unwrap() + 10;
    let mut bytes = text.into_bytes();
    bytes[at] ^= 1;
    std::fs::write(&cert, &bytes).unwrap();
    let out = spinfusion(&["verify-certificate", cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "false");
    assert!(String::from_utf8_lossy(&out.stderr).contains("digest mismatch"));
}

#[test]
fn empty_certificate_replays() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("empty.json");
    let c = spinfusion::cert::Certificate::new(Value::Null, vec![]);
    std::fs::write(&cert, c.to_json()).unwrap();
    let out = spinfusion(&["replay", cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "true");
}

#[test]
fn configuration_errors_exit_with_two() {
    assert_eq!(spinfusion(&["--q", "4"]).status.code(), Some(2));
    assert_eq!(
        spinfusion(&["--suite", "everything"]).status.code(),
        Some(2)
    );
    assert_eq!(
        spinfusion(&["--suite", "dickson", "--max-degree", "40"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        spinfusion(&["verify-certificate", "/nonexistent/cert.json"])
            .status
            .code(),
        Some(2)
    );
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{\"schema\": 1}").unwrap();
    assert_eq!(
        spinfusion(&["verify-certificate", junk.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn unit_search_records_rejected_closures() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("u.json");
    let out = Command::new(env!("CARGO_BIN_EXE_spinfusion"))
        .args([
            "--q",
            "3",
            "--suite",
            "find-u",
            "-o",
            cert.to_str().unwrap(),
        ])
        .env("SPINFUSION_CACHE_DIR", dir.path().join("cache"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let json = read_json(&cert);
    let w = &json["records"][0]["witnesses"];
    assert_eq!(w["accepted"], serde_json::json!([5]));
    assert_eq!(w["modulus"], 8);
    let rejected: Vec<(u64, u64)> = w["candidates"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["accepted"] == false)
        .map(|c| {
            (
                c["u"].as_u64().unwrap(),
                c["closure_order"].as_u64().unwrap(),
            )
        })
        .collect();
    assert_eq!(rejected, vec![(1, 86016)]);
    // the cache directory from the environment was used
    let cached = std::fs::read_dir(dir.path().join("cache")).unwrap().count();
    assert_eq!(cached, 1);
    // the cache location is not part of the certificate
    assert!(json["config"].get("cache_dir").is_none());
}

#[test]
fn lists_suites() {
    let out = spinfusion(&["suites"]);
    assert_eq!(out.status.code(), Some(0));
    let names = String::from_utf8_lossy(&out.stdout);
    assert_eq!(names.lines().count(), 8);
    assert!(names.contains("fusion-core"));
}

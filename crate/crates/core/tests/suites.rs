use serde_json::json;
use spinfusion::cert::{CertError, Certificate, Status};
use spinfusion::suites::{replay, run, RunConfig, Suite, SuiteError};

fn cheap() -> RunConfig {
    RunConfig {
        suites: vec![Suite::Dickson, Suite::Orders, Suite::SaturationSmall],
        ..RunConfig::default()
    }
}

#[test]
fn certificates_are_byte_identical() {
    let a = run(&cheap()).unwrap();
    let b = run(&cheap()).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert!(a.digest_matches());
    assert!(!a.has_failures());
    assert!(a.records.iter().all(|r| r.wall_ms.is_none()));
    let timed = run(&RunConfig {
        timings: true,
        ..cheap()
    })
    .unwrap();
    assert_eq!(timed.digest, a.digest);
    assert!(timed.records.iter().all(|r| r.wall_ms.is_some()));
}

#[test]
fn suite_selection_orders_claims() {
    let c = run(&RunConfig {
        suites: vec![Suite::Orders, Suite::Dickson],
        ..RunConfig::default()
    })
    .unwrap();
    let ids: Vec<&str> = c.records.iter().map(|r| r.claim_id.as_str()).collect();
    assert_eq!(ids.first(), Some(&"dickson.relations"));
    assert_eq!(ids.last(), Some(&"orders.odd-index"));
    assert_eq!(ids.len(), 8);
}

#[test]
fn replay_reproduces_and_detects_tampering() {
    let cert = run(&cheap()).unwrap();
    let r = replay(&cert, None).unwrap();
    assert!(r.passed());
    assert_eq!(r.outcomes.len(), cert.records.len());

    // an unsealed edit breaks the digest
    let mut text = cert.to_json();
    let at = text.find("\"b_dimension\": 1").unwrap();
    text.replace_range(at..at + 16, "\"b_dimension\": 3");
    let edited = Certificate::from_json(&text).unwrap();
    assert!(!edited.digest_matches());
    assert!(!replay(&edited, None).unwrap().passed());

    // a resealed edit is caught by recomputation
    let mut resealed = cert.clone();
    let rec = resealed
        .records
        .iter_mut()
        .find(|r| r.claim_id == "small.sl2-9")
        .unwrap();
    rec.witnesses["morphisms"] = json!(111);
    resealed.reseal();
    let report = replay(&resealed, None).unwrap();
    assert!(report.digest_ok);
    assert!(!report.passed());
    let bad: Vec<&str> = report
        .outcomes
        .iter()
        .filter(|o| !o.reproduced)
        .map(|o| o.claim_id.as_str())
        .collect();
    assert_eq!(bad, vec!["small.sl2-9"]);

    // a flipped status is caught as well
    let mut flipped = cert.clone();
    flipped.records[0].status = Status::Fail;
    flipped.reseal();
    assert!(!replay(&flipped, None).unwrap().passed());
}

#[test]
fn empty_and_foreign_certificates() {
    let empty = Certificate::new(json!(null), vec![]);
    assert!(replay(&empty, None).unwrap().passed());
    let mut old = run(&RunConfig {
        suites: vec![Suite::Orders],
        ..RunConfig::default()
    })
    .unwrap();
    old.tool_version = "0.0.0".into();
    assert!(matches!(
        replay(&old, None),
        Err(SuiteError::Cert(CertError::VersionMismatch { .. }))
    ));
}

#[test]
fn invalid_configurations_are_rejected() {
    for config in [
        RunConfig {
            q: 4,
            ..RunConfig::default()
        },
        RunConfig {
            q: 11,
            ..RunConfig::default()
        },
        RunConfig {
            max_degree: 31,
            ..RunConfig::default()
        },
        RunConfig {
            suites: vec![],
            ..RunConfig::default()
        },
    ] {
        assert!(matches!(run(&config), Err(SuiteError::Config(_))));
    }
    assert!("nonsense".parse::<Suite>().is_err());
    for s in Suite::ALL {
        assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
    }
}

#[test]
fn unreachable_scale_is_unknown_not_failed() {
    let c = run(&RunConfig {
        q: 9,
        suites: vec![Suite::BuildSylow, Suite::Orders],
        ..RunConfig::default()
    })
    .unwrap();
    assert_eq!(c.record("sylow.structure").unwrap().status, Status::Unknown);
    assert_eq!(c.record("orders.odd-index").unwrap().status, Status::Pass);
    assert!(!c.has_failures());
}

#[test]
fn clifford_selftest_over_f9() {
    let c = run(&RunConfig {
        q: 9,
        samples: 20,
        suites: vec![Suite::CliffordSelftest],
        ..RunConfig::default()
    })
    .unwrap();
    assert_eq!(c.records[0].status, Status::Pass);
    assert_eq!(c.records[0].witnesses["q"], json!(9));
}

#[test]
fn witnessed_fusion_claims_replay_without_search() {
    let cert = run(&RunConfig {
        suites: vec![Suite::FusionCore],
        ..RunConfig::default()
    })
    .unwrap();
    assert!(!cert.has_failures());
    assert_eq!(
        cert.record("fusion.z-centralizer-saturated")
            .unwrap()
            .status,
        Status::Trusted
    );
    let report = replay(&cert, None).unwrap();
    assert!(report.passed());
    let witnessed: Vec<&str> = report
        .outcomes
        .iter()
        .filter(|o| o.method == "witness")
        .map(|o| o.claim_id.as_str())
        .collect();
    assert_eq!(
        witnessed,
        vec!["fusion.involution-transitivity", "fusion.centralizers-to-z"]
    );

    // keep only the witnessed claims so the tampered replays skip recomputation
    let mut tampered = cert.clone();
    tampered.records.retain(|r| {
        r.claim_id.starts_with("fusion.involution") || r.claim_id == "fusion.centralizers-to-z"
    });
    let garbled_base = tampered.clone();
    let rec = tampered
        .records
        .iter_mut()
        .find(|r| r.claim_id == "fusion.involution-transitivity")
        .unwrap();
    let ws = rec.witnesses["certificate"]["witnesses"]
        .as_array_mut()
        .unwrap();
    let last = ws.len() - 1;
    let t = ws[last]["t"].clone();
    ws[last]["morphism"]["images"][0] = t;
    tampered.reseal();
    let report = replay(&tampered, None).unwrap();
    let o = report
        .outcomes
        .iter()
        .find(|o| o.claim_id == "fusion.involution-transitivity")
        .unwrap();
    assert!(!o.reproduced);
    assert_eq!(o.replayed, Status::Fail);

    let mut garbled = garbled_base;
    let rec = garbled
        .records
        .iter_mut()
        .find(|r| r.claim_id == "fusion.centralizers-to-z")
        .unwrap();
    rec.witnesses = json!({"u": 5, "witnesses": "oops"});
    garbled.reseal();
    let report = replay(&garbled, None).unwrap();
    assert!(!report.passed());
}

//! JSON certificates: per-claim records with witnesses and a SHA-256 digest.
//!
//! The digest covers the tool version, the configuration echo and every record with
//! its wall time removed, so two runs with the same configuration produce the same
//! digest.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Schema version of the certificate format.
pub const SCHEMA_VERSION: u32 = 1;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Taken from the literature rather than checked.
    Trusted,
    /// Not decidable at this scale.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimRecord {
    pub claim_id: String,
    /// What the claim asserts, in one line.
    pub statement: String,
    pub status: Status,
    pub witnesses: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: u32,
    pub tool_version: String,
    pub config: Value,
    pub records: Vec<ClaimRecord>,
    pub digest: String,
}

#[derive(Debug, Error)]
pub enum CertError {
    #[error("certificate version {found} does not match {expected}")]
    VersionMismatch { found: String, expected: String },
    #[error("witness for {0} is malformed")]
    WitnessCorrupt(String),
    #[error("invalid certificate JSON: {0}")]
    Json(#[from] serde_json::Error),
}

fn digest_of(tool_version: &str, config: &Value, records: &[ClaimRecord]) -> String {
    let stripped: Vec<ClaimRecord> = records
        .iter()
        .map(|r| ClaimRecord {
            wall_ms: None,
            ..r.clone()
        })
        .collect();
    // serde_json maps are ordered, so this serialization is canonical
    let body = serde_json::json!({
        "tool_version": tool_version,
        "config": config,
        "records": stripped,
    });
    let bytes = serde_json::to_vec(&body).expect("certificate body serializes");
    hex::encode(Sha256::digest(bytes))
}

impl Certificate {
    pub fn new(config: Value, records: Vec<ClaimRecord>) -> Certificate {
        let digest = digest_of(TOOL_VERSION, &config, &records);
        Certificate {
            schema: SCHEMA_VERSION,
            tool_version: TOOL_VERSION.to_string(),
            config,
            records,
            digest,
        }
    }

    pub fn digest_matches(&self) -> bool {
        digest_of(&self.tool_version, &self.config, &self.records) == self.digest
    }

    /// Recomputes the digest after the records were edited.
    pub fn reseal(&mut self) {
        self.digest = digest_of(&self.tool_version, &self.config, &self.records);
    }

    pub fn check_version(&self) -> Result<(), CertError> {
        if self.schema != SCHEMA_VERSION || self.tool_version != TOOL_VERSION {
            return Err(CertError::VersionMismatch {
                found: format!("{} (schema {})", self.tool_version, self.schema),
                expected: format!("{TOOL_VERSION} (schema {SCHEMA_VERSION})"),
            });
        }
        Ok(())
    }

    pub fn has_failures(&self) -> bool {
        self.records.iter().any(|r| r.status == Status::Fail)
    }

    pub fn record(&self, claim_id: &str) -> Option<&ClaimRecord> {
        self.records.iter().find(|r| r.claim_id == claim_id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Certificate, CertError> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, ms: Option<u64>) -> ClaimRecord {
        ClaimRecord {
            claim_id: id.into(),
            statement: "s".into(),
            status: Status::Pass,
            witnesses: serde_json::json!({"k": [1, 2]}),
            wall_ms: ms,
        }
    }

    #[test]
    fn digest_ignores_wall_time() {
        let a = Certificate::new(Value::Null, vec![rec("x", Some(5))]);
        let b = Certificate::new(Value::Null, vec![rec("x", None)]);
        assert_eq!(a.digest, b.digest);
        assert!(a.digest_matches());
    }

    #[test]
    fn digest_sees_witness_edits() {
        let mut c = Certificate::new(Value::Null, vec![rec("x", None)]);
        c.records[0].witnesses = serde_json::json!({"k": [1, 3]});
        assert!(!c.digest_matches());
        c.reseal();
        assert!(c.digest_matches());
    }

    #[test]
    fn round_trip() {
        let c = Certificate::new(serde_json::json!({"q": 3}), vec![rec("x", Some(1))]);
        assert_eq!(Certificate::from_json(&c.to_json()).unwrap(), c);
    }
}

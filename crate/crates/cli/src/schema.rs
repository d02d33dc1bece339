//! JSON forms of instances, corpora and verification reports.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use galmod::corpus::{Character, Instance};
use galmod::sweep::{Caps, Failure, SweepSummary};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ChiJson {
    pub values: Vec<u64>,
    pub modulus: u64,
}

/// One module with an action. Matrices are row-major, acting on column
/// vectors in the coordinates of `factors`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct InstanceJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<u32>,
    #[serde(default)]
    pub id: String,
    pub factors: Vec<u64>,
    #[serde(default)]
    pub generators: Vec<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<ChiJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_prime: Option<Vec<Vec<i64>>>,
    /// an element for `almost-fixed element`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<Vec<i64>>,
}

impl InstanceJson {
    pub fn to_instance(&self) -> Instance {
        Instance {
            id: self.id.clone(),
            factors: self.factors.clone(),
            generators: self.generators.clone(),
            chi: self.chi.as_ref().map(|c| Character { modulus: c.modulus, values: c.values.clone() }),
            p: self.p,
            m_prime: self.m_prime.clone(),
        }
    }

    pub fn from_instance(i: &Instance) -> Self {
        InstanceJson {
            schema_version: None,
            id: i.id.clone(),
            factors: i.factors.clone(),
            generators: i.generators.clone(),
            chi: i.chi.as_ref().map(|c| ChiJson { values: c.values.clone(), modulus: c.modulus }),
            p: i.p,
            m_prime: i.m_prime.clone(),
            element: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CorpusJson {
    pub schema_version: u32,
    pub instances: Vec<InstanceJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FailureJson {
    pub instance: String,
    pub witness: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CapsJson {
    pub order: u64,
    pub closure: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ReportJson {
    pub schema_version: u32,
    pub tool_version: String,
    pub oracle: String,
    /// `"default"` or the corpus file path
    pub corpus: String,
    pub caps: CapsJson,
    /// the default corpus is enumerated, not sampled
    pub seed: Option<u64>,
    pub instance_count: usize,
    pub hypothesis_met: usize,
    pub passed: usize,
    pub skipped: usize,
    pub failures: Vec<FailureJson>,
    pub wall_time_secs: f64,
    pub status: String,
}

impl ReportJson {
    pub fn new(s: &SweepSummary, corpus: &str, caps: Caps, secs: f64) -> Self {
        ReportJson {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            oracle: s.oracle.clone(),
            corpus: corpus.to_string(),
            caps: CapsJson { order: caps.order, closure: caps.closure },
            seed: None,
            instance_count: s.instances,
            hypothesis_met: s.hypothesis_met,
            passed: s.passed,
            skipped: s.skipped,
            failures: s.failures.iter().map(|f: &Failure| FailureJson { instance: f.instance.clone(), witness: f.witness.clone() }).collect(),
            wall_time_secs: secs,
            status: status(s).to_string(),
        }
    }

    /// Everything but timing and version.
    pub fn same_outcome(&self, other: &ReportJson) -> bool {
        self.oracle == other.oracle
            && self.instance_count == other.instance_count
            && self.hypothesis_met == other.hypothesis_met
            && self.passed == other.passed
            && self.skipped == other.skipped
            && self.failures == other.failures
            && self.status == other.status
    }
}

pub fn status(s: &SweepSummary) -> &'static str {
    if !s.failures.is_empty() {
        "fail"
    } else if s.skipped > 0 {
        "cap-exceeded"
    } else {
        "pass"
    }
}

/// Parses JSON, naming the path of the offending field on failure.
pub fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        anyhow!("{what}: at {path}: {}", e.inner())
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_json(&text, what)
}

pub fn check_version(v: Option<u32>, what: &str) -> Result<()> {
    match v {
        Some(SCHEMA_VERSION) | None => Ok(()),
        Some(v) => bail!("{what}: unsupported schema_version {v} (expected {SCHEMA_VERSION})"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_round_trip() {
        let text = r#"{"schema_version": 1, "factors": [5, 5], "generators": [[[0, 1], [-1, 0]]],
                       "chi": {"values": [2], "modulus": 10}, "p": 5}"#;
        let j: InstanceJson = parse_json(text, "instance").unwrap();
        let i = j.to_instance();
        assert_eq!(i.chi.as_ref().unwrap().modulus, 10);
        let back = InstanceJson::from_instance(&i);
        assert_eq!(back.to_instance(), i);
    }

    #[test]
    fn parse_errors_carry_paths() {
        let text = r#"{"factors": [5, 5], "generators": [[[0, "x"]]]}"#;
        let e = parse_json::<InstanceJson>(text, "instance").unwrap_err().to_string();
        assert!(e.contains("generators[0][0][1]"), "{e}");
        let e = parse_json::<InstanceJson>(r#"{"factors": [2], "colour": 1}"#, "instance").unwrap_err().to_string();
        assert!(e.contains("colour"), "{e}");
    }
}

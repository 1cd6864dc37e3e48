//! Machine-readable reports.
//!
//! One JSON schema serves every subcommand. Reports are deterministic:
//! the same command and seed produce byte-identical JSON except for the
//! `timing_ms` field.

use altsum_core::{
    CheckResult, GridSpec, MembershipVerdict, PropertySet, SearchOutcome, SearchStrategy, TOL_BASE,
};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    /// Echo of the invoked command line (without the program name);
    /// replaying it reproduces the report up to timing.
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expression: Option<String>,
    /// Canonical form; parsing it yields the same tree.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub canonical: Option<String>,
    pub seed: u64,
    pub tolerance: Tolerance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub properties: Option<PropertyReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replication: Option<Vec<ReplicationEntry>>,
    pub timing_ms: f64,
}

impl Report {
    pub fn new(command: String, seed: u64) -> Self {
        Report {
            tool: "altsum",
            version: env!("CARGO_PKG_VERSION"),
            command,
            expression: None,
            canonical: None,
            seed,
            tolerance: Tolerance::default(),
            properties: None,
            checks: Vec::new(),
            search: None,
            replication: None,
            timing_ms: 0.0,
        }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}

#[derive(Debug, Serialize)]
pub struct Tolerance {
    pub base: f64,
    pub policy: &'static str,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            base: TOL_BASE,
            policy: "base * max(1, |values|) relative-absolute hybrid",
        }
    }
}

/// Propagated property flags plus any grid verdicts that were run.
#[derive(Debug, Serialize)]
pub struct PropertyReport {
    pub propagated: PropertySet,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridReport>,
}

#[derive(Debug, Serialize)]
pub struct GridReport {
    pub spec: GridSpec,
    /// Superadditivity sweep; absent when propagation already proved
    /// membership and the sweep was not forced.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub membership: Option<MembershipVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convexity: Option<MembershipVerdict>,
}

#[derive(Debug, Serialize)]
pub struct CheckEntry {
    pub sequence: Vec<f64>,
    #[serde(flatten)]
    pub result: CheckResult,
}

#[derive(Debug, Serialize)]
pub struct SearchReport {
    pub strategy: SearchStrategy,
    pub m: usize,
    pub bound: f64,
    pub budget: u64,
    #[serde(flatten)]
    pub outcome: SearchOutcome,
}

#[derive(Debug, Serialize)]
pub struct ReplicationEntry {
    pub name: &'static str,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

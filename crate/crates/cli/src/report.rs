//! On-disk result format: one report per command invocation.
//!
//! Reports are deterministic — evidence lives in a sorted map, floats are
//! emitted with shortest round-trip formatting, and the version string comes
//! from the crate manifest — so identical inputs yield identical bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use snlkit_core::nalgebra::DVector;
use snlkit_core::{CheckReport, ExtReal, Status, Witness};

/// One evidence value: a scalar, a vector, or a short text token
/// (`"inf"`/`"-inf"` for non-finite extended reals).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Evidence {
    Number(f64),
    Vector(Vec<f64>),
    Text(String),
}

/// A labelled witness vector attached to a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub label: String,
    pub vector: Vec<f64>,
}

/// The complete result of one command invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    /// Which command produced this report.
    pub command: String,
    /// `"Pass"`, `"Fail"`, or `"Inconclusive"`.
    pub status: String,
    /// Identifier of the decision rule or formula applied.
    pub criterion: String,
    /// Named numeric evidence, sorted by key.
    pub evidence: BTreeMap<String, Evidence>,
    /// Witness vectors; present exactly when the verdict needs backing data.
    pub witnesses: Vec<WitnessEntry>,
    /// Version of the toolkit that wrote the report.
    pub version: String,
    /// The seed used by any randomized step, echoed for reproducibility.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ReportFile {
    /// Start an empty report for `command` with the given verdict.
    pub fn new(command: &str, status: Status, criterion: &str, seed: Option<u64>) -> Self {
        ReportFile {
            command: command.to_string(),
            status: status.as_str().to_string(),
            criterion: criterion.to_string(),
            evidence: BTreeMap::new(),
            witnesses: Vec::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
        }
    }

    /// Build a report from a library check, labelling any witness.
    ///
    /// `single` names a plain vector witness; `pair` names the two halves of
    /// a product-space witness.
    pub fn from_check(
        command: &str,
        check: &CheckReport,
        seed: Option<u64>,
        single: &str,
        pair: (&str, &str),
    ) -> Self {
        let mut out = ReportFile::new(command, check.status, &check.criterion, seed);
        for (key, value) in &check.evidence {
            out.evidence
                .insert(key.clone(), Evidence::Number(*value));
        }
        out.evidence
            .insert("tolerance".to_string(), Evidence::Number(check.tolerance));
        match &check.witness {
            None => {}
            Some(Witness::Vector(v)) => {
                out.push_witness(single, v);
            }
            Some(Witness::Pair(x, y)) => {
                out.push_witness(pair.0, x);
                out.push_witness(pair.1, y);
            }
        }
        out
    }

    /// Insert a scalar evidence value.
    pub fn number(&mut self, key: &str, value: f64) -> &mut Self {
        self.evidence
            .insert(key.to_string(), Evidence::Number(value));
        self
    }

    /// Insert a vector evidence value.
    pub fn vector(&mut self, key: &str, v: &DVector<f64>) -> &mut Self {
        self.evidence
            .insert(key.to_string(), Evidence::Vector(v.iter().copied().collect()));
        self
    }

    /// Insert an extended-real evidence value (`"inf"`/`"-inf"` as text).
    pub fn ext_real(&mut self, key: &str, value: ExtReal) -> &mut Self {
        let entry = match value {
            ExtReal::Finite(x) => Evidence::Number(x),
            ExtReal::PosInf => Evidence::Text("inf".to_string()),
            ExtReal::NegInf => Evidence::Text("-inf".to_string()),
        };
        self.evidence.insert(key.to_string(), entry);
        self
    }

    /// Attach a labelled witness vector.
    pub fn push_witness(&mut self, label: &str, v: &DVector<f64>) -> &mut Self {
        self.witnesses.push(WitnessEntry {
            label: label.to_string(),
            vector: v.iter().copied().collect(),
        });
        self
    }

    /// Process exit code implied by the verdict: `Fail` is 1, all else 0.
    pub fn exit_code(&self) -> i32 {
        if self.status == Status::Fail.as_str() {
            1
        } else {
            0
        }
    }

    /// Serialize with stable formatting (pretty, sorted keys, trailing
    /// newline).
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

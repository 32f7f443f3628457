//! Machine-readable reports, the product of every CLI invocation.
//!
//! A report is a single JSON document with a declared schema version.
//! Identical inputs must produce byte-identical documents except for the
//! timing field, so serialization goes through `serde_json::Value`, whose
//! object keys are kept in sorted order.

use serde::Serialize;

use crate::error::{Error, Result};

/// Schema version, bumped on any layout change.
pub const SCHEMA_VERSION: &str = "1";

/// Versioned envelope around one command's echoed inputs and result payload.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Report {
    pub schema_version: String,
    pub command: String,
    pub inputs: serde_json::Value,
    pub result: serde_json::Value,
    pub timing_ms: u64,
}

fn to_value(v: impl Serialize) -> Result<serde_json::Value> {
    serde_json::to_value(v).map_err(|e| Error::Invalid(format!("report serialization: {e}")))
}

impl Report {
    /// Builds the envelope, serializing inputs and result right away so any
    /// failure surfaces here rather than at print time.
    pub fn new(
        command: &str,
        inputs: impl Serialize,
        result: impl Serialize,
        timing_ms: u64,
    ) -> Result<Report> {
        Ok(Report {
            schema_version: SCHEMA_VERSION.into(),
            command: command.into(),
            inputs: to_value(inputs)?,
            result: to_value(result)?,
            timing_ms,
        })
    }

    /// The pretty-printed document, keys sorted, newline-terminated.
    pub fn to_json(&self) -> Result<String> {
        let value = to_value(self)?;
        let body = serde_json::to_string_pretty(&value)
            .map_err(|e| Error::Invalid(format!("report serialization: {e}")))?;
        Ok(format!("{body}\n"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_is_sorted_and_stable_modulo_timing() {
        let inputs = serde_json::json!({ "beta": "3", "alpha": "2" });
        let a = Report::new("certify", &inputs, serde_json::json!({ "z": 1, "a": 2 }), 5)
            .unwrap()
            .to_json()
            .unwrap();
        let b = Report::new("certify", &inputs, serde_json::json!({ "z": 1, "a": 2 }), 99)
            .unwrap()
            .to_json()
            .unwrap();
        assert!(a.ends_with('\n'));
        // Keys come out sorted at every level.
        let ca = a.find("\"command\"").unwrap();
        let ia = a.find("\"inputs\"").unwrap();
        let ra = a.find("\"result\"").unwrap();
        let sa = a.find("\"schema_version\"").unwrap();
        let ta = a.find("\"timing_ms\"").unwrap();
        assert!(ca < ia && ia < ra && ra < sa && sa < ta);
        assert!(a.find("\"alpha\"").unwrap() < a.find("\"beta\"").unwrap());
        // Only the timing line differs between the two runs.
        let strip = |s: &str| {
            s.lines()
                .filter(|l| !l.contains("timing_ms"))
                .collect::<Vec<_>>()
                .join("\n")
        };
        assert_ne!(a, b);
        assert_eq!(strip(&a), strip(&b));
    }

    #[test]
    fn vertex_and_word_payloads_render_canonically() {
        let vertex = crate::building::ApartmentVertex::new(vec![-1, 0, 0]);
        assert_eq!(
            serde_json::to_value(&vertex).unwrap(),
            serde_json::json!("L[0,1,1]")
        );
        let word: crate::words::F2Word = "aB".parse().unwrap();
        assert_eq!(serde_json::to_value(&word).unwrap(), serde_json::json!("aB"));
    }
}

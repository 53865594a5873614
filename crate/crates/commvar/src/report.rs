//! Versioned structured report records, shared by the CLI and the
//! finite-field engine.
//!
//! Reports are deterministic: the budget figure is the a-priori work
//! estimate (a pure function of the parameters) and the wall-clock runtime
//! is only attached on request, so a fixed seed yields byte-identical
//! structured output for any thread count.

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub operation: String,
    pub parameters: serde_json::Value,
    pub result: serde_json::Value,
    pub citations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub budget_used: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl Report {
    pub fn new(
        operation: &str,
        parameters: serde_json::Value,
        result: serde_json::Value,
        citations: Vec<String>,
    ) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            operation: operation.to_string(),
            parameters,
            result,
            citations,
            seed: None,
            budget_used: 0,
            runtime_ms: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_budget(mut self, budget_used: u64) -> Self {
        self.budget_used = budget_used;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_round_trip() {
        let r = Report::new(
            "classify-borel",
            serde_json::json!({"type": "B6"}),
            serde_json::json!({"status": "irreducible"}),
            vec!["criterion:borel-irreducibility-modality-sweep".into()],
        )
        .with_budget(7);
        let text = r.to_json();
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.schema_version, SCHEMA_VERSION);
        assert!(!text.contains("runtime_ms"));
    }
}

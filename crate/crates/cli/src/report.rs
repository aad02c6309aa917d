//! The machine-readable run report. Field names are stable; every value is
//! a string holding an exact rational or interval, so the document
//! round-trips losslessly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceSummary {
    /// Recorded bisection/partition steps, when the operation reports them.
    pub steps: u64,
    /// Queries charged to the budget, when known (always on exhaustion).
    pub queries: u64,
    /// Deepest approximation precision requested.
    pub deepest_precision: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub millis: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    /// One of `decided`, `exhausted`, `precondition-failed`,
    /// `invalid-expression`.
    pub outcome: String,
    /// The decided dichotomy branch, when there is one.
    pub branch: Option<String>,
    /// The branch's main payload: an exact rational or `[lo, hi]` interval.
    pub value: Option<String>,
    /// Re-checkable statements backing the branch.
    pub certificates: Vec<String>,
    pub trace: TraceSummary,
    pub timing: Timing,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            outcome: String::new(),
            branch: None,
            value: None,
            certificates: Vec::new(),
            trace: TraceSummary::default(),
            timing: Timing::default(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization is total")
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command:  {}\n", self.command));
        for (k, v) in &self.inputs {
            out.push_str(&format!("  {k}: {v}\n"));
        }
        out.push_str(&format!("outcome:  {}", self.outcome));
        if let Some(branch) = &self.branch {
            out.push_str(&format!(" ({branch})"));
        }
        out.push('\n');
        if let Some(value) = &self.value {
            out.push_str(&format!("value:    {value}\n"));
        }
        for c in &self.certificates {
            out.push_str(&format!("  - {c}\n"));
        }
        out.push_str(&format!(
            "trace:    steps {}, queries {}, deepest precision {}\n",
            self.trace.steps, self.trace.queries, self.trace.deepest_precision
        ));
        out.push_str(&format!("timing:   {} ms\n", self.timing.millis));
        out
    }
}

//! Report assembly and rendering. JSON output carries no timings so identical
//! configs give byte-identical reports.

use crate::config::RunConfig;
use serde::Serialize;
use serde_json::Value;
use swk3::suite::{Check, Verdict};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub precision: u32,
}

/// A computed text table shown next to the printed one it should reproduce.
#[derive(Debug, Clone, Serialize)]
pub struct TableBlock {
    pub title: String,
    pub computed: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub provenance: Provenance,
    pub config: RunConfig,
    pub verdicts: Vec<Check>,
    pub tables: Vec<TableBlock>,
    pub data: Value,
    pub passed: bool,
}

impl Report {
    pub fn new(config: &RunConfig, verdicts: Vec<Check>, tables: Vec<TableBlock>, data: Value) -> Self {
        let passed = verdicts.iter().all(|c| c.verdict != Verdict::Fail);
        Report {
            schema: SCHEMA,
            provenance: Provenance {
                tool: "swk3",
                version: env!("CARGO_PKG_VERSION"),
                seed: config.seed,
                precision: config.precision,
            },
            config: config.clone(),
            verdicts,
            tables,
            data,
            passed,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_table(&self) -> String {
        let mut s = format!(
            "swk3 {} | schema {} | command {} | seed {} | precision {}\n",
            self.provenance.version,
            self.schema,
            serde_json::to_value(self.config.command).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
            self.provenance.seed,
            self.provenance.precision
        );
        for t in &self.tables {
            s.push_str(&format!("\n== {} (computed)\n{}", t.title, t.computed));
            if let Some(e) = &t.expected {
                s.push_str(&format!("\n== {} (printed)\n{}", t.title, e));
            }
        }
        s.push('\n');
        for c in &self.verdicts {
            let tag = match c.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
                Verdict::Discrepancy => "NOTE",
            };
            s.push_str(&format!("[{tag}] {}\n", c.name));
            if c.verdict != Verdict::Pass && !c.detail.is_null() {
                s.push_str(&format!("       {}\n", c.detail));
            }
        }
        let failed = self.verdicts.iter().filter(|c| c.verdict == Verdict::Fail).count();
        let notes = self.verdicts.iter().filter(|c| c.verdict == Verdict::Discrepancy).count();
        s.push_str(&format!(
            "\n{} verdicts: {} failed, {} discrepancies with printed formulas\n",
            self.verdicts.len(),
            failed,
            notes
        ));
        s
    }
}

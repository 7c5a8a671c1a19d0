//! Run configuration: JSON ingestion with unknown-key rejection, defaults for
//! every field, and command-line overrides.

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;
use swk3::arith::{q, serde_q, Q};
use swk3::families::FamilyParameters;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Family,
    Basechange,
    Isogeny,
    Monodromy,
    Periods,
    Kummer,
    Lattice,
    VerifyPaper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum Model {
    #[value(name = "X")]
    X,
    #[value(name = "Y")]
    Y,
    #[serde(rename = "Xsw")]
    #[value(name = "Xsw")]
    XSw,
    #[serde(rename = "Ysw")]
    #[value(name = "Ysw")]
    YSw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Sw,
    K3,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum PeriodCheck {
    Theta,
    Ucoord,
    Jmap,
    Ratio,
    Yukawa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    Roots,
    Abc,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum LatticeCase {
    #[value(name = "A1")]
    A1,
    #[value(name = "D16")]
    D16,
    #[value(name = "D8A7")]
    D8A7,
    #[value(name = "H")]
    H,
    #[serde(rename = "custom")]
    #[value(name = "custom")]
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub command: Command,
    pub model: Model,
    #[serde(with = "serde_q")]
    pub a: Q,
    #[serde(with = "serde_q")]
    pub b: Q,
    #[serde(with = "serde_q")]
    pub c: Q,
    #[serde(with = "serde_q::vec")]
    pub theta: Vec<Q>,
    #[serde(with = "serde_q")]
    pub a0: Q,
    pub emit: Emit,
    pub which: Which,
    pub check: PeriodCheck,
    pub samples: usize,
    pub precision: u32,
    pub seed: u64,
    /// `None` selects the per-check default.
    pub tol: Option<f64>,
    pub format: Format,
    pub case: LatticeCase,
    /// Gram matrix for `case = custom`.
    pub gram: Option<Vec<Vec<i64>>>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: Command::VerifyPaper,
            model: Model::Y,
            a: q(1),
            b: q(2),
            c: q(3),
            theta: [0, 1, 3, 7, 11, 23].map(q).to_vec(),
            a0: q(1),
            emit: Emit::Verify,
            which: Which::All,
            check: PeriodCheck::Theta,
            samples: 20,
            precision: 192,
            seed: 7,
            tol: None,
            format: Format::Table,
            case: LatticeCase::D16,
            gram: None,
        }
    }
}

impl RunConfig {
    pub fn params(&self) -> FamilyParameters {
        FamilyParameters::new(self.a.clone(), self.b.clone(), self.c.clone())
    }
}

/// Parses a config document; errors name the offending field path.
pub fn parse(text: &str) -> Result<RunConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        anyhow::anyhow!("invalid config at `{path}`: {}", e.into_inner())
    })
}

pub fn ingest(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    parse(&text).with_context(|| format!("in {}", path.display()))
}

pub fn read_gram(path: &Path) -> Result<Vec<Vec<i64>>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading Gram matrix {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{} is not a JSON integer matrix", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_takes_defaults() {
        let c = parse(r#"{"command": "verify-paper"}"#).unwrap();
        assert_eq!(c, RunConfig::default());
    }

    #[test]
    fn bad_rational_names_field() {
        let e = parse(r#"{"command": "family", "b": "1/0"}"#).unwrap_err().to_string();
        assert!(e.contains("`b`"), "{e}");
    }

    #[test]
    fn unknown_key_rejected() {
        let e = parse(r#"{"command": "family", "sead": 3}"#).unwrap_err().to_string();
        assert!(e.contains("sead"), "{e}");
    }

    #[test]
    fn round_trip() {
        let mut c = RunConfig::default();
        c.command = Command::Lattice;
        c.case = LatticeCase::Custom;
        c.gram = Some(vec![vec![2, 1], vec![1, 2]]);
        c.tol = Some(1e-9);
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(parse(&text).unwrap(), c);
    }
}
